"""Build the optional compiled search kernels.

The package is fully functional without them; ``dimkit.kernels`` falls back
to the pure-Python implementation when the extension is missing.
"""
from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "dimkit._ckernels",
                ["src/dimkit/_ckernels.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
