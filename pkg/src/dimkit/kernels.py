"""Backend selection for the combinatorial search kernels.

The compiled extension is used when it imported successfully and the table
fits in 64-bit bitsets; otherwise the pure-Python kernels run.  Set
``DIMKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("DIMKIT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
NO_LIMIT = _pykernels.NO_LIMIT
C_MAX_BITS = 64


def _module(n_points: int, n_funcs: int, backend: str | None):
    backend = backend or BACKEND
    if backend == "python" or _ckernels is None:
        return _pykernels
    if n_points > C_MAX_BITS or n_funcs > C_MAX_BITS:
        return _pykernels
    return _ckernels


def eluder(agree, n_points, limit=None, backend=None):
    mod = _module(n_points, len(agree), backend)
    return mod.eluder(list(agree), n_points, NO_LIMIT if limit is None else limit)


def star(agree, n_points, limit=None, backend=None):
    mod = _module(n_points, len(agree), backend)
    return mod.star(list(agree), n_points, NO_LIMIT if limit is None else limit)


def threshold(agree, n_points, limit=None, backend=None):
    mod = _module(n_points, len(agree), backend)
    return mod.threshold(list(agree), n_points, NO_LIMIT if limit is None else limit)


def littlestone(plus_at, n_funcs, backend=None):
    mod = _module(0, n_funcs, backend)
    return mod.littlestone(list(plus_at), n_funcs)
