import os

from hypothesis import HealthCheck, settings, strategies as st

from dimkit.classes import FunctionClassTable

settings.register_profile(
    "default", deadline=None, max_examples=int(os.environ.get("DIMKIT_HYPOTHESIS_EXAMPLES", "60")),
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def binary_tables(draw, max_points=6, max_funcs=6, min_points=1, min_funcs=1):
    n = draw(st.integers(min_points, max_points))
    m = draw(st.integers(min_funcs, max_funcs))
    rows = draw(st.lists(st.lists(st.sampled_from([1, -1]), min_size=m, max_size=m),
                         min_size=n, max_size=n))
    return FunctionClassTable.from_matrix(rows, kind="binary")


@st.composite
def real_tables(draw, max_points=4, max_funcs=4):
    from fractions import Fraction
    n = draw(st.integers(1, max_points))
    m = draw(st.integers(1, max_funcs))
    vals = st.integers(-6, 6).map(lambda k: Fraction(k, 4))
    rows = draw(st.lists(st.lists(vals, min_size=m, max_size=m), min_size=n, max_size=n))
    return FunctionClassTable.from_matrix(rows, kind="real")
