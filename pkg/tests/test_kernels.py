import random

import pytest

from dimkit import kernels
from dimkit.classes import ReferenceFunction, gen_parities, gen_thresholds
from dimkit.combodim import agree_masks, dim_comb, ldim

needs_c = pytest.mark.skipif(kernels._ckernels is None, reason="compiled kernels not built")


def _random_masks(rng, n, m):
    return [rng.getrandbits(n) for _ in range(m)]


@needs_c
@pytest.mark.parametrize("kind", ["eluder", "star", "threshold"])
def test_backends_agree_on_random_masks(kind):
    rng = random.Random(7)
    for _ in range(300):
        n, m = rng.randint(1, 9), rng.randint(1, 9)
        masks = _random_masks(rng, n, m)
        c = getattr(kernels._ckernels, kind)(list(masks), n, kernels.NO_LIMIT)
        p = getattr(kernels._pykernels, kind)(list(masks), n, kernels.NO_LIMIT)
        # same value and the same tie-broken witness
        assert c[:3] == p[:3]


@needs_c
def test_backends_agree_on_littlestone():
    rng = random.Random(11)
    for _ in range(200):
        n, m = rng.randint(1, 7), rng.randint(1, 10)
        plus_at = [rng.getrandbits(m) for _ in range(n)]
        assert kernels._ckernels.littlestone(plus_at, m)[0] == \
            kernels._pykernels.littlestone(plus_at, m)[0]


@needs_c
def test_limit_respected_by_both_backends():
    t = gen_thresholds(10)
    masks = agree_masks(t, t.column(10))
    for mod in (kernels._ckernels, kernels._pykernels):
        assert mod.eluder(masks, 10, 4)[0] == 4


def test_python_backend_selectable():
    t = gen_parities(3)
    ref = ReferenceFunction.col(0)
    assert dim_comb(t, ref, "edim", backend="python").value == 3
    assert ldim(t, backend="python") == 3


def test_wide_tables_fall_back_to_python():
    t = gen_thresholds(70)
    assert dim_comb(t, ReferenceFunction.col(70), "tdim", limit=3).value == 3
