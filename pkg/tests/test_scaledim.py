from fractions import Fraction

import pytest

from dimkit.classes import FunctionClassTable, ReferenceFunction, gen_scale_counterexample, gen_thresholds
from dimkit.combodim import dim_comb
from dimkit.errors import ConstructionFailure, InvalidParameter
from dimkit.oracles import naive_dimension
from dimkit.scaledim import (EXACT, SUP, ScaleSearchConfig, dim_scale, dim_sup_over_scales,
                             edim_scale, gen_linear_eluder_witness, gen_relu_star_witness,
                             linear_witness_length, relu_packing, relu_star_instance, relu_target,
                             sdim_scale, tdim_scale)
from dimkit.witness import verify_witness

HALF = Fraction(1, 2)


@pytest.mark.parametrize("N", [3, 8])
def test_counterexample_values(N):
    t = gen_scale_counterexample(N, HALF)
    ref = ReferenceFunction.constant(N, 0)
    cfg = ScaleSearchConfig(HALF)
    reps = [f(t, ref, cfg) for f in (edim_scale, sdim_scale, tdim_scale)]
    assert [r.value for r in reps] == [N, 2, 1]
    assert all(verify_witness(t, r.witness) for r in reps)
    assert reps[0].extra == {"mode": EXACT, "length_cap": 4 * N}


def test_sup_over_scales_uses_limits_from_below():
    t = gen_scale_counterexample(4, Fraction(1))
    ref = ReferenceFunction.constant(4, 0)
    assert dim_scale(t, ref, "sdim", ScaleSearchConfig(HALF)).value == 1
    rep = dim_sup_over_scales(t, ref, "sdim", HALF)
    assert rep.value == 2
    assert rep.extra["limit_from_below"] and rep.extra["candidate"] == "101/100"
    # the reported witness lives at a concrete scale just below the candidate
    assert HALF <= rep.witness.scale < Fraction(101, 100)
    assert verify_witness(t, rep.witness)


def test_sup_mode_via_config_matches_direct_call():
    t = gen_scale_counterexample(4, Fraction(1))
    ref = ReferenceFunction.constant(4, 0)
    a = dim_scale(t, ref, "edim", ScaleSearchConfig(Fraction(9, 10), sup_mode=SUP))
    b = dim_sup_over_scales(t, ref, "edim", Fraction(9, 10))
    assert a.value == b.value == 4


def test_sup_is_monotone_in_eps_min():
    t = gen_scale_counterexample(5, Fraction(1))
    ref = ReferenceFunction.constant(5, 0)
    vals = [dim_sup_over_scales(t, ref, "edim", Fraction(k, 10)).value for k in range(1, 12)]
    assert vals == sorted(vals, reverse=True)


def test_binary_tables_agree_with_combinatorial_search():
    t = gen_thresholds(5)
    ref = ReferenceFunction.col(5)
    for kind in ("edim", "sdim", "tdim"):
        assert dim_scale(t, ref, kind, ScaleSearchConfig(Fraction(1, 3))).value == \
            dim_comb(t, ref, kind).value


def test_length_cap_truncates_and_marks_inexact():
    t = gen_scale_counterexample(6, HALF)
    ref = ReferenceFunction.constant(6, 0)
    rep = edim_scale(t, ref, ScaleSearchConfig(HALF, length_cap=3))
    assert rep.value == 3 and not rep.exact
    assert verify_witness(t, rep.witness)


def test_small_real_table_against_naive():
    t = FunctionClassTable.from_matrix(
        [[Fraction(3, 4), 0, Fraction(-1, 2)], [Fraction(1, 4), 1, 0], [0, Fraction(1, 2), 1]],
        kind="real")
    for ref in (ReferenceFunction.col(0), ReferenceFunction.constant(3, 0)):
        for kind in ("eluder", "star", "threshold"):
            got = dim_scale(t, ref, kind, ScaleSearchConfig(Fraction(1, 3), length_cap=6)).value
            assert got == naive_dimension(t, ref.resolve(t), kind, Fraction(1, 3), cap=6)


@pytest.mark.parametrize("d,eps,length", [(1, "1/10", 4), (1, "1/100", 7), (2, "1/10", 8),
                                          (2, "1/100", 14)])
def test_linear_ladder_witness(d, eps, length):
    eps = Fraction(eps)
    t, w = gen_linear_eluder_witness(d, eps)
    assert len(w) == length == linear_witness_length(d, eps)
    assert w.scale == eps
    assert verify_witness(t, w)
    assert edim_scale(t, w.reference, ScaleSearchConfig(eps)).value == length


def test_relu_packing_sizes_are_frozen():
    eps = Fraction(1, 20)
    assert [len(relu_packing(d, eps)) for d in (1, 2, 3)] == [2, 14, 82]
    assert relu_target(1, eps) == 2 and relu_target(2, eps) == 10 and relu_target(3, eps) == 32


def test_relu_packing_is_separated_and_unit():
    eps = Fraction(1, 20)
    c = 1 - 2 * eps / 2
    U = relu_packing(2, eps)
    assert all(sum(v * v for v in u) == 1 for u in U)
    for a in range(len(U)):
        for b in range(a + 1, len(U)):
            assert sum(x * y for x, y in zip(U[a], U[b])) <= c


def test_relu_star_witness_verifies():
    t, w = gen_relu_star_witness(2, Fraction(1, 20))
    assert len(w) == 14 and verify_witness(t, w)
    assert all(t.values[i][i] == Fraction(1, 20) for i in range(len(w)))


def test_relu_construction_failure_reports_achieved():
    with pytest.raises(ConstructionFailure) as err:
        relu_star_instance(3, Fraction(1, 20), budget=10)
    assert err.value.achieved == 10


def test_parameter_errors():
    with pytest.raises(InvalidParameter):
        ScaleSearchConfig(0)
    with pytest.raises(InvalidParameter):
        ScaleSearchConfig(HALF, length_cap=0)
    with pytest.raises(InvalidParameter):
        ScaleSearchConfig(HALF, sup_mode="median")
    with pytest.raises(InvalidParameter):
        relu_packing(7, Fraction(1, 20))
    with pytest.raises(InvalidParameter):
        relu_packing(2, Fraction(1, 2))
    with pytest.raises(InvalidParameter):
        dim_sup_over_scales(gen_thresholds(2), ReferenceFunction.col(0), "edim", 0)
