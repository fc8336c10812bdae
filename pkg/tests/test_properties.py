"""Invariants checked on generated tables."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import binary_tables, real_tables
from dimkit.classes import ReferenceFunction, gen_parities, gen_singletons, gen_thresholds
from dimkit.combodim import dim_comb, dim_sup_over_refs, edim_upper_bound
from dimkit.ramsey import (color_from_witness, decode_coloring, extract_subsequence,
                           find_mono_clique, guaranteed_clique_size)
from dimkit.rank import (ActivationSpec, EmbeddingCertificate, bound_claim_b2, embedding_search,
                         forster_bound, sign_certificate_from_monotone, verify_embedding)
from dimkit.scaledim import (ScaleSearchConfig, dim_scale, dim_sup_over_scales,
                             linear_witness_length, relu_packing)
from dimkit.witness import ELUDER, KINDS, STAR, THRESHOLD, WitnessSequence, verify_witness

KIND_ST = st.sampled_from(KINDS)


def _refs(draw, table):
    choice = draw(st.integers(-1, table.n_functions - 1))
    if choice >= 0:
        return ReferenceFunction.col(choice)
    return ReferenceFunction.of(draw(st.lists(st.sampled_from([1, -1]), min_size=table.n_points,
                                              max_size=table.n_points)))


@st.composite
def table_and_ref(draw, max_points=8, max_funcs=8):
    table = draw(binary_tables(max_points, max_funcs))
    return table, _refs(draw, table)


@given(table_and_ref())
def test_sandwich_between_star_threshold_and_eluder(tr):
    table, ref = tr
    e, s, t = (dim_comb(table, ref, k).value for k in KINDS)
    top = max(s, t)
    assert top <= e <= 4 ** top
    assert e <= edim_upper_bound(table, ref)


@given(table_and_ref(6, 6))
def test_witnesses_verify_and_match_values(tr):
    table, ref = tr
    for k in KINDS:
        rep = dim_comb(table, ref, k)
        assert len(rep.witness) == rep.value
        assert verify_witness(table, rep.witness)


@given(table_and_ref(6, 6))
def test_star_and_threshold_witnesses_are_eluder_witnesses(tr):
    table, ref = tr
    for k in (STAR, THRESHOLD):
        w = dim_comb(table, ref, k).witness
        assert verify_witness(table, WitnessSequence(ELUDER, w.reference, w.entries, w.scale))


@given(binary_tables(7, 7))
def test_sup_over_members_bounded_by_constant_references(table):
    n = table.n_points
    one, minus = ReferenceFunction.constant(n, 1), ReferenceFunction.constant(n, -1)
    for k in KINDS:
        sup = dim_sup_over_refs(table, k).value
        assert sup <= dim_comb(table, one, k).value + dim_comb(table, minus, k).value
    assert dim_sup_over_refs(table, THRESHOLD).value <= 2 * dim_comb(table, one, THRESHOLD).value


@given(table_and_ref(8, 8))
def test_extraction_from_maximum_eluder_witness(tr):
    table, ref = tr
    rep = dim_comb(table, ref, ELUDER)
    m = rep.value
    if m == 0:
        return
    coloring = color_from_witness(table, rep.witness)
    k = guaranteed_clique_size(m)
    if k == 0:
        return
    vertices, color = find_mono_clique(coloring, k)
    sub = extract_subsequence(table, rep.witness, vertices, color)
    assert len(sub) == k and verify_witness(table, sub)


@given(table_and_ref(8, 8))
def test_coloring_decodes_to_witness_values(tr):
    table, ref = tr
    w = dim_comb(table, ref, ELUDER).witness
    if not len(w):
        return
    r = ref.resolve(table)
    got = decode_coloring(color_from_witness(table, w), [r[x] for x, _ in w.entries])
    want = [[table.values[x][f] for _, f in w.entries] for x, _ in w.entries]
    assert got == want


@given(table_and_ref(6, 6))
def test_reports_are_deterministic(tr):
    table, ref = tr
    for k in KINDS:
        a, b = dim_comb(table, ref, k), dim_comb(table, ref, k)
        c = dim_comb(table, ref, k, backend="python")
        assert a.to_json() == b.to_json()
        assert a.witness == c.witness


EPS = st.sampled_from([Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)])


@given(real_tables(), EPS, st.data())
def test_scale_star_at_most_scale_eluder(table, eps, data):
    ref = ReferenceFunction.col(data.draw(st.integers(0, table.n_functions - 1)))
    cfg = ScaleSearchConfig(eps)
    e = dim_scale(table, ref, ELUDER, cfg)
    s = dim_scale(table, ref, STAR, cfg)
    assert s.value <= e.value
    assert verify_witness(table, e.witness) and verify_witness(table, s.witness)


@given(binary_tables(5, 5), st.fractions(min_value=Fraction(1, 100), max_value=Fraction(199, 100)),
       st.data())
def test_scale_measures_equal_combinatorial_on_binary_tables(table, eps, data):
    ref = ReferenceFunction.col(data.draw(st.integers(0, table.n_functions - 1)))
    for k in KINDS:
        assert dim_scale(table, ref, k, ScaleSearchConfig(eps)).value == \
            dim_comb(table, ref, k).value


@given(real_tables(), st.data())
def test_sup_over_scales_is_monotone(table, data):
    ref = ReferenceFunction.col(data.draw(st.integers(0, table.n_functions - 1)))
    lo = data.draw(st.fractions(min_value=Fraction(1, 16), max_value=2))
    hi = lo + data.draw(st.fractions(min_value=0, max_value=1))
    kind = data.draw(KIND_ST)
    a = dim_sup_over_scales(table, ref, kind, lo)
    b = dim_sup_over_scales(table, ref, kind, hi)
    assert a.value >= b.value
    assert verify_witness(table, a.witness) and a.witness.scale >= lo


@given(st.integers(1, 4), st.fractions(min_value=Fraction(1, 10 ** 4), max_value=Fraction(4, 5)))
def test_ladder_length_is_logarithmic(d, eps):
    assert linear_witness_length(d, eps) >= d * math.log2(1 / (1.2 * float(eps)))


def test_relu_packing_beats_linear_bound_at_small_scale():
    # the ReLU certificate has dimension d + 1 = 3 with R_phi * R_w = 2
    eps = Fraction(1, 10 ** 5)
    packing = len(relu_packing(2, eps, budget=1024))
    assert packing > bound_claim_b2(3, 1, 2, eps)


@pytest.mark.parametrize("d", range(1, 7))
def test_parity_characters_are_orthogonal(d):
    A = np.array(gen_parities(d).values)
    assert np.all(A[:, 1:].sum(axis=0) == 0)
    assert np.array_equal(A.T @ A, (1 << d) * np.eye(1 << d, dtype=int))


@pytest.mark.parametrize("n", range(1, 12))
def test_threshold_columns_decrease(n):
    A = np.array(gen_thresholds(n).values)
    assert np.all(A[:, 1:] <= A[:, :-1])


@given(binary_tables(6, 6))
def test_forster_bound_at_most_smaller_side(table):
    assert forster_bound(table) <= min(table.shape) + 1e-9


@pytest.mark.parametrize("table", [gen_thresholds(6), gen_singletons(3), gen_parities(2)],
                         ids=["thresholds", "singletons", "parities"])
def test_forster_bound_below_found_sign_dimension(table):
    for d in range(1, 6):
        cert = embedding_search(table, d, ActivationSpec.sign(), budget=60)
        if cert is not None:
            assert forster_bound(table) <= d + 1e-9
            break
    else:  # pragma: no cover - each of these has a small sign certificate
        pytest.fail("no sign certificate found")


@given(binary_tables(5, 5))
def test_strictly_monotone_certificate_gives_sign_certificate(table):
    act = ActivationSpec.piecewise([(0, 0)], Fraction(1, 2), 2, Fraction(1, 2), 2)
    # one-hot features; each weight row holds the activation's preimages of the column
    target = np.vectorize(act.inverse)(table.to_numpy())
    phi = np.eye(table.n_points)
    w = target.T
    mono = EmbeddingCertificate(table.n_points, phi, w, act, 1.0,
                                float(np.linalg.norm(w, axis=1).max()), 1e-9)
    assert verify_embedding(table, mono).ok
    lifted = sign_certificate_from_monotone(table, mono)
    assert lifted.d == mono.d + 1 and verify_embedding(table, lifted).ok
