import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dimkit.classes import (FunctionClassTable, gen_exp_class, gen_parities, gen_singletons,
                            gen_thresholds)
from dimkit.errors import InvalidCertificate, InvalidParameter, ParseError, WrongKind
from dimkit.oracles import svd_spectral_norm
from dimkit.rank import (HOLDS, VACUOUS, VIOLATED, ActivationSpec, EmbeddingCertificate,
                         bound_claim_b2, bound_claim_b3, certificate_monotonicity_check,
                         clamped_exp_activation, embedding_search, forster_bound, forster_report,
                         lemma_b1_bound, lemma_b1_check, numeric_rank, relu_1d_family,
                         sign_certificate_from_monotone, slope_check, spectral_norm,
                         threshold_sign_certificate, triangular_rank_check, verify_embedding)

LEAKY = ActivationSpec.piecewise([(0, 0)], Fraction(1, 10), 1, Fraction(1, 10), 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_forster_on_parities(d):
    rep = forster_report(gen_parities(d))
    assert abs(rep.value - 2 ** (d / 2)) <= 1e-9
    assert rep.tolerance < 1e-9


def test_forster_all_ones_and_real_table_rejected():
    assert forster_bound(FunctionClassTable.from_matrix([[1] * 3] * 3)) == pytest.approx(1.0)
    with pytest.raises(WrongKind):
        forster_report(gen_exp_class(2, 2))


def test_spectral_norm_start_orthogonal_to_top_vector():
    # the all-ones vector is orthogonal to the top right singular vector here
    A = np.array([[1, -1, -1, -1, -1, 1, -1], [1, 1, -1, -1, -1, 1, 1],
                  [1, -1, 1, 1, -1, -1, -1], [1, 1, 1, -1, -1, -1, -1]], dtype=float)
    assert abs(spectral_norm(A).value - svd_spectral_norm(A)) < 1e-10


def test_spectral_norm_zero_matrix():
    assert spectral_norm(np.zeros((2, 3))).value == 0.0


def test_bound_formulas():
    assert bound_claim_b2(1, 1, 1, 0.1) == pytest.approx(36.9386, abs=1e-4)
    assert bound_claim_b3(2, 1, 3, 2, 2, 0.1) == pytest.approx(bound_claim_b2(2, 1, 6, 0.1))
    assert bound_claim_b3(1, 1, 1, 1, 2, 0.1) > bound_claim_b2(1, 1, 2, 0.1)
    with pytest.raises(InvalidParameter):
        bound_claim_b2(1, 1, 1, 1)
    with pytest.raises(InvalidParameter):
        bound_claim_b3(1, 1, 1, 2, 1, 0.1)


def test_ratio_check_outcomes():
    assert lemma_b1_check(1, 2, 3) == VACUOUS
    assert lemma_b1_check(1, 2, 2) == HOLDS
    assert lemma_b1_bound(1, 2) == pytest.approx(6.579, abs=1e-3)
    with pytest.raises(InvalidParameter):
        lemma_b1_check(0, 1, 1)


@given(st.fractions(min_value=Fraction(1, 1000), max_value=10),
       st.fractions(min_value=Fraction(1, 1000), max_value=90), st.integers(1, 50))
def test_ratio_check_never_violated(alpha, extra, k):
    assert lemma_b1_check(alpha, alpha + extra, k) != VIOLATED


def test_slope_checks():
    assert slope_check(ActivationSpec.identity())
    assert slope_check(ActivationSpec.relu())
    assert not slope_check(ActivationSpec.relu(mu=Fraction(1, 10)))
    assert not slope_check(ActivationSpec.sign())
    assert slope_check(LEAKY)
    assert slope_check(clamped_exp_activation())


def test_activation_values_and_json():
    assert LEAKY.exact(Fraction(-2)) == Fraction(-1, 5)
    assert LEAKY.exact(Fraction(3)) == 3
    assert float(LEAKY(np.array([-2.0]))[0]) == pytest.approx(-0.2)
    assert LEAKY.inverse(-0.2) == pytest.approx(-2.0)
    act = clamped_exp_activation(4)
    assert ActivationSpec.from_json(json.loads(json.dumps(act.to_json()))) == act
    with pytest.raises(ParseError):
        ActivationSpec.from_json({"mu": 1})
    with pytest.raises(InvalidParameter):
        ActivationSpec.piecewise([(1, 0), (0, 1)], 1, 1, 1, 1)


@pytest.mark.parametrize("n,rank", [(4, 4), (6, 6), (8, 6)])
def test_exp_class_numeric_rank(n, rank):
    # entries are exact to 30 digits, so the numerical rank saturates
    assert numeric_rank(gen_exp_class(n, n)) == rank


def test_threshold_sign_certificate():
    t = gen_thresholds(7)
    cert = threshold_sign_certificate(7)
    assert cert.d == 2 and verify_embedding(t, cert).ok
    doc = json.loads(cert.dumps())
    assert set(doc) == {"d", "phi", "w", "activation", "R_phi", "R_w", "tol"}
    assert verify_embedding(t, EmbeddingCertificate.from_json(doc)).ok


def test_certificate_rejects_wrong_signs_and_norms():
    t = gen_thresholds(3)
    cert = threshold_sign_certificate(3)
    flipped = EmbeddingCertificate(2, cert.phi, -cert.w, cert.activation, 1.0, 1.0)
    assert not verify_embedding(t, flipped).ok
    tight = EmbeddingCertificate(2, cert.phi * 2, cert.w, cert.activation, 1.0, 1.0)
    v = verify_embedding(t, tight)
    assert not v.ok and "phi" in v.violation
    with pytest.raises(InvalidCertificate):
        verify_embedding(gen_thresholds(4), cert)
    with pytest.raises(InvalidCertificate):
        EmbeddingCertificate(3, cert.phi, cert.w, cert.activation, 1.0, 1.0)


def test_monotonicity_of_budgets():
    t = gen_thresholds(5)
    cert = threshold_sign_certificate(5)
    assert certificate_monotonicity_check(cert, 2.0, 3.0, t)
    with pytest.raises(InvalidParameter):
        certificate_monotonicity_check(cert, 0.5, 1.0)


def test_identity_certificate_lifts_to_sign_certificate():
    t = gen_singletons(4)
    cert = embedding_search(t, 5, ActivationSpec.identity())
    assert cert is not None and verify_embedding(t, cert).ok
    lifted = sign_certificate_from_monotone(t, cert)
    assert lifted.d == 6 and verify_embedding(t, lifted).ok


def test_sign_search():
    cert = embedding_search(gen_thresholds(10), 2, ActivationSpec.sign())
    assert cert is not None and verify_embedding(gen_thresholds(10), cert).ok
    assert embedding_search(gen_parities(2), 1, ActivationSpec.sign(), budget=20) is None
    with pytest.raises(InvalidParameter):
        embedding_search(gen_parities(2), 0, ActivationSpec.sign())


def test_relu_search_on_small_family():
    t = relu_1d_family(3)
    cert = embedding_search(t, 2, ActivationSpec.relu(), budget=400)
    assert cert is None or verify_embedding(t, cert).ok


def test_triangular_rank_check_on_relu_family():
    rep = triangular_rank_check(relu_1d_family(5), LEAKY)
    assert rep.ok and rep.zero_preimage == pytest.approx(0.0)
    assert rep.rank_shifted == 5
    with pytest.raises(InvalidParameter):
        triangular_rank_check(relu_1d_family(3), ActivationSpec.relu())


def test_sqrt_two_budget_of_threshold_certificate():
    cert = threshold_sign_certificate(4)
    assert np.linalg.norm(cert.phi, axis=1).max() <= 1 + 1e-12
    assert math.isclose(np.linalg.norm(cert.w, axis=1).max(), 1.0)
