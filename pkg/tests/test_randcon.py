import math

import numpy as np
import pytest

from dimkit.errors import InvalidParameter, ResourceLimit, SearchFailure
from dimkit.oracles import naive_sequence_counts
from dimkit.randcon import (PipelineReport, RandomConstructionConfig, count_valid_sequences,
                            f_probability, forster_after_repair, lemma_e3_bound, ones_ref,
                            plus_count, repair_e5_light, sample_e_matrix, sample_f_matrix,
                            search_separation_e, separation_report)
from dimkit.classes import FunctionClassTable
from dimkit.combodim import edim_comb


def test_e_matrix_shape_and_structure():
    t = sample_e_matrix(RandomConstructionConfig(6, seed=4))
    B = np.array(t.values)
    assert B.shape == (6, 7)
    assert np.all(np.diag(B) == -1)
    assert np.all(B[np.triu_indices(6, 1, 7)] == 1)


def test_samplers_are_reproducible():
    cfg = RandomConstructionConfig(12, seed=99)
    assert sample_e_matrix(cfg) == sample_e_matrix(cfg)
    assert sample_f_matrix(cfg) == sample_f_matrix(cfg)
    assert sample_e_matrix(cfg) != sample_e_matrix(cfg.with_seed(100))


def test_e_matrix_regression_sample():
    # Philox keyed by the seed, coins drawn row-major; pins the generator stream
    t = sample_e_matrix(RandomConstructionConfig(4, seed=0))
    assert t.values == ((-1, 1, 1, 1, 1), (-1, -1, 1, 1, 1), (1, -1, -1, 1, 1),
                        (-1, 1, -1, -1, 1))


@pytest.mark.parametrize("seed", range(5))
def test_e_matrix_has_full_eluder_value(seed):
    N = 10
    t = sample_e_matrix(RandomConstructionConfig(N, seed))
    assert edim_comb(t, ones_ref(N)).value == N


@pytest.mark.parametrize("k", [1, 2, 3])
def test_counts_match_enumeration(k):
    t = sample_e_matrix(RandomConstructionConfig(4, seed=2))
    rep = count_valid_sequences(t, k)
    got = (rep.count_star_plus, rep.count_star_minus, rep.count_threshold_plus)
    assert got == naive_sequence_counts([list(r) for r in t.values], k)


def test_count_limits_and_monte_carlo():
    t = sample_e_matrix(RandomConstructionConfig(16, seed=0))
    with pytest.raises(ResourceLimit):
        count_valid_sequences(t, 2)
    est = count_valid_sequences(t, 2, monte_carlo=True, samples=2000, seed=1)
    assert not est.exact and est.standard_error > 0


def test_expected_count_bound_values():
    p, e = lemma_e3_bound(8, 2)
    assert p == 1.5 and e == 1.5 * 64 * 81


def test_separation_n16_seed0():
    cfg = RandomConstructionConfig(16, seed=0)
    rep, _ = separation_report(sample_e_matrix(cfg), cfg)
    assert (rep.edim_ones, rep.sdim_plus, rep.sdim_minus, rep.tdim_plus) == (16, 5, 4, 6)
    assert (rep.certified_sdim, rep.certified_tdim) == (9, 12)
    assert rep.success


def test_separation_search_small_and_failure():
    table, rep, _ = search_separation_e(RandomConstructionConfig(2, seed=0))
    assert rep.success and rep.edim_ones == 2
    with pytest.raises(SearchFailure) as err:
        search_separation_e(RandomConstructionConfig(16, trials=2, target_c=0.1))
    assert err.value.best is not None
    with pytest.raises(ResourceLimit):
        search_separation_e(RandomConstructionConfig(33))


def test_f_matrix_density():
    N = 200
    t = sample_f_matrix(RandomConstructionConfig(N, seed=0))
    p = f_probability(N)
    assert abs(plus_count(t) - p * N * N) < 5 * math.sqrt(p * N * N)


def test_repair_removes_long_sequences():
    # +1 above the diagonal and -1 elsewhere: the diagonal is an eluder sequence
    N = 7
    B = [[1 if i < j else -1 for j in range(N)] for i in range(N)]
    t = FunctionClassTable.from_matrix(B, kind="binary")
    assert edim_comb(t, ones_ref(N)).value == N
    repaired, flips = repair_e5_light(t)
    assert flips > 0 and plus_count(repaired) == plus_count(t) - flips
    assert edim_comb(repaired, ones_ref(N)).value <= 4


@pytest.mark.parametrize("N", [32, 64])
def test_pipeline(N):
    table, rep = forster_after_repair(RandomConstructionConfig(N, seed=0))
    assert rep.edim_ones_after <= 4
    assert rep.flips < rep.plus_before
    assert edim_comb(table, ones_ref(N)).value == rep.edim_ones_after
    assert PipelineReport.from_json(rep.to_json()) == rep


def test_config_validation():
    for kw in ({"N": 1}, {"N": 4, "trials": 0}, {"N": 4, "seed": -1}, {"N": 4, "target_c": 0}):
        with pytest.raises(InvalidParameter):
            RandomConstructionConfig(**kw)
