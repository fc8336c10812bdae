"""Randomized constructions: long eluder sequences with short star/threshold
sequences, and sparse sign matrices with no length-5 eluder sequence.

All randomness comes from numpy's Philox counter-based generator seeded with
the configuration seed; matrices are drawn in row-major order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .classes import FunctionClassTable, ReferenceFunction
from .combodim import dim_comb, edim_comb
from .errors import InvalidParameter, ResourceLimit, SearchFailure
from .rank import forster_report
from .witness import ELUDER, STAR, THRESHOLD, DimensionReport

EXACT_MAX_K = 4
EXACT_MAX_N = 12
MAX_E_SEARCH_N = 32
MAX_F_N = 256
MAX_PIPELINE_N = 128


@dataclass(frozen=True)
class RandomConstructionConfig:
    N: int
    seed: int = 0
    trials: int = 1
    target_c: float = 3.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise InvalidParameter("N must be an integer >= 2")
        if self.trials < 1:
            raise InvalidParameter("trials must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidParameter("seed must be a 64-bit unsigned integer")
        if self.target_c <= 0:
            raise InvalidParameter("target_c must be positive")

    def with_seed(self, seed: int) -> "RandomConstructionConfig":
        return RandomConstructionConfig(self.N, seed % 2 ** 64, self.trials, self.target_c)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _table(B: np.ndarray) -> FunctionClassTable:
    return FunctionClassTable.from_matrix(B.astype(int).tolist(), kind="binary")


def ones_ref(n: int) -> ReferenceFunction:
    return ReferenceFunction.constant(n, 1)


def minus_ones_ref(n: int) -> ReferenceFunction:
    return ReferenceFunction.constant(n, -1)


# ------------------------------------------------------------ eluder-long matrices

def sample_e_matrix(cfg: RandomConstructionConfig) -> FunctionClassTable:
    """``N x (N+1)`` signs: +1 above the diagonal, -1 on it, fair coins below."""
    N = cfg.N
    coins = rng_for(cfg.seed).integers(0, 2, size=(N, N + 1))
    i, j = np.indices((N, N + 1))
    B = np.where(i < j, 1, np.where(i == j, -1, 2 * coins - 1))
    return _table(B)


@dataclass
class SequenceCountReport:
    N: int
    k: int
    count_star_plus: int
    count_star_minus: int
    count_threshold_plus: int
    probability_bound: float
    expectation_bound: float
    exact: bool = True
    standard_error: float = 0.0

    @property
    def total(self) -> float:
        return self.count_star_plus + self.count_star_minus + self.count_threshold_plus

    def to_json(self) -> dict:
        return {**asdict(self), "total": self.total}


def _patterns(k: int) -> dict[str, np.ndarray]:
    r, s = np.indices((k, k))
    return {
        "star_plus": np.where(r == s, -1, 1),
        "star_minus": np.where(r == s, 1, -1),
        "threshold_plus": np.where(r < s, 1, -1),
    }


def _count_pattern(B: np.ndarray, P: np.ndarray) -> int:
    """Number of (I, J) with distinct entries such that ``B[I][:, J] == P``."""
    n, m = B.shape
    k = P.shape[0]
    total = 0

    def rec(r, I, J, free_rows, free_cols):
        nonlocal total
        rows = free_rows.copy()
        cols = free_cols.copy()
        for s in range(r):
            rows &= B[:, J[s]] == P[r, s]
            cols &= B[I[s], :] == P[s, r]
        for i in np.flatnonzero(rows):
            cand = cols & (B[i, :] == P[r, r])
            if r == k - 1:
                total += int(cand.sum())
                continue
            fr = free_rows.copy()
            fr[i] = False
            for j in np.flatnonzero(cand):
                fc = free_cols.copy()
                fc[j] = False
                rec(r + 1, I + [i], J + [j], fr, fc)

    rec(0, [], [], np.ones(n, bool), np.ones(m, bool))
    return total


def _sample_pattern_rate(B, P, samples, rng) -> tuple[float, float]:
    n, m = B.shape
    k = P.shape[0]
    hits = 0
    for _ in range(samples):
        I = rng.choice(n, size=k, replace=False)
        J = rng.choice(m, size=k, replace=False)
        hits += bool(np.array_equal(B[np.ix_(I, J)], P))
    p = hits / samples
    return p, math.sqrt(max(p * (1 - p), 0.0) / samples)


def lemma_e3_bound(N: int, k: int) -> tuple[float, float]:
    """Per-pair probability bound and the resulting bound on the expected count."""
    p = 3 * 2.0 ** (-k * (k - 1) / 2)
    return p, p * float(N) ** k * float(N + 1) ** k


def count_valid_sequences(table: FunctionClassTable, k: int, monte_carlo: bool = False,
                          samples: int = 20000, seed: int = 0) -> SequenceCountReport:
    """Count length-``k`` index pairs forming star (+1 or -1 reference) or threshold (+1) sequences.

    Exhaustive for ``k <= 4`` and ``N <= 12``; beyond that the counts are
    Monte Carlo estimates, which must be requested explicitly.
    """
    if not table.is_binary:
        raise InvalidParameter("counting needs a binary table")
    if k < 1:
        raise InvalidParameter("k must be at least 1")
    B = table.to_numpy().astype(int)
    N, M = B.shape
    p_bound, e_bound = lemma_e3_bound(N, k)
    if k > min(N, M):
        return SequenceCountReport(N, k, 0, 0, 0, p_bound, e_bound)
    pats = _patterns(k)
    if k <= EXACT_MAX_K and N <= EXACT_MAX_N:
        counts = [_count_pattern(B, pats[name]) for name in pats]
        return SequenceCountReport(N, k, *counts, p_bound, e_bound)
    if not monte_carlo:
        raise ResourceLimit(
            f"exact counting is limited to k <= {EXACT_MAX_K}, N <= {EXACT_MAX_N}; "
            "request a Monte Carlo estimate instead")
    rng = rng_for(seed)
    pairs = math.perm(N, k) * math.perm(M, k)
    est, err = [], 0.0
    for name in pats:
        rate, se = _sample_pattern_rate(B, pats[name], samples, rng)
        est.append(rate * pairs)
        err = math.hypot(err, se * pairs)
    return SequenceCountReport(N, k, *est, p_bound, e_bound, exact=False, standard_error=err)


@dataclass
class SeparationReport:
    N: int
    seed: int
    trial: int
    edim_ones: int
    sdim_plus: int
    sdim_minus: int
    tdim_plus: int
    certified_sdim: int
    certified_tdim: int
    bound: float
    success: bool

    def to_json(self) -> dict:
        return asdict(self)


def separation_report(table: FunctionClassTable, cfg: RandomConstructionConfig, trial: int = 0,
                      require_certified: bool = False) -> tuple[SeparationReport, dict[str, DimensionReport]]:
    """Dimensions against the constant references and the bounds they certify for the whole class.

    A sample succeeds when its eluder value against +1 is ``N`` and the star
    values against +1 and -1 and the threshold value against +1 are all at
    most ``target_c * log2 N``.  With ``require_certified`` the certified
    class-wide bounds must also meet that level.
    """
    n = table.n_points
    reps = {
        "edim_ones": dim_comb(table, ones_ref(n), ELUDER),
        "sdim_plus": dim_comb(table, ones_ref(n), STAR),
        "sdim_minus": dim_comb(table, minus_ones_ref(n), STAR),
        "tdim_plus": dim_comb(table, ones_ref(n), THRESHOLD),
    }
    sp, sm, tp = reps["sdim_plus"].value, reps["sdim_minus"].value, reps["tdim_plus"].value
    # sup over references is at most the +1 and -1 values combined (star), or twice +1 (threshold)
    cs, ct = sp + sm, 2 * tp
    bound = cfg.target_c * math.log2(cfg.N)
    ok = reps["edim_ones"].value == cfg.N and max(sp, sm, tp) <= bound
    if require_certified:
        ok = ok and max(cs, ct) <= bound
    rep = SeparationReport(cfg.N, cfg.seed, trial, reps["edim_ones"].value, sp, sm, tp, cs, ct, bound, ok)
    return rep, reps


def search_separation_e(cfg: RandomConstructionConfig, require_certified: bool = False):
    """Try seeds ``seed, seed+1, ...`` until a sample certifies short star and threshold sequences.

    Returns ``(table, report, dimension_reports)`` for the first success and
    raises :class:`SearchFailure` carrying the best report otherwise.
    """
    if cfg.N > MAX_E_SEARCH_N:
        raise ResourceLimit(f"separation search is limited to N <= {MAX_E_SEARCH_N}")
    best = None
    for t in range(cfg.trials):
        trial_cfg = cfg.with_seed(cfg.seed + t)
        table = sample_e_matrix(trial_cfg)
        rep, reps = separation_report(table, trial_cfg, t, require_certified)
        if rep.success:
            return table, rep, reps
        key = max(rep.certified_sdim, rep.certified_tdim)
        if best is None or key < max(best.certified_sdim, best.certified_tdim):
            best = rep
    raise SearchFailure(f"no sample met the bound in {cfg.trials} trials", best=best)


# --------------------------------------------------------- sparse matrices, repair

def f_probability(N: int) -> float:
    return 1.0 / (2.0 * N ** (8 / 9))


def sample_f_matrix(cfg: RandomConstructionConfig) -> FunctionClassTable:
    """``N x N`` signs, each +1 independently with probability ``1 / (2 N^(8/9))``."""
    if cfg.N > MAX_F_N:
        raise ResourceLimit(f"sparse sampler is limited to N <= {MAX_F_N}")
    u = rng_for(cfg.seed).random(size=(cfg.N, cfg.N))
    return _table(np.where(u < f_probability(cfg.N), 1, -1))


def plus_count(table: FunctionClassTable) -> int:
    return sum(v == 1 for row in table.values for v in row)


def repair_e5_light(table: FunctionClassTable) -> tuple[FunctionClassTable, int]:
    """Remove every length-5 eluder sequence against the all-ones function.

    Such a sequence is a 5x5 submatrix with -1 on the diagonal and +1 above
    it.  Each round finds one and flips the first above-diagonal +1 of that
    submatrix, scanning positions ``(r, s)`` with ``r < s`` in order.  Every
    flip removes a +1, so the loop ends.
    """
    if not table.is_binary:
        raise InvalidParameter("repair needs a binary table")
    B = [list(r) for r in table.values]
    ref = ones_ref(table.n_points)
    flips = 0
    cur = table
    while True:
        rep = edim_comb(cur, ref, limit=5)
        if rep.value < 5:
            return cur, flips
        e = rep.witness.entries
        for r in range(5):
            hit = next(((e[r][0], e[s][1]) for s in range(r + 1, 5) if B[e[r][0]][e[s][1]] == 1), None)
            if hit:
                break
        i, j = hit
        B[i][j] = -1
        flips += 1
        cur = FunctionClassTable(table.points, table.functions, tuple(tuple(r) for r in B), table.kind)


@dataclass
class PipelineReport:
    N: int
    seed: int
    plus_before: int
    plus_after: int
    flips: int
    surrogate: int
    edim_ones_after: int
    forster_bound: float
    forster_tolerance: float

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc: dict) -> "PipelineReport":
        return cls(**doc)


def forster_after_repair(cfg: RandomConstructionConfig) -> tuple[FunctionClassTable, PipelineReport]:
    """Sample a sparse matrix, repair it, confirm the eluder bound exactly and report its spectral bound."""
    if cfg.N > MAX_PIPELINE_N:
        raise ResourceLimit(f"pipeline is limited to N <= {MAX_PIPELINE_N}")
    table = sample_f_matrix(cfg)
    before = plus_count(table)
    repaired, flips = repair_e5_light(table)
    e1 = edim_comb(repaired, ones_ref(cfg.N)).value
    fr = forster_report(repaired)
    return repaired, PipelineReport(cfg.N, cfg.seed, before, plus_count(repaired), flips,
                                    before - flips, e1, fr.value, fr.tolerance)
