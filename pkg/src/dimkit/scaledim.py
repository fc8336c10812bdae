"""Scale-sensitive eluder dimension, star number and threshold dimension.

All comparisons are exact.  Deviations from the reference are brought to a
common denominator once, so the searches run on Python integers.

A point can never usefully appear twice in a sequence: the later copy needs
a deviation above the scale at that point, but the earlier copy puts the same
squared deviation into its constraint sum, which then exceeds the scale
squared.  The searches therefore range over distinct points, and a length cap
only matters when it is smaller than the number of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import qmc, norm

from .classes import REAL, FunctionClassTable, ReferenceFunction, _as_fraction
from .combodim import canonical_measure
from .errors import ConstructionFailure, InvalidParameter
from .witness import ELUDER, STAR, THRESHOLD, DimensionReport, WitnessSequence, verify_witness

EXACT = "exact-at-eps"
SUP = "sup-over-candidates"
WITNESS_SHRINK = Fraction(1, 2 ** 20)


@dataclass(frozen=True)
class ScaleSearchConfig:
    eps: Fraction
    length_cap: int | None = None
    allow_repeats: bool = True
    sup_mode: str = EXACT

    def __post_init__(self):
        object.__setattr__(self, "eps", _as_fraction(self.eps))
        if self.eps <= 0:
            raise InvalidParameter("eps must be positive")
        if self.length_cap is not None and self.length_cap < 1:
            raise InvalidParameter("length_cap must be at least 1")
        if self.sup_mode not in (EXACT, SUP):
            raise InvalidParameter(f"unknown sup_mode {self.sup_mode!r}")

    def cap_for(self, table: FunctionClassTable) -> int:
        return self.length_cap if self.length_cap is not None else 4 * table.n_points


def _deviations(table: FunctionClassTable, ref: ReferenceFunction) -> list[list[Fraction]]:
    r = ref.resolve(table)
    return [[Fraction(v) - Fraction(rv) for v in row] for row, rv in zip(table.values, r)]


class _Problem:
    """Integer-scaled instance at a single scale.

    ``boundary=True`` evaluates the limit from below at the given scale ``h``:
    deviation means ``|dev| >= h`` and the budget is ``sum < h**2``.
    """

    def __init__(self, dev, scale: Fraction, boundary: bool = False):
        den = scale.denominator
        for row in dev:
            for v in row:
                den = math.lcm(den, v.denominator)
        self.n = len(dev)
        self.nf = len(dev[0])
        a = [[int(v * den) for v in row] for row in dev]
        e = int(scale * den)
        self.e2 = e * e
        self.boundary = boundary
        self.sq = [[v * v for v in row] for row in a]
        big = [0] * self.n
        for x, row in enumerate(a):
            for f, v in enumerate(row):
                if (abs(v) >= e) if boundary else (abs(v) > e):
                    big[x] |= 1 << f
        self.big = big

    def fits(self, s: int) -> bool:
        return s < self.e2 if self.boundary else s <= self.e2

    def sums_over(self, S: int) -> list[int]:
        out = [0] * self.nf
        x = 0
        while S:
            if S & 1:
                row = self.sq[x]
                for f in range(self.nf):
                    out[f] += row[f]
            S >>= 1
            x += 1
        return out

    def fitting(self, sums) -> int:
        m = 0
        for f, s in enumerate(sums):
            if self.fits(s):
                m |= 1 << f
        return m


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _eluder(P: _Problem, limit: int):
    memo: dict[int, int] = {}
    nodes = 0

    def candidates(S):
        ok = P.fitting(P.sums_over(S))
        return [x for x in range(P.n) if P.big[x] & ok], ok

    def solve(S, depth):
        nonlocal nodes
        hit = memo.get(S)
        if hit is not None:
            return hit
        nodes += 1
        best = 0
        if limit - depth > 0:
            for x in candidates(S)[0]:
                v = 1 + solve(S | (1 << x), depth + 1)
                if v > best:
                    best = v
                    if best >= limit - depth:
                        break
        memo[S] = best
        return best

    value = solve(0, 0)
    points, funcs = [], []
    S = 0
    while len(points) < value:
        xs, ok = candidates(S)
        remaining = value - len(points)
        x = next(x for x in xs if 1 + solve(S | (1 << x), len(points) + 1) >= remaining)
        points.append(x)
        funcs.append(_lowest(P.big[x] & ok))
        S |= 1 << x
    return value, points, funcs, nodes


def _star(P: _Problem, limit: int):
    upper = min(limit, P.n, P.nf)
    best = [0, [], []]
    nodes = 0

    def own(chosen, sums):
        """Per chosen point, the functions deviating there whose other-point sum fits."""
        out = []
        for x in chosen:
            m = 0
            c = P.big[x]
            while c:
                f = _lowest(c)
                c &= c - 1
                if P.fits(sums[f] - P.sq[x][f]):
                    m |= 1 << f
            if not m:
                return None
            out.append(m)
        return out

    def dfs(start, chosen, sums, cands):
        nonlocal nodes
        nodes += 1
        if len(chosen) > best[0]:
            best[:] = [len(chosen), list(chosen), [_lowest(c) for c in cands]]
        if best[0] >= upper:
            return True
        ok = P.fitting(sums)
        eligible = [y for y in range(start, P.n) if P.big[y] & ok]
        for idx, y in enumerate(eligible):
            if len(chosen) + len(eligible) - idx <= best[0]:
                return False
            row = P.sq[y]
            new_sums = [s + row[f] for f, s in enumerate(sums)]
            chosen.append(y)
            new_c = own(chosen, new_sums)
            if new_c is not None and dfs(y + 1, chosen, new_sums, new_c):
                chosen.pop()
                return True
            chosen.pop()
        return False

    dfs(0, [], [0] * P.nf, [])
    return best[0], best[1], best[2], nodes


def _threshold(P: _Problem, limit: int):
    upper = min(limit, P.n, P.nf)
    best = [0, [], []]
    nodes = 0

    def dfs(used, sums, cands, chosen):
        nonlocal nodes
        nodes += 1
        if len(chosen) > best[0]:
            best[:] = [len(chosen), list(chosen), [_lowest(c) for c in cands]]
        if best[0] >= upper:
            return True
        ok = P.fitting(sums)
        eligible = []
        for y in range(P.n):
            if used >> y & 1 or not P.big[y] & ok:
                continue
            if all(c & P.big[y] for c in cands):
                eligible.append(y)
        if len(chosen) + len(eligible) <= best[0]:
            return False
        for y in eligible:
            d = P.big[y]
            new_c = [c & d for c in cands]
            new_c.append(ok & d)
            row = P.sq[y]
            chosen.append(y)
            done = dfs(used | (1 << y), [s + row[f] for f, s in enumerate(sums)], new_c, chosen)
            chosen.pop()
            if done:
                return True
        return False

    dfs(0, [0] * P.nf, [], [])
    return best[0], best[1], best[2], nodes


_SEARCH = {ELUDER: _eluder, STAR: _star, THRESHOLD: _threshold}


def _run(table, ref, kind, scale, cap, boundary=False):
    P = _Problem(_deviations(table, ref), scale, boundary)
    return _SEARCH[kind](P, cap)


def _witness_scale(table, ref, kind, h, entries, floor):
    """A concrete scale just below ``h`` at which a boundary witness verifies."""
    shrink = WITNESS_SHRINK
    while True:
        scale = max(h * (1 - shrink), floor)
        w = WitnessSequence(kind, ref, entries, scale)
        if verify_witness(table, w):
            return w
        shrink /= 2


def dim_scale(table: FunctionClassTable, ref: ReferenceFunction, measure: str,
              cfg: ScaleSearchConfig) -> DimensionReport:
    kind = canonical_measure(measure)
    if cfg.sup_mode == SUP:
        return dim_sup_over_scales(table, ref, kind, cfg.eps, cfg.length_cap)
    cap = cfg.cap_for(table)
    value, pts, fns, nodes = _run(table, ref, kind, cfg.eps, cap)
    witness = WitnessSequence(kind, ref, tuple(zip(pts, fns)), cfg.eps)
    exact = value < cap
    return DimensionReport(kind, ref, cfg.eps, value, witness, nodes, exact,
                           {"mode": EXACT, "length_cap": cap})


def edim_scale(table, ref, cfg) -> DimensionReport:
    return dim_scale(table, ref, ELUDER, cfg)


def sdim_scale(table, ref, cfg) -> DimensionReport:
    return dim_scale(table, ref, STAR, cfg)


def tdim_scale(table, ref, cfg) -> DimensionReport:
    return dim_scale(table, ref, THRESHOLD, cfg)


def dim_sup_over_scales(table: FunctionClassTable, ref: ReferenceFunction, measure: str,
                        eps_min, length_cap: int | None = None) -> DimensionReport:
    """Supremum of the exact measure over every scale ``eps' >= eps_min``.

    Between two consecutive deviation magnitudes the set of deviating entries
    is fixed while every budget only loosens as the scale grows, so on each
    such interval the value is largest just below its right end.  The
    supremum is therefore the maximum of the value at ``eps_min`` and the
    limits from below at every deviation magnitude above ``eps_min``.  Those
    limits are computed exactly, and the witness is reported at a concrete
    scale where it verifies.
    """
    kind = canonical_measure(measure)
    eps_min = _as_fraction(eps_min)
    if eps_min <= 0:
        raise InvalidParameter("eps_min must be positive")
    cap = length_cap if length_cap is not None else 4 * table.n_points
    dev = _deviations(table, ref)
    value, pts, fns, nodes = _SEARCH[kind](_Problem(dev, eps_min), cap)
    best = (value, eps_min, tuple(zip(pts, fns)), False)
    total_nodes = nodes
    candidates = sorted({abs(v) for row in dev for v in row if abs(v) > eps_min})
    for h in candidates:
        v, p, f, n = _SEARCH[kind](_Problem(dev, h, boundary=True), cap)
        total_nodes += n
        if v > best[0]:
            best = (v, h, tuple(zip(p, f)), True)
    value, h, entries, boundary = best
    if boundary:
        witness = _witness_scale(table, ref, kind, h, entries, eps_min)
    else:
        witness = WitnessSequence(kind, ref, entries, eps_min)
    extra = {
        "mode": SUP,
        "candidate": str(h),
        "limit_from_below": boundary,
        "n_candidates": len(candidates) + 1,
        "length_cap": cap,
    }
    return DimensionReport(kind, ref, eps_min, value, witness, total_nodes, value < cap, extra)


# ------------------------------------------------------------ constructions

def _zero_ref(n: int) -> ReferenceFunction:
    return ReferenceFunction.constant(n, 0)


def gen_linear_eluder_witness(d: int, eps) -> tuple[FunctionClassTable, WitnessSequence]:
    """Linear functions on a dyadic ladder with a long eluder sequence at scale ``eps``.

    Along each axis the points are ``e_i / 2**(k-j)`` and the weights
    ``alpha * 2**(k-j) * e_i`` for ``j = 0..k``, with ``alpha = 1.2 * eps`` and
    ``k = floor(log2(1/alpha))``.  The ladders of the ``d`` axes are
    concatenated, giving a witness of length ``d * (k + 1)`` against the zero
    function.
    """
    if int(d) != d or d < 1:
        raise InvalidParameter("d must be a positive integer")
    eps = _as_fraction(eps)
    if not (0 < eps and 2 * eps * eps < 1):
        raise InvalidParameter("eps must lie in (0, 1/sqrt(2))")
    alpha = Fraction(6, 5) * eps
    k = 0
    while alpha * 2 ** (k + 1) <= 1:
        k += 1
    ladder = [(i, j) for i in range(d) for j in range(k + 1)]
    # value of weight (i, j) at point (i2, j2): alpha * 2**(k-j) / 2**(k-j2) on the same axis
    values = [[alpha * Fraction(2) ** (j2 - j) if i == i2 else Fraction(0)
               for (i, j) in ladder] for (i2, j2) in ladder]
    table = FunctionClassTable(
        tuple(f"x[{i},{j}]" for i, j in ladder),
        tuple(f"theta[{i},{j}]" for i, j in ladder),
        tuple(tuple(r) for r in values),
        REAL,
    )
    entries = tuple((t, t) for t in range(len(ladder)))
    return table, WitnessSequence(ELUDER, _zero_ref(len(ladder)), entries, eps)


def linear_witness_length(d: int, eps) -> int:
    eps = _as_fraction(eps)
    alpha = Fraction(6, 5) * eps
    k = 0
    while alpha * 2 ** (k + 1) <= 1:
        k += 1
    return d * (k + 1)


def _rational_unit(t: list[Fraction]) -> tuple[Fraction, ...]:
    """Inverse stereographic projection: a rational point of the unit sphere."""
    s = sum((v * v for v in t), Fraction(0))
    return tuple(2 * v / (s + 1) for v in t) + ((s - 1) / (s + 1),)


def _candidate_stream(d: int, seed: int, budget: int, denominator: int):
    if d == 1:
        yield (Fraction(1),)
        yield (Fraction(-1),)
        return
    sampler = qmc.Sobol(d, scramble=True, seed=seed)
    m = max(1, math.ceil(math.log2(budget)))
    pts = sampler.random_base2(m)[:budget]
    g = norm.ppf(np.clip(pts, 1e-12, 1 - 1e-12))
    for row in g:
        u = row / np.linalg.norm(row)
        if u[-1] > 1 - 1e-9:
            continue
        t = [Fraction(float(v) / (1 - float(u[-1]))).limit_denominator(denominator) for v in u[:-1]]
        yield _rational_unit(t)


def relu_packing(d: int, eps, R=2, budget: int = 4096, seed: int = 0,
                 denominator: int = 1 << 16) -> list[tuple[Fraction, ...]]:
    """Greedy packing of rational unit vectors with pairwise inner product <= 1 - 2*eps/R."""
    if int(d) != d or not 1 <= d <= 6:
        raise InvalidParameter("d must be an integer in 1..6")
    eps, R = _as_fraction(eps), _as_fraction(R)
    if not (0 < eps < R / 4):
        raise InvalidParameter("eps must lie in (0, R/4)")
    c = 1 - 2 * eps / R
    cf = float(c)
    kept: list[tuple[Fraction, ...]] = []
    kept_f = np.zeros((0, d))
    for u in _candidate_stream(d, seed, budget, denominator):
        uf = np.array([float(v) for v in u])
        if len(kept):
            dots = kept_f @ uf
            if dots.max() > cf + 1e-9:
                continue
            close = np.nonzero(dots > cf - 1e-9)[0]
            if any(sum(a * b for a, b in zip(kept[i], u)) > c for i in close):
                continue
        kept.append(u)
        kept_f = np.vstack([kept_f, uf])
    return kept


def relu_target(d: int, eps, R=2) -> int:
    """Packing size promised by the volume argument.

    On the line only the two unit vectors exist, so the target there is 2.
    """
    if d == 1:
        return 2
    eps, R = _as_fraction(eps), _as_fraction(R)
    return math.ceil((float(R) / (4 * float(eps))) ** (d / 2) - 1e-12)


def gen_relu_star_witness(d: int, eps, R=2, budget: int = 4096,
                          seed: int = 0) -> tuple[FunctionClassTable, WitnessSequence]:
    table, witness, _ = relu_star_instance(d, eps, R, budget, seed)
    return table, witness


def relu_star_instance(d: int, eps, R=2, budget: int = 4096, seed: int = 0):
    """ReLU ridge functions centred on a packing, forming a star sequence.

    ``f_u(v) = relu(<u, v> - c) * R / 2`` with ``c = 1 - 2*eps/R`` is exactly
    ``eps`` at ``v = u`` and zero at every other packed vector, so the
    sequence is a star witness against the zero function at any scale below
    ``eps``.
    """
    eps, R = _as_fraction(eps), _as_fraction(R)
    U = relu_packing(d, eps, R, budget, seed)
    target = relu_target(d, eps, R)
    if len(U) < target:
        raise ConstructionFailure(
            f"packing reached {len(U)} vectors, needed {target}", achieved=len(U))
    c = 1 - 2 * eps / R
    values = []
    for v in U:
        row = []
        for u in U:
            z = sum((a * b for a, b in zip(u, v)), Fraction(0)) - c
            row.append(max(z, Fraction(0)) * R / 2)
        values.append(tuple(row))
    n = len(U)
    table = FunctionClassTable(
        tuple(f"u{i}" for i in range(n)), tuple(f"f_u{i}" for i in range(n)), tuple(values), REAL)
    witness = WitnessSequence(STAR, _zero_ref(n), tuple((i, i) for i in range(n)),
                              eps * (1 - WITNESS_SHRINK))
    return table, witness, U

