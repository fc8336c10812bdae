"""Exact combinatorial dimensions of binary function classes.

Eluder dimension, star number and threshold dimension with respect to a
reference function, their suprema over member references, and the VC and
Littlestone dimensions.
"""

from __future__ import annotations

from fractions import Fraction

from . import kernels
from .classes import FunctionClassTable, ReferenceFunction
from .errors import InvalidParameter, ResourceLimit, WrongKind
from .witness import ELUDER, STAR, THRESHOLD, DimensionReport, WitnessSequence, verify_witness

MAX_VC_POINTS = 24
LDIM_BUDGET = 1 << 20

_ALIASES = {
    "eluder": ELUDER, "edim": ELUDER,
    "star": STAR, "sdim": STAR,
    "threshold": THRESHOLD, "tdim": THRESHOLD,
}
_KERNELS = {ELUDER: kernels.eluder, STAR: kernels.star, THRESHOLD: kernels.threshold}

__all__ = [
    "edim_comb", "sdim_comb", "tdim_comb", "dim_comb", "dim_sup_over_refs",
    "vcdim", "ldim", "edim_upper_bound", "agree_masks", "canonical_measure",
    "verify_witness",
]


def canonical_measure(measure: str) -> str:
    try:
        return _ALIASES[measure.lower()]
    except KeyError:
        raise InvalidParameter(f"unknown measure {measure!r}") from None


def _require_binary(table: FunctionClassTable) -> None:
    if not table.is_binary:
        raise WrongKind("combinatorial measures need a binary table; use the scale-sensitive search")


def agree_masks(table: FunctionClassTable, ref_values) -> list[int]:
    """Bit ``x`` of ``masks[f]`` is set iff ``f`` agrees with the reference at ``x``."""
    masks = [0] * table.n_functions
    for x, (row, r) in enumerate(zip(table.values, ref_values)):
        bit = 1 << x
        for f, v in enumerate(row):
            if v == r:
                masks[f] |= bit
    return masks


def dim_comb(table: FunctionClassTable, ref: ReferenceFunction, measure: str,
             limit: int | None = None, backend: str | None = None) -> DimensionReport:
    """Exact value and lexicographically smallest maximum witness for one measure.

    With ``limit`` the search stops once a witness of that length is found;
    the report is then marked inexact if the limit was reached.
    """
    _require_binary(table)
    kind = canonical_measure(measure)
    if limit is not None and limit < 0:
        raise InvalidParameter("limit must be nonnegative")
    ref_values = ref.resolve(table)
    masks = agree_masks(table, ref_values)
    value, points, funcs, nodes = _KERNELS[kind](masks, table.n_points, limit, backend)
    witness = WitnessSequence(kind, ref, tuple(zip(points, funcs)), Fraction(0))
    exact = limit is None or value < limit
    return DimensionReport(kind, ref, Fraction(0), value, witness, nodes, exact)


def edim_comb(table, ref, limit=None, backend=None) -> DimensionReport:
    return dim_comb(table, ref, ELUDER, limit, backend)


def sdim_comb(table, ref, limit=None, backend=None) -> DimensionReport:
    return dim_comb(table, ref, STAR, limit, backend)


def tdim_comb(table, ref, limit=None, backend=None) -> DimensionReport:
    return dim_comb(table, ref, THRESHOLD, limit, backend)


def dim_sup_over_refs(table: FunctionClassTable, measure: str, backend=None) -> DimensionReport:
    """Maximum over every column used as reference; ties keep the smallest column."""
    _require_binary(table)
    best = None
    per_ref = []
    for j in range(table.n_functions):
        rep = dim_comb(table, ReferenceFunction.col(j), measure, backend=backend)
        per_ref.append(rep.value)
        if best is None or rep.value > best.value:
            best = rep
    best.extra = {"per_reference": per_ref, "argmax_column": best.reference.column}
    return best


def edim_upper_bound(table: FunctionClassTable, ref: ReferenceFunction) -> int:
    """``min(|X|, |F| - 1)`` for a member reference, ``min(|X|, |F|)`` otherwise."""
    fs = table.n_functions - 1 if ref.is_member else table.n_functions
    return min(table.n_points, fs)


def _columns_as_masks(table: FunctionClassTable) -> list[int]:
    """Bitmask of the points where each function equals +1."""
    masks = [0] * table.n_functions
    for x, row in enumerate(table.values):
        for f, v in enumerate(row):
            if v == 1:
                masks[f] |= 1 << x
    return masks


def vcdim(table: FunctionClassTable) -> int:
    """Largest shattered point set.

    Shattered sets are closed under taking subsets, so candidates of size
    ``k + 1`` are grown only from shattered sets of size ``k``.
    """
    _require_binary(table)
    if table.n_points > MAX_VC_POINTS:
        raise ResourceLimit(f"vcdim is limited to {MAX_VC_POINTS} points")
    cols = list(set(_columns_as_masks(table)))
    ceiling = len(cols).bit_length() - 1
    level = [()]
    k = 0
    while k < ceiling:
        seen = set()
        nxt = []
        for S in level:
            start = S[-1] + 1 if S else 0
            for y in range(start, table.n_points):
                T = S + (y,)
                if T in seen:
                    continue
                seen.add(T)
                mask = 0
                for x in T:
                    mask |= 1 << x
                if len({c & mask for c in cols}) == 1 << len(T):
                    nxt.append(T)
        if not nxt:
            break
        level = nxt
        k += 1
    return k


def ldim(table: FunctionClassTable, backend=None) -> int:
    _require_binary(table)
    if table.n_points * table.n_functions > LDIM_BUDGET:
        raise ResourceLimit(f"ldim search budget |X|*|F| <= {LDIM_BUDGET} exceeded")
    # duplicate columns never change the tree depth
    cols = sorted(set(_columns_as_masks(table)))
    plus_at = [0] * table.n_points
    for f, c in enumerate(cols):
        for x in range(table.n_points):
            if c >> x & 1:
                plus_at[x] |= 1 << f
    value, _ = kernels.littlestone(plus_at, len(cols), backend)
    return value
