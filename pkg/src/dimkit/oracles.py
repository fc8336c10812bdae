"""Brute-force reference implementations used to cross-check the fast paths.

Nothing here shares code with the bitset kernels, the subset DP or the
power iteration: each routine enumerates straight from the definitions.
They are exponential and meant for small tables only.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .classes import FunctionClassTable


def _dev_matrix(table: FunctionClassTable, ref) -> list[list[Fraction]]:
    return [[Fraction(v) - Fraction(r) for v in row] for row, r in zip(table.values, ref)]


def _valid(seq, dev, kind, eps) -> bool:
    eps2 = eps * eps
    m = len(seq)
    for i, (x, f) in enumerate(seq):
        if kind == "threshold":
            if any(not abs(dev[seq[k][0]][f]) > eps for k in range(i, m)):
                return False
        elif not abs(dev[x][f]) > eps:
            return False
        if kind == "star":
            others = [seq[k][0] for k in range(m) if k != i]
        else:
            others = [seq[k][0] for k in range(i)]
        if sum((dev[p][f] ** 2 for p in others), Fraction(0)) > eps2:
            return False
    return True


def naive_dimension(table: FunctionClassTable, ref, kind: str, eps=0, cap: int | None = None) -> int:
    """Longest valid sequence by depth-first enumeration of (point, function) pairs.

    Points may repeat.  Every definition is closed under dropping the last
    pair, so invalid prefixes are cut.
    """
    dev = _dev_matrix(table, ref)
    eps = Fraction(eps)
    pairs = [(x, f) for x in range(table.n_points) for f in range(table.n_functions)]
    cap = cap if cap is not None else table.n_points + 1
    best = 0

    def extend(seq):
        nonlocal best
        best = max(best, len(seq))
        if len(seq) >= cap:
            return
        for p in pairs:
            seq.append(p)
            if _valid(seq, dev, kind, eps):
                extend(seq)
            seq.pop()

    extend([])
    return best


def naive_vcdim(table: FunctionClassTable) -> int:
    cols = [table.column(j) for j in range(table.n_functions)]
    best = 0
    for k in range(1, table.n_points + 1):
        found = False
        for S in itertools.combinations(range(table.n_points), k):
            if len({tuple(c[i] for i in S) for c in cols}) == 2 ** k:
                found = True
                break
        if not found:
            break
        best = k
    return best


def naive_ldim(table: FunctionClassTable) -> int:
    """Mistake-tree depth from the recursive definition, no memoisation."""
    cols = [table.column(j) for j in range(table.n_functions)]

    def depth(V):
        best = 0
        for x in range(table.n_points):
            plus = [j for j in V if cols[j][x] == 1]
            minus = [j for j in V if cols[j][x] == -1]
            if plus and minus:
                best = max(best, 1 + min(depth(plus), depth(minus)))
        return best

    return depth(list(range(table.n_functions)))


def naive_mono_clique(colors: dict, m: int, k: int):
    """Lexicographically first monochromatic k-set, red tested before blue."""
    for S in itertools.combinations(range(m), k):
        edge_colors = {colors[(a, b)] for a, b in itertools.combinations(S, 2)}
        if len(edge_colors) <= 1:
            return S, (edge_colors.pop() if edge_colors else "red")
    return None


def naive_sequence_counts(B, k: int) -> tuple[int, int, int]:
    """Count (I, J) with distinct entries realising the three sign patterns."""
    N, M = len(B), len(B[0])
    star_p = star_m = thr_p = 0
    for I in itertools.permutations(range(N), k):
        for J in itertools.permutations(range(M), k):
            sub = [[B[I[r]][J[s]] for s in range(k)] for r in range(k)]
            if all(sub[r][s] == (-1 if r == s else 1) for r in range(k) for s in range(k)):
                star_p += 1
            if all(sub[r][s] == (1 if r == s else -1) for r in range(k) for s in range(k)):
                star_m += 1
            if all(sub[r][s] == (1 if r < s else -1) for r in range(k) for s in range(k)):
                thr_p += 1
    return star_p, star_m, thr_p


def svd_spectral_norm(A) -> float:
    return float(np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)[0])
