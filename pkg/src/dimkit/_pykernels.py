"""Pure-Python search kernels over bitsets.

Every kernel receives ``agree[f]``: the bitmask of points on which function
``f`` agrees with the reference.  Python integers make the bitsets unbounded,
so this module also serves tables too wide for the compiled kernels.

Kernels return ``(value, points, functions, nodes)`` where ``points`` and
``functions`` spell out the lexicographically smallest maximum witness: the
point sequence is minimised first, then the function sequence.
"""

from __future__ import annotations

import sys

NO_LIMIT = 1 << 30


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _per_point(agree, n_points):
    agree_at = [0] * n_points
    for f, a in enumerate(agree):
        for x in _bits(a):
            agree_at[x] |= 1 << f
    full_f = (1 << len(agree)) - 1
    dis_at = [full_f & ~a for a in agree_at]
    return agree_at, dis_at


def eluder(agree, n_points, limit=NO_LIMIT):
    """Subset DP: the feasible continuation depends only on the set of used points."""
    full = (1 << n_points) - 1
    dis = [full & ~a for a in agree]
    memo: dict[int, int] = {}
    nodes = 0
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n_points + 1000))

    def candidates(S):
        cand = 0
        for f, a in enumerate(agree):
            if a & S == S:
                cand |= dis[f]
        return cand

    def solve(S, depth):
        nonlocal nodes
        hit = memo.get(S)
        if hit is not None:
            return hit
        nodes += 1
        cap = limit - depth
        best = 0
        if cap > 0:
            for x in _bits(candidates(S)):
                v = 1 + solve(S | (1 << x), depth + 1)
                if v > best:
                    best = v
                    if best >= cap:
                        break
        memo[S] = best
        return best

    value = solve(0, 0)
    points, funcs = [], []
    S = 0
    remaining = value
    while remaining > 0:
        for x in _bits(candidates(S)):
            if 1 + solve(S | (1 << x), len(points) + 1) >= remaining:
                break
        else:  # pragma: no cover - DP invariant
            raise AssertionError("eluder reconstruction failed")
        f = next(f for f, a in enumerate(agree) if a & S == S and not a >> x & 1)
        points.append(x)
        funcs.append(f)
        S |= 1 << x
        remaining -= 1
    return value, points, funcs, nodes


def star(agree, n_points, limit=NO_LIMIT):
    """Branch and bound over point sets in increasing order."""
    agree_at, dis_at = _per_point(agree, n_points)
    upper = min(limit, n_points, len(agree))
    full_f = (1 << len(agree)) - 1
    best = [0, [], []]
    nodes = 0

    def dfs(start, G, cands, chosen):
        nonlocal nodes
        nodes += 1
        if len(chosen) > best[0]:
            best[:] = [len(chosen), list(chosen), [_lowest(c) for c in cands]]
        if best[0] >= upper:
            return True
        eligible = [y for y in range(start, n_points) if G & dis_at[y]]
        for idx, y in enumerate(eligible):
            if len(chosen) + len(eligible) - idx <= best[0]:
                return False
            a = agree_at[y]
            newc = [c & a for c in cands]
            if not all(newc):
                continue
            newc.append(G & dis_at[y])
            chosen.append(y)
            done = dfs(y + 1, G & a, newc, chosen)
            chosen.pop()
            if done:
                return True
        return False

    dfs(0, full_f, [], [])
    return best[0], best[1], best[2], nodes


def threshold(agree, n_points, limit=NO_LIMIT):
    """Branch and bound over ordered point sequences.

    ``cands[i]`` holds the functions that agree before position ``i`` and
    disagree from ``i`` onward; every appended point must keep all of them
    nonempty.
    """
    agree_at, dis_at = _per_point(agree, n_points)
    upper = min(limit, n_points, len(agree))
    full_f = (1 << len(agree)) - 1
    best = [0, [], []]
    nodes = 0

    def dfs(used, G, cands, chosen):
        nonlocal nodes
        nodes += 1
        if len(chosen) > best[0]:
            best[:] = [len(chosen), list(chosen), [_lowest(c) for c in cands]]
        if best[0] >= upper:
            return True
        eligible = []
        for y in range(n_points):
            if used >> y & 1 or not G & dis_at[y]:
                continue
            d = dis_at[y]
            if all(c & d for c in cands):
                eligible.append(y)
        if len(chosen) + len(eligible) <= best[0]:
            return False
        for y in eligible:
            d = dis_at[y]
            newc = [c & d for c in cands]
            newc.append(G & d)
            chosen.append(y)
            done = dfs(used | (1 << y), G & agree_at[y], newc, chosen)
            chosen.pop()
            if done:
                return True
        return False

    dfs(0, full_f, [], [])
    return best[0], best[1], best[2], nodes


def littlestone(plus_at, n_funcs):
    """Deepest complete mistake tree; ``plus_at[x]`` = functions equal to +1 at ``x``.

    Memoised on the version-space bitset.
    """
    memo: dict[int, int] = {}
    nodes = 0

    def solve(V):
        nonlocal nodes
        hit = memo.get(V)
        if hit is not None:
            return hit
        nodes += 1
        size = V.bit_count() if hasattr(V, "bit_count") else bin(V).count("1")
        ceiling = size.bit_length() - 1
        best = 0
        seen = set()
        for p in plus_at:
            A = V & p
            B = V & ~p
            if not A or not B or A in seen:
                continue
            seen.add(A)
            small = min(_popcount(A), _popcount(B))
            if small.bit_length() <= best:  # 1 + floor(log2 small) <= best
                continue
            v = 1 + min(solve(A), solve(B))
            if v > best:
                best = v
                if best >= ceiling:
                    break
        memo[V] = best
        return best

    value = solve((1 << n_funcs) - 1)
    return value, nodes


def _popcount(m: int) -> int:
    return bin(m).count("1")
