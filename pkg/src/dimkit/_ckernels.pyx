# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled search kernels; same contracts as :mod:`dimkit._pykernels`.

Bitsets are ``uint64_t``, so tables are limited to 64 points and 64 functions.
"""

from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long)
    int ctz64 "__builtin_ctzll"(unsigned long long)

MAX_BITS = 64
NO_LIMIT = 1 << 30

cdef enum:
    CAP = 64

cdef extern from *:
    """
    #include <unordered_map>
    #include <cstdint>
    static inline int dereference_value(std::unordered_map<uint64_t, int>::iterator it) { return it->second; }
    static inline int __builtin_clzll_wrap(unsigned long long v) { return v ? __builtin_clzll(v) : 64; }
    """
    int dereference_value(unordered_map[uint64_t, int].iterator it)
    int __builtin_clzll_wrap(unsigned long long)


cdef inline uint64_t _full(int n):
    if n >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return ((<uint64_t>1) << n) - 1


cdef inline uint64_t _bit(int i):
    return (<uint64_t>1) << i


def _check(int n_points, int n_funcs):
    if n_points > CAP or n_funcs > CAP:
        raise ValueError("compiled kernels support at most 64 points and 64 functions")


cdef class _Eluder:
    cdef uint64_t agree[CAP]
    cdef uint64_t dis[CAP]
    cdef int nf, limit
    cdef long long nodes
    cdef unordered_map[uint64_t, int] memo

    cdef uint64_t candidates(self, uint64_t S):
        cdef uint64_t cand = 0
        cdef int f
        for f in range(self.nf):
            if (self.agree[f] & S) == S:
                cand |= self.dis[f]
        return cand

    cdef int solve(self, uint64_t S, int depth):
        cdef unordered_map[uint64_t, int].iterator it = self.memo.find(S)
        if it != self.memo.end():
            return dereference_value(it)
        self.nodes += 1
        cdef int cap = self.limit - depth
        cdef int best = 0, v, x
        cdef uint64_t cand
        if cap > 0:
            cand = self.candidates(S)
            while cand:
                x = ctz64(cand)
                cand &= cand - 1
                v = 1 + self.solve(S | _bit(x), depth + 1)
                if v > best:
                    best = v
                    if best >= cap:
                        break
        self.memo[S] = best
        return best


def eluder(agree, int n_points, int limit=NO_LIMIT):
    cdef int nf = len(agree)
    _check(n_points, nf)
    cdef _Eluder ctx = _Eluder()
    cdef uint64_t full = _full(n_points)
    cdef int f, x
    ctx.nf = nf
    ctx.limit = limit
    ctx.nodes = 0
    for f in range(nf):
        ctx.agree[f] = <uint64_t>agree[f]
        ctx.dis[f] = full & ~ctx.agree[f]
    cdef int value = ctx.solve(0, 0)
    points, funcs = [], []
    cdef uint64_t S = 0, cand
    cdef int remaining = value
    while remaining > 0:
        cand = ctx.candidates(S)
        x = -1
        while cand:
            x = ctz64(cand)
            cand &= cand - 1
            if 1 + ctx.solve(S | _bit(x), len(points) + 1) >= remaining:
                break
        for f in range(nf):
            if (ctx.agree[f] & S) == S and not (ctx.agree[f] >> x) & 1:
                break
        points.append(x)
        funcs.append(f)
        S |= _bit(x)
        remaining -= 1
    return value, points, funcs, ctx.nodes


cdef class _Chain:
    """Shared state for the star and threshold branch-and-bound searches."""
    cdef uint64_t agree_at[CAP]
    cdef uint64_t dis_at[CAP]
    cdef uint64_t cands[CAP + 1][CAP]
    cdef int chosen[CAP]
    cdef int best_pts[CAP]
    cdef int best_fns[CAP]
    cdef int n, upper, best_len
    cdef long long nodes

    cdef void setup(self, agree, int n_points, int limit):
        cdef int nf = len(agree)
        cdef int f, x
        cdef uint64_t a
        self.n = n_points
        self.upper = min(limit, n_points, nf)
        self.best_len = 0
        self.nodes = 0
        for x in range(n_points):
            self.agree_at[x] = 0
        for f in range(nf):
            a = <uint64_t>agree[f]
            for x in range(n_points):
                if (a >> x) & 1:
                    self.agree_at[x] |= _bit(f)
        for x in range(n_points):
            self.dis_at[x] = _full(nf) & ~self.agree_at[x]

    cdef void record(self, int depth):
        cdef int i
        self.best_len = depth
        for i in range(depth):
            self.best_pts[i] = self.chosen[i]
            self.best_fns[i] = ctz64(self.cands[depth][i])

    cdef bint star_dfs(self, int start, uint64_t G, int depth):
        cdef int elig[CAP]
        cdef int ne = 0, idx, y, i
        cdef uint64_t a, c
        cdef bint ok
        self.nodes += 1
        if depth > self.best_len:
            self.record(depth)
        if self.best_len >= self.upper:
            return True
        for y in range(start, self.n):
            if G & self.dis_at[y]:
                elig[ne] = y
                ne += 1
        for idx in range(ne):
            if depth + ne - idx <= self.best_len:
                return False
            y = elig[idx]
            a = self.agree_at[y]
            ok = True
            for i in range(depth):
                c = self.cands[depth][i] & a
                if not c:
                    ok = False
                    break
                self.cands[depth + 1][i] = c
            if not ok:
                continue
            self.cands[depth + 1][depth] = G & self.dis_at[y]
            self.chosen[depth] = y
            if self.star_dfs(y + 1, G & a, depth + 1):
                return True
        return False

    cdef bint thr_dfs(self, uint64_t used, uint64_t G, int depth):
        cdef int elig[CAP]
        cdef int ne = 0, y, i, k
        cdef uint64_t d
        cdef bint ok
        self.nodes += 1
        if depth > self.best_len:
            self.record(depth)
        if self.best_len >= self.upper:
            return True
        for y in range(self.n):
            if (used >> y) & 1 or not (G & self.dis_at[y]):
                continue
            d = self.dis_at[y]
            ok = True
            for i in range(depth):
                if not (self.cands[depth][i] & d):
                    ok = False
                    break
            if ok:
                elig[ne] = y
                ne += 1
        if depth + ne <= self.best_len:
            return False
        for k in range(ne):
            y = elig[k]
            d = self.dis_at[y]
            for i in range(depth):
                self.cands[depth + 1][i] = self.cands[depth][i] & d
            self.cands[depth + 1][depth] = G & d
            self.chosen[depth] = y
            if self.thr_dfs(used | _bit(y), G & self.agree_at[y], depth + 1):
                return True
        return False

    cdef tuple result(self):
        pts = [self.best_pts[i] for i in range(self.best_len)]
        fns = [self.best_fns[i] for i in range(self.best_len)]
        return self.best_len, pts, fns, self.nodes


def star(agree, int n_points, int limit=NO_LIMIT):
    _check(n_points, len(agree))
    cdef _Chain ctx = _Chain()
    ctx.setup(agree, n_points, limit)
    ctx.star_dfs(0, _full(len(agree)), 0)
    return ctx.result()


def threshold(agree, int n_points, int limit=NO_LIMIT):
    _check(n_points, len(agree))
    cdef _Chain ctx = _Chain()
    ctx.setup(agree, n_points, limit)
    ctx.thr_dfs(0, _full(len(agree)), 0)
    return ctx.result()


cdef class _Littlestone:
    cdef vector[uint64_t] plus_at
    cdef unordered_map[uint64_t, int] memo
    cdef long long nodes

    cdef int solve(self, uint64_t V):
        cdef unordered_map[uint64_t, int].iterator it = self.memo.find(V)
        if it != self.memo.end():
            return dereference_value(it)
        self.nodes += 1
        cdef int ceiling = 63 - __builtin_clzll_wrap(V)
        cdef int best = 0, v, small, a_sz, b_sz, va, vb
        cdef uint64_t A, B
        cdef vector[uint64_t] seen
        cdef bint dup
        cdef size_t x, s
        for x in range(self.plus_at.size()):
            A = V & self.plus_at[x]
            B = V & ~self.plus_at[x]
            if not A or not B:
                continue
            dup = False
            for s in range(seen.size()):
                if seen[s] == A:
                    dup = True
                    break
            if dup:
                continue
            seen.push_back(A)
            a_sz = popcount64(A)
            b_sz = popcount64(B)
            small = a_sz if a_sz < b_sz else b_sz
            if 64 - __builtin_clzll_wrap(<uint64_t>small) <= best:
                continue
            va = self.solve(A)
            vb = self.solve(B)
            v = 1 + (va if va < vb else vb)
            if v > best:
                best = v
                if best >= ceiling:
                    break
        self.memo[V] = best
        return best


def littlestone(plus_at, int n_funcs):
    _check(0, n_funcs)
    cdef _Littlestone ctx = _Littlestone()
    for p in plus_at:
        ctx.plus_at.push_back(<uint64_t>p)
    ctx.nodes = 0
    cdef int value = ctx.solve(_full(n_funcs))
    return value, ctx.nodes
