"""Edge colorings induced by eluder sequences and monochromatic-clique extraction.

For an eluder witness ``(x_1, f_1), ..., (x_m, f_m)`` the edge ``{i, j}`` with
``i > j`` is red when ``f_j`` agrees with the reference at ``x_i`` and blue
otherwise.  A red clique is a star sequence and a blue clique a threshold
sequence, so any monochromatic clique of the coloring extracts to one of the
two.  Vertices are 0-based here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .classes import FunctionClassTable, ReferenceFunction
from .combodim import dim_comb
from .errors import InvalidClique, InvalidParameter, InvalidWitness, ParseError, ResourceLimit
from .witness import ELUDER, STAR, THRESHOLD, WitnessSequence, verify_witness

RED = "red"
BLUE = "blue"
MAX_CLIQUE_VERTICES = 64


@dataclass(frozen=True)
class EdgeColoring:
    """Two-coloring of the complete graph on ``m`` vertices, keyed by ``(a, b)`` with ``a < b``."""

    m: int
    colors: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = set(itertools.combinations(range(self.m), 2))
        if set(self.colors) != expected:
            raise InvalidParameter("every pair must be colored exactly once")
        if any(c not in (RED, BLUE) for c in self.colors.values()):
            raise InvalidParameter("colors must be 'red' or 'blue'")

    def color(self, a: int, b: int) -> str:
        return self.colors[(a, b) if a < b else (b, a)]

    def to_json(self) -> dict:
        """Upper-triangular bit list in row order, 1 meaning blue."""
        bits = [int(self.colors[p] == BLUE) for p in itertools.combinations(range(self.m), 2)]
        return {"m": self.m, "blue_bits": bits}

    @classmethod
    def from_json(cls, doc: dict) -> "EdgeColoring":
        try:
            m = int(doc["m"])
            bits = list(doc["blue_bits"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad coloring document: {exc}") from None
        pairs = list(itertools.combinations(range(m), 2))
        if len(bits) != len(pairs) or any(b not in (0, 1) for b in bits):
            raise ParseError(f"expected {len(pairs)} bits of 0/1 for m={m}")
        return cls(m, {p: BLUE if b else RED for p, b in zip(pairs, bits)})

    @classmethod
    def from_edges(cls, m: int, red_edges) -> "EdgeColoring":
        red = {tuple(sorted(e)) for e in red_edges}
        return cls(m, {p: RED if p in red else BLUE for p in itertools.combinations(range(m), 2)})


def _require_eluder(table: FunctionClassTable, witness: WitnessSequence) -> None:
    if witness.kind != ELUDER or witness.scale != 0:
        raise InvalidWitness("expected a combinatorial eluder witness")
    verdict = verify_witness(table, witness)
    if not verdict:
        raise InvalidWitness(f"witness does not verify: {verdict.violation}")


def color_from_witness(table: FunctionClassTable, witness: WitnessSequence) -> EdgeColoring:
    _require_eluder(table, witness)
    ref = witness.reference.resolve(table)
    e = witness.entries
    colors = {}
    for j, i in itertools.combinations(range(len(e)), 2):
        xi, fj = e[i][0], e[j][1]
        colors[(j, i)] = RED if table.values[xi][fj] == ref[xi] else BLUE
    return EdgeColoring(len(e), colors)


def decode_coloring(coloring: EdgeColoring, ref_values) -> list[list[int]]:
    """Rebuild ``f_j(x_i)`` on witness points from the coloring and the reference there.

    Entries above the diagonal agree with the reference, diagonal entries
    disagree, and below-diagonal entries follow the edge color.
    """
    m = coloring.m
    out = [[0] * m for _ in range(m)]
    for i in range(m):
        r = ref_values[i]
        for j in range(m):
            if i < j:
                out[i][j] = r
            elif i == j:
                out[i][j] = -r
            else:
                out[i][j] = r if coloring.color(i, j) == RED else -r
    return out


def _adjacency(coloring: EdgeColoring, color: str) -> list[int]:
    adj = [0] * coloring.m
    for (a, b), c in coloring.colors.items():
        if c == color:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    return adj


def _first_clique(adj: list[int], m: int, k: int):
    """Lexicographically smallest ``k``-clique, by DFS in increasing vertex order."""

    def extend(chosen, cand):
        if len(chosen) == k:
            return tuple(chosen)
        need = k - len(chosen)
        while cand and bin(cand).count("1") >= need:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            found = extend(chosen + [v], cand & adj[v])
            if found:
                return found
        return None

    return extend([], (1 << m) - 1)


def find_mono_clique(coloring: EdgeColoring, k: int):
    """Lexicographically smallest monochromatic ``k``-set as ``(vertices, color)``, or None.

    When the smallest red and blue sets coincide, which only happens for
    ``k <= 1``, red is reported.
    """
    if k < 1:
        raise InvalidParameter("k must be at least 1")
    if coloring.m > MAX_CLIQUE_VERTICES:
        raise ResourceLimit(f"clique search is limited to {MAX_CLIQUE_VERTICES} vertices")
    if k > coloring.m:
        return None
    red = _first_clique(_adjacency(coloring, RED), coloring.m, k)
    blue = _first_clique(_adjacency(coloring, BLUE), coloring.m, k)
    if red is None and blue is None:
        return None
    if blue is None or (red is not None and red <= blue):
        return red, RED
    return blue, BLUE


def largest_mono_clique(coloring: EdgeColoring):
    """Largest monochromatic clique found by increasing ``k``; None for the empty graph."""
    best = None
    for k in range(1, coloring.m + 1):
        hit = find_mono_clique(coloring, k)
        if hit is None:
            break
        best = hit
    return best


def extract_subsequence(table: FunctionClassTable, witness: WitnessSequence, vertices,
                        color: str) -> WitnessSequence:
    """Restrict an eluder witness to a monochromatic vertex set.

    Red sets become star witnesses and blue sets threshold witnesses.
    """
    coloring = color_from_witness(table, witness)
    vs = sorted(set(int(v) for v in vertices))
    if not vs or vs[0] < 0 or vs[-1] >= coloring.m:
        raise InvalidClique("vertices must index the witness")
    if color not in (RED, BLUE):
        raise InvalidClique(f"unknown color {color!r}")
    for a, b in itertools.combinations(vs, 2):
        if coloring.color(a, b) != color:
            raise InvalidClique(f"edge ({a}, {b}) is not {color}")
    kind = STAR if color == RED else THRESHOLD
    out = WitnessSequence(kind, witness.reference, tuple(witness.entries[v] for v in vs))
    verdict = verify_witness(table, out)
    if not verdict:  # pragma: no cover - guaranteed by the coloring
        raise InvalidClique(f"extracted sequence fails: {verdict.violation}")
    return out


def guaranteed_clique_size(m: int) -> int:
    """``ceil(log4 m)``: every 2-coloring of ``K_m`` has a monochromatic clique this large."""
    k = 0
    while 4 ** k < m:
        k += 1
    return k


@dataclass
class AuditReport:
    edim: int
    sdim: int
    tdim: int
    sandwich_ok: bool
    clique: tuple = ()
    color: str | None = None
    extracted_kind: str | None = None
    extracted_length: int = 0
    guaranteed: int = 0
    extraction_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.sandwich_ok and self.extraction_ok

    def to_json(self) -> dict:
        return {**self.__dict__, "clique": list(self.clique), "ok": self.ok}


def equivalence_audit(table: FunctionClassTable, ref: ReferenceFunction) -> AuditReport:
    """All three dimensions, the sandwich between them, and Ramsey extraction from the eluder witness."""
    e = dim_comb(table, ref, ELUDER)
    s = dim_comb(table, ref, STAR).value
    t = dim_comb(table, ref, THRESHOLD).value
    top = max(s, t)
    rep = AuditReport(e.value, s, t, top <= e.value <= 4 ** top)
    m = e.value
    rep.guaranteed = guaranteed_clique_size(m)
    if m == 0:
        return rep
    coloring = color_from_witness(table, e.witness)
    vertices, color = largest_mono_clique(coloring)
    sub = extract_subsequence(table, e.witness, vertices, color)
    rep.clique = tuple(vertices)
    rep.color = color
    rep.extracted_kind = sub.kind
    rep.extracted_length = len(sub)
    rep.extraction_ok = bool(verify_witness(table, sub)) and len(sub) >= rep.guaranteed
    return rep


# ---------------------------------------------------------------- fixtures

def from_01(matrix) -> list[list[int]]:
    """0/1 entries to signs: 0 maps to +1 and 1 maps to -1."""
    return [[1 if v == 0 else -1 for v in row] for row in matrix]


# Six-step eluder sequence against the all-zeros function.  Free entries below
# the diagonal are set to 0 except for rows x2..x4 of f1, the fewest blue edges
# that make {1, 5, 6} the first monochromatic triangle.
FIG3_01 = (
    (1, 0, 0, 0, 0, 0),
    (1, 1, 0, 0, 0, 0),
    (1, 0, 1, 0, 0, 0),
    (1, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
)


def fig3_fixture() -> tuple[FunctionClassTable, WitnessSequence]:
    n = len(FIG3_01)
    table = FunctionClassTable(
        tuple(f"x{i + 1}" for i in range(n)), tuple(f"f{j + 1}" for j in range(n)),
        tuple(tuple(r) for r in from_01(FIG3_01)))
    ref = ReferenceFunction.constant(n, 1)
    return table, WitnessSequence(ELUDER, ref, tuple((i, i) for i in range(n)))


def five_cycle_coloring() -> EdgeColoring:
    """``K_5`` with the pentagon red and the pentagram blue: no monochromatic triangle."""
    return EdgeColoring.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
