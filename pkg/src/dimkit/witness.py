"""Witness sequences, dimension reports and exact witness verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .classes import FunctionClassTable, ReferenceFunction, _as_fraction, _encode_value
from .errors import InvalidParameter, InvalidWitness, ParseError

ELUDER = "eluder"
STAR = "star"
THRESHOLD = "threshold"
KINDS = (ELUDER, STAR, THRESHOLD)


@dataclass(frozen=True)
class WitnessSequence:
    kind: str
    reference: ReferenceFunction
    entries: tuple[tuple[int, int], ...] = ()
    scale: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown witness kind {self.kind!r}")
        object.__setattr__(self, "entries", tuple((int(i), int(j)) for i, j in self.entries))
        object.__setattr__(self, "scale", _as_fraction(self.scale))
        if self.scale < 0:
            raise InvalidParameter("scale must be nonnegative")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def functions(self) -> tuple[int, ...]:
        return tuple(j for _, j in self.entries)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "reference": self.reference.to_json(),
            "scale": str(_encode_value(self.scale)),
            "entries": [list(e) for e in self.entries],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "WitnessSequence":
        try:
            return cls(
                kind=doc["kind"],
                reference=ReferenceFunction.from_json(doc["reference"]),
                entries=tuple(tuple(e) for e in doc.get("entries", [])),
                scale=Fraction(str(doc.get("scale", "0"))),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad witness document: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass
class DimensionReport:
    measure: str
    reference: ReferenceFunction | None
    scale: Fraction
    value: int
    witness: WitnessSequence
    nodes_explored: int = 0
    exact: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "measure": self.measure,
            "reference": None if self.reference is None else self.reference.to_json(),
            "scale": str(_encode_value(self.scale)),
            "value": self.value,
            "witness": self.witness.to_json(),
            "nodes_explored": self.nodes_explored,
            "exact": self.exact,
            **({"extra": self.extra} if self.extra else {}),
        }


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violation: str | None = None
    position: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _deviations(table: FunctionClassTable, ref: tuple):
    if table.is_binary:
        return [[v - r for v in row] for row, r in zip(table.values, ref)]
    return [[_as_fraction(v) - r for v in row] for row, r in zip(table.values, ref)]


def verify_witness(table: FunctionClassTable, witness: WitnessSequence) -> Verdict:
    """Check every defining condition of the witness kind in exact arithmetic.

    At scale 0 the conditions reduce to the combinatorial ones: deviation means
    disagreement and a zero squared sum means agreement.
    """
    ref = witness.reference.resolve(table)
    for pos, (i, j) in enumerate(witness.entries):
        if not (0 <= i < table.n_points and 0 <= j < table.n_functions):
            raise InvalidWitness(f"entry {pos} = ({i}, {j}) is out of range")
    dev = _deviations(table, ref)
    eps = witness.scale
    eps2 = eps * eps
    pts = witness.points
    m = len(pts)
    for pos, (x, f) in enumerate(witness.entries):
        if witness.kind == THRESHOLD:
            for k in range(pos, m):
                if not abs(dev[pts[k]][f]) > eps:
                    return Verdict(False, f"f[{pos}] does not deviate at x[{k}]", pos)
        elif not abs(dev[x][f]) > eps:
            return Verdict(False, f"f[{pos}] does not deviate at its own point", pos)
        others = range(pos) if witness.kind != STAR else (k for k in range(m) if k != pos)
        total = sum((dev[pts[k]][f] ** 2 for k in others), Fraction(0))
        if total > eps2:
            if eps == 0:
                return Verdict(False, f"f[{pos}] disagrees with the reference at another point", pos)
            return Verdict(False, f"f[{pos}] squared deviation {total} exceeds {eps2}", pos)
    return Verdict(True)
