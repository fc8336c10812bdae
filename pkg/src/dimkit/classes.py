"""Finite function classes as point-by-function value tables, plus generators.

A table stores ``values[i][j] = f_j(x_i)``.  Binary tables hold the integers
``+1``/``-1``; real tables hold :class:`fractions.Fraction` so that every
comparison made by the dimension searches is exact.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter, ParseError, ResourceLimit

BINARY = "binary"
REAL = "real"
MAX_PARITY_BITS = 12


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class FunctionClassTable:
    points: tuple[str, ...]
    functions: tuple[str, ...]
    values: tuple[tuple, ...]
    kind: str = BINARY

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        object.__setattr__(self, "functions", tuple(str(f) for f in self.functions))
        if self.kind not in (BINARY, REAL):
            raise InvalidParameter(f"unknown table kind {self.kind!r}")
        if not self.points or not self.functions:
            raise InvalidParameter("a table needs at least one point and one function")
        if len(set(self.points)) != len(self.points):
            raise InvalidParameter("point labels must be unique")
        if len(set(self.functions)) != len(self.functions):
            raise InvalidParameter("function labels must be unique")
        if len(self.values) != len(self.points):
            raise InvalidParameter(
                f"expected {len(self.points)} rows, got {len(self.values)}")
        rows = []
        for i, row in enumerate(self.values):
            row = tuple(row)
            if len(row) != len(self.functions):
                raise ParseError("ragged matrix", i, len(row))
            if self.kind == BINARY:
                for j, v in enumerate(row):
                    if v not in (1, -1) or isinstance(v, bool):
                        raise ParseError(f"binary entry {v!r} is not +1/-1", i, j)
                row = tuple(int(v) for v in row)
            else:
                row = tuple(_as_fraction(v) for v in row)
            rows.append(row)
        object.__setattr__(self, "values", tuple(rows))

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_functions(self) -> int:
        return len(self.functions)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_points, self.n_functions

    @property
    def is_binary(self) -> bool:
        return self.kind == BINARY

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.values)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.values], dtype=float)

    def as_real(self) -> "FunctionClassTable":
        if self.kind == REAL:
            return self
        return FunctionClassTable(self.points, self.functions, self.values, REAL)

    @classmethod
    def from_matrix(cls, matrix, kind: str | None = None, points=None, functions=None):
        """Build a table from a nested sequence or array, auto-labelling axes."""
        rows = [list(r) for r in matrix]
        if kind is None:
            flat = [v for r in rows for v in r]
            kind = BINARY if all(v in (1, -1) for v in flat) else REAL
        if kind == BINARY:
            rows = [[int(v) for v in r] for r in rows]
        n, m = len(rows), len(rows[0]) if rows else 0
        points = points or [f"x{i + 1}" for i in range(n)]
        functions = functions or [f"f{j + 1}" for j in range(m)]
        return cls(tuple(points), tuple(functions), tuple(tuple(r) for r in rows), kind)


@dataclass(frozen=True)
class ReferenceFunction:
    """Either a column of the table or an explicit value vector."""

    column: int | None = None
    vector: tuple | None = None

    def __post_init__(self):
        if (self.column is None) == (self.vector is None):
            raise InvalidParameter("reference needs exactly one of column / vector")
        if self.vector is not None:
            object.__setattr__(self, "vector", tuple(self.vector))

    @classmethod
    def col(cls, j: int) -> "ReferenceFunction":
        return cls(column=int(j))

    @classmethod
    def of(cls, values: Iterable) -> "ReferenceFunction":
        return cls(vector=tuple(values))

    @classmethod
    def constant(cls, n: int, value) -> "ReferenceFunction":
        return cls(vector=(value,) * n)

    @property
    def is_member(self) -> bool:
        return self.column is not None

    def resolve(self, table: FunctionClassTable) -> tuple:
        if self.column is not None:
            if not 0 <= self.column < table.n_functions:
                raise InvalidParameter(
                    f"reference column {self.column} out of range 0..{table.n_functions - 1}")
            return table.column(self.column)
        if len(self.vector) != table.n_points:
            raise InvalidParameter(
                f"reference vector has length {len(self.vector)}, table has {table.n_points} points")
        if table.is_binary:
            for i, v in enumerate(self.vector):
                if v not in (1, -1):
                    raise InvalidParameter(f"binary reference entry {v!r} at {i} is not +1/-1")
            return tuple(int(v) for v in self.vector)
        return tuple(_as_fraction(v) for v in self.vector)

    def to_json(self) -> dict:
        if self.column is not None:
            return {"column": self.column}
        return {"vector": [_encode_value(v) for v in self.vector]}

    @classmethod
    def from_json(cls, doc: dict) -> "ReferenceFunction":
        if "column" in doc:
            return cls.col(doc["column"])
        if "vector" in doc:
            return cls.of(_decode_value(v) for v in doc["vector"])
        raise ParseError("reference must have 'column' or 'vector'")


# ---------------------------------------------------------------- generators

def _positive(name: str, n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameter(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def gen_thresholds(n: int) -> FunctionClassTable:
    """Thresholds on ``[n]``: ``f_i(x) = +1`` iff ``x >= i`` for ``i`` in ``1..n+1``."""
    n = _positive("n", n)
    values = [[1 if x >= i else -1 for i in range(1, n + 2)] for x in range(1, n + 1)]
    return FunctionClassTable(
        tuple(str(x) for x in range(1, n + 1)),
        tuple(f"f{i}" for i in range(1, n + 2)),
        tuple(map(tuple, values)))


def gen_singletons(n: int) -> FunctionClassTable:
    """Singletons on ``[n]`` plus the all-minus function ``f_{n+1}``."""
    n = _positive("n", n)
    values = [[1 if x == i else -1 for i in range(1, n + 2)] for x in range(1, n + 1)]
    return FunctionClassTable(
        tuple(str(x) for x in range(1, n + 1)),
        tuple(f"f{i}" for i in range(1, n + 2)),
        tuple(map(tuple, values)))


def gen_parities(d: int) -> FunctionClassTable:
    """Parities ``x -> prod_{i in S} x_i`` over ``{-1,+1}^d``.

    Points run in lexicographic order with ``+1`` before ``-1``; subset ``S``
    sits at column ``s`` where bit ``i`` of ``s`` marks coordinate ``i + 1``.
    """
    d = _positive("d", d)
    if d > MAX_PARITY_BITS:
        raise ResourceLimit(f"parity table for d={d} exceeds the 2^{MAX_PARITY_BITS} limit")
    cube = list(itertools.product((1, -1), repeat=d))
    values = []
    for x in cube:
        row = []
        for s in range(1 << d):
            v = 1
            for i in range(d):
                if s >> i & 1:
                    v *= x[i]
            row.append(v)
        values.append(tuple(row))
    points = tuple("".join("+" if c == 1 else "-" for c in x) for x in cube)
    functions = tuple(
        "{" + ",".join(str(i + 1) for i in range(d) if s >> i & 1) + "}" for s in range(1 << d))
    return FunctionClassTable(points, functions, tuple(values))


def gen_scale_counterexample(N: int, eps, diag_margin=Fraction(101, 100)) -> FunctionClassTable:
    """Lower-triangular real class: ``0`` above, ``margin*eps`` on, ``0.99*eps`` below the diagonal."""
    N = _positive("N", N)
    eps = _as_fraction(eps)
    diag_margin = _as_fraction(diag_margin)
    if eps <= 0:
        raise InvalidParameter("eps must be positive")
    if diag_margin <= 1:
        raise InvalidParameter("diag_margin must exceed 1 for the strict deviation test")
    below = Fraction(99, 100) * eps
    diag = diag_margin * eps
    values = [[0 if i < j else (diag if i == j else below) for j in range(N)] for i in range(N)]
    return FunctionClassTable(
        tuple(f"x{i + 1}" for i in range(N)),
        tuple(f"f{j + 1}" for j in range(N)),
        tuple(map(tuple, values)), REAL)


EXP_DIGITS = 30


def gen_exp_class(n_points: int, n_funcs: int) -> FunctionClassTable:
    """``exp(theta_i * x_j)`` with ``x_j = j/n_points`` and ``theta_i = i/n_funcs``.

    Entries are rounded to ``EXP_DIGITS`` significant decimal digits.
    """
    n_points = _positive("n_points", n_points)
    n_funcs = _positive("n_funcs", n_funcs)
    values = []
    with localcontext() as ctx:
        ctx.prec = EXP_DIGITS
        for j in range(1, n_points + 1):
            row = []
            for i in range(1, n_funcs + 1):
                z = Decimal(i * j) / Decimal(n_points * n_funcs)
                row.append(Fraction(z.exp()))
            values.append(tuple(row))
    return FunctionClassTable(
        tuple(f"{j}/{n_points}" for j in range(1, n_points + 1)),
        tuple(f"theta={i}/{n_funcs}" for i in range(1, n_funcs + 1)),
        tuple(values), REAL)


# ------------------------------------------------------------- file formats

def _terminating(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def _encode_value(v):
    """Integers stay integers; other rationals become decimal or ``p/q`` strings."""
    if isinstance(v, int):
        return v
    q = _as_fraction(v)
    if q.denominator == 1:
        return str(q.numerator)
    if _terminating(q):
        # exact: enough digits for 2^a 5^b denominators
        digits = max(_multiplicity(q.denominator, 2), _multiplicity(q.denominator, 5))
        with localcontext() as ctx:
            ctx.prec = len(str(abs(q.numerator))) + digits + 5
            text = format(Decimal(q.numerator) / Decimal(q.denominator), "f")
        return text
    return f"{q.numerator}/{q.denominator}"


def _multiplicity(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _decode_value(v):
    if isinstance(v, bool):
        raise ValueError(f"boolean {v!r} is not a value")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return Fraction(repr(v))
    if isinstance(v, str):
        q = Fraction(v.strip())
        return int(q) if q.denominator == 1 and "." not in v and "/" not in v else q
    raise ValueError(f"unsupported value {v!r}")


def _build(kind, points, functions, raw_rows) -> FunctionClassTable:
    if kind not in (BINARY, REAL):
        raise ParseError(f"kind must be 'binary' or 'real', got {kind!r}")
    if len(raw_rows) != len(points):
        raise ParseError(f"expected {len(points)} rows, found {len(raw_rows)}")
    rows = []
    for i, raw in enumerate(raw_rows):
        if not isinstance(raw, (list, tuple)):
            raise ParseError("row is not a list", i, 0)
        if len(raw) != len(functions):
            raise ParseError(f"ragged matrix: expected {len(functions)} entries", i, len(raw))
        row = []
        for j, v in enumerate(raw):
            try:
                val = _decode_value(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad entry {v!r}: {exc}", i, j) from None
            if kind == BINARY and val not in (1, -1):
                raise ParseError(f"binary entry {v!r} is not +1/-1", i, j)
            row.append(val)
        rows.append(tuple(row))
    try:
        return FunctionClassTable(tuple(points), tuple(functions), tuple(rows), kind)
    except InvalidParameter as exc:
        raise ParseError(str(exc)) from None


def parse_class(data: bytes | str, fmt: str = "json", kind: str | None = None) -> FunctionClassTable:
    """Parse a JSON (default) or CSV class document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt == "csv":
        return _parse_csv(data, kind)
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("class document must be a JSON object")
    missing = {"kind", "points", "functions", "values"} - doc.keys()
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    return _build(doc["kind"], doc["points"], doc["functions"], doc["values"])


def _parse_csv(text: str, kind: str | None) -> FunctionClassTable:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 2:
        raise ParseError("CSV needs a header row and at least one point row")
    functions = rows[0][1:]
    points = [r[0] for r in rows[1:]]
    raw = [r[1:] for r in rows[1:]]
    if kind is None:
        try:
            kind = BINARY if all(Fraction(v) in (1, -1) for r in raw for v in r) else REAL
        except (ValueError, ZeroDivisionError):
            kind = REAL
    return _build(kind, points, functions, raw)


def serialize_class(table: FunctionClassTable, fmt: str = "json") -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["point", *table.functions])
        for label, row in zip(table.points, table.values):
            writer.writerow([label, *(_encode_value(v) for v in row)])
        return buf.getvalue().encode("utf-8")
    doc = {
        "kind": table.kind,
        "points": list(table.points),
        "functions": list(table.functions),
        "values": [[_encode_value(v) for v in row] for row in table.values],
    }
    return json.dumps(doc).encode("utf-8")


def load_class(path: str) -> FunctionClassTable:
    fmt = "csv" if str(path).lower().endswith(".csv") else "json"
    with open(path, "rb") as handle:
        return parse_class(handle.read(), fmt)


GENERATORS = {
    "thresholds": gen_thresholds,
    "singletons": gen_singletons,
    "parities": gen_parities,
    "scale-counterexample": gen_scale_counterexample,
    "exp": gen_exp_class,
}


def disagreement(table: FunctionClassTable, ref: Sequence) -> list[list[bool]]:
    """``out[i][j]`` is True where ``f_j(x_i) != ref(x_i)``."""
    return [[v != r for v in row] for row, r in zip(table.values, ref)]
