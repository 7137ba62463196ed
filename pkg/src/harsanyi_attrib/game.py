"""Value tables: ingestion, serialization and synthetic games."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from . import lattice
from .errors import (
    BadLength,
    DuplicateIndex,
    DuplicateMask,
    EmptyCoalition,
    EmptyPlantedMask,
    IndexOutOfRange,
    InputError,
    MissingMask,
    NonFinite,
)

GAME_KINDS = ("linear", "planted-and", "planted-or", "planted-mixed", "random")


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Game values ``v(S)`` for every mask; ``values[0]`` is the baseline ``v(∅)``."""

    n: int
    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        values = lattice.as_lattice(self.values)
        if lattice.lattice_n(values) != self.n:
            raise BadLength(f"expected {1 << self.n} values for n={self.n}, got {len(values)}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise InputError(f"expected {self.n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_values(cls, values, labels=None, cap: int | None = None) -> "ValueTable":
        arr = np.asarray(values, dtype=np.float64)
        size = len(arr)
        n = size.bit_length() - 1
        if size < 2 or size != 1 << n:
            raise BadLength(f"values array length {size} is not a power of two >= 2")
        lattice.check_n(n, cap)
        return cls(n, arr, labels)

    @property
    def baseline(self) -> float:
        return float(self.values[0])

    @property
    def grand(self) -> float:
        return float(self.values[-1])

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])

    def __add__(self, other: "ValueTable") -> "ValueTable":
        if other.n != self.n:
            raise InputError("cannot add tables with different n")
        return ValueTable(self.n, self.values + other.values, self.labels)

    def __eq__(self, other):
        if not isinstance(other, ValueTable):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels == other.labels
            and np.array_equal(self.values, other.values)
        )

    def variable_name(self, i: int) -> str:
        return self.labels[i] if self.labels else f"x{i}"


def _check_finite(values: np.ndarray):
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NonFinite(f"non-finite value at mask {int(bad[0])}")


def _load_json(text: str, n: int | None, cap: int | None) -> ValueTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "values" not in doc:
        raise InputError('JSON value table must be an object with a "values" array')
    file_n = doc.get("n")
    if file_n is None:
        file_n = n
    if file_n is None:
        raise InputError('JSON value table is missing "n"')
    if n is not None and n != file_n:
        raise InputError(f"--n {n} disagrees with n={file_n} in the file")
    file_n = lattice.check_n(file_n, cap)
    raw = doc["values"]
    if not isinstance(raw, list):
        raise InputError('"values" must be an array')
    if len(raw) != 1 << file_n:
        raise BadLength(f"values array has length {len(raw)}, expected {1 << file_n} for n={file_n}")
    if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in raw):
        raise InputError('"values" must contain only numbers')
    values = np.array(raw, dtype=np.float64)
    _check_finite(values)
    return ValueTable(file_n, values, doc.get("labels"))


def _load_csv(text: str, n: int | None, cap: int | None) -> ValueTable:
    rows = [row for row in csv.reader(io.StringIO(text)) if row and any(c.strip() for c in row)]
    entries: dict[int, float] = {}
    for lineno, row in enumerate(rows):
        if len(row) != 2:
            raise InputError(f"CSV row {lineno + 1}: expected 'mask,value', got {row!r}")
        try:
            mask = int(row[0].strip())
            value = float(row[1].strip())
        except ValueError:
            if lineno == 0:
                continue  # header
            raise InputError(f"CSV row {lineno + 1}: cannot parse {row!r}") from None
        if mask < 0:
            raise InputError(f"CSV row {lineno + 1}: negative mask {mask}")
        if not math.isfinite(value):
            raise NonFinite(f"non-finite value at mask {mask}")
        if mask in entries:
            raise DuplicateMask(f"mask {mask} appears more than once")
        entries[mask] = value
    if not entries:
        raise InputError("CSV value table has no rows")
    top = max(entries)
    if n is None:
        n = max(1, top.bit_length())
    n = lattice.check_n(n, cap)
    if top >= 1 << n:
        raise IndexOutOfRange(f"mask {top} does not fit in n={n} bits")
    missing = [m for m in range(1 << n) if m not in entries]
    if missing:
        raise MissingMask(f"{len(missing)} masks missing, first is {missing[0]}")
    values = np.array([entries[m] for m in range(1 << n)], dtype=np.float64)
    return ValueTable(n, values)


def load_value_table(
    source: IO | bytes | str, format: str = "json", n: int | None = None, cap: int | None = None
) -> ValueTable:
    """Parse a value table from a stream (or bytes/str contents).

    ``n`` plays the role of the ``--n`` flag: for CSV it replaces the inferred
    variable count, for JSON it must agree with the file.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if format == "json":
        return _load_json(source, n, cap)
    if format == "csv":
        return _load_csv(source, n, cap)
    raise InputError(f"unknown format {format!r}")


def dump_value_table(table: ValueTable) -> str:
    """Canonical JSON text for a table; floats keep full round-trip precision."""
    doc: dict = {"n": table.n, "values": [float(x) for x in table.values]}
    if table.labels is not None:
        doc["labels"] = list(table.labels)
    return json.dumps(doc) + "\n"


def dump_value_table_csv(table: ValueTable) -> str:
    lines = ["mask,value"]
    lines += [f"{m},{float(x)!r}" for m, x in enumerate(table.values)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GameSpec:
    """Recipe for a synthetic game.

    ``weights`` feeds the linear kind; ``and_terms`` and ``or_terms`` are
    ``(mask, coefficient)`` pairs for the planted kinds. The planted-or kind
    reads ``or_terms`` and planted-mixed reads both.
    """

    kind: str
    n: int
    seed: int = 0
    weights: Sequence[float] = ()
    and_terms: Sequence[tuple[int, float]] = field(default_factory=tuple)
    or_terms: Sequence[tuple[int, float]] = field(default_factory=tuple)
    baseline: float = 0.0


def _planted(n: int, terms, *, disjunctive: bool) -> np.ndarray:
    all_masks = lattice.masks(n)
    out = np.zeros(1 << n)
    for mask, coef in terms:
        mask = int(mask)
        if mask == 0:
            raise EmptyPlantedMask("planted masks must be nonempty")
        if mask < 0 or mask >= 1 << n:
            raise IndexOutOfRange(f"planted mask {mask} does not fit in n={n} bits")
        if disjunctive:
            hit = (all_masks & mask) != 0
        else:
            hit = (all_masks & mask) == mask
        out[hit] += float(coef)
    return out


def synth_game(spec: GameSpec, cap: int | None = None) -> ValueTable:
    n = lattice.check_n(spec.n, cap)
    kind = spec.kind
    if kind == "linear":
        weights = np.asarray(spec.weights, dtype=np.float64)
        if weights.shape != (n,):
            raise InputError(f"linear game needs {n} weights, got {len(weights)}")
        bits = (lattice.masks(n)[:, None] >> np.arange(n)) & 1
        values = bits @ weights
    elif kind == "planted-and":
        values = _planted(n, spec.and_terms, disjunctive=False)
    elif kind == "planted-or":
        values = _planted(n, spec.or_terms, disjunctive=True)
    elif kind == "planted-mixed":
        values = _planted(n, spec.and_terms, disjunctive=False) + _planted(
            n, spec.or_terms, disjunctive=True
        )
    elif kind == "random":
        rng = np.random.default_rng(spec.seed)
        values = rng.uniform(-1.0, 1.0, size=1 << n)
    else:
        raise InputError(f"unknown game kind {kind!r}; expected one of {', '.join(GAME_KINDS)}")
    return ValueTable(n, values + spec.baseline)


def parse_coalition(text: str, n: int) -> int:
    """Mask for a comma-separated list of 0-indexed variables, e.g. ``"0,2"`` -> ``0b101``."""
    parts = [p.strip() for p in str(text).split(",")]
    parts = [p for p in parts if p]
    if not parts:
        raise EmptyCoalition("coalition must name at least one variable")
    mask = 0
    for p in parts:
        try:
            i = int(p)
        except ValueError:
            raise InputError(f"bad variable index {p!r}") from None
        if i < 0 or i >= n:
            raise IndexOutOfRange(f"variable index {i} is outside [0, {n})")
        if mask >> i & 1:
            raise DuplicateIndex(f"variable index {i} listed twice")
        mask |= 1 << i
    return mask
