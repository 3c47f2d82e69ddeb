"""Typed tabular datasets and quasi-identifier (equivalence class) analysis.

A record's identification probability under a set of quasi-identifier
columns is ``1 / k`` where ``k`` is the size of its equivalence class, i.e.
the number of rows sharing its projection onto those columns.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Literal, Sequence

from .errors import DatasetError, UnknownColumnError

ColumnKind = Literal["categorical", "numeric"]


class _Missing:
    """Singleton for an absent cell. Equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MISSING"

    def __reduce__(self):
        return (_Missing, ())


MISSING = _Missing()


@dataclass(frozen=True)
class Column:
    name: str
    kind: ColumnKind


@dataclass(frozen=True)
class Dataset:
    columns: tuple[Column, ...]
    rows: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        names = [c.name for c in self.columns]
        dupes = sorted(n for n, c in Counter(names).items() if c > 1)
        if dupes:
            raise DatasetError(f"duplicate column names: {', '.join(dupes)}")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise DatasetError(
                    f"ragged row {i}: {len(row)} values under {len(self.columns)} headers"
                )
        for j, col in enumerate(self.columns):
            if col.kind != "numeric":
                continue
            for i, row in enumerate(self.rows):
                v = row[j]
                if v is MISSING:
                    continue
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise DatasetError(f"row {i}, column {col.name!r}: {v!r} is not a finite number")

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def __len__(self):
        return len(self.rows)

    def index(self, name: str) -> int:
        for j, c in enumerate(self.columns):
            if c.name == name:
                return j
        raise UnknownColumnError(f"unknown column {name!r}")

    def kind(self, name: str) -> ColumnKind:
        return self.columns[self.index(name)].kind

    def column(self, name: str) -> list[Any]:
        j = self.index(name)
        return [row[j] for row in self.rows]

    def coerce(self, name: str, raw: Any) -> Any:
        """Convert a raw (typically command-line) value to the column's cell type."""
        if raw is MISSING:
            return raw
        if self.kind(name) == "numeric":
            try:
                return float(raw)
            except (TypeError, ValueError):
                raise DatasetError(f"{raw!r} is not a number (column {name!r} is numeric)") from None
        return raw if isinstance(raw, str) else str(raw)

    def project(self, qi: Iterable[str], row_id: int) -> tuple:
        idx = [self.index(c) for c in _ordered(qi)]
        self._check_row(row_id)
        row = self.rows[row_id]
        return tuple(row[j] for j in idx)

    def _check_row(self, row_id: int):
        if not isinstance(row_id, int) or not 0 <= row_id < len(self.rows):
            raise DatasetError(f"row_id {row_id!r} out of range for {len(self.rows)} rows")

    @classmethod
    def from_columns(cls, data: dict[str, Sequence[Any]]) -> "Dataset":
        """Build a dataset from a column mapping, inferring kinds like load_dataset."""
        names = list(data)
        lengths = {len(v) for v in data.values()}
        if len(lengths) > 1:
            raise DatasetError(f"columns have different lengths: {sorted(lengths)}")
        n = lengths.pop() if lengths else 0
        cols = []
        values = []
        for name in names:
            raw = list(data[name])
            numeric = all(
                v is MISSING or (isinstance(v, (int, float)) and not isinstance(v, bool)) for v in raw
            ) and any(v is not MISSING for v in raw)
            if numeric:
                cols.append(Column(name, "numeric"))
                values.append([v if v is MISSING else float(v) for v in raw])
            else:
                cols.append(Column(name, "categorical"))
                values.append(raw)
        rows = tuple(tuple(values[j][i] for j in range(len(names))) for i in range(n))
        return cls(tuple(cols), rows)


def _ordered(qi: Iterable[str]) -> list[str]:
    # Sets have no stable order; sorting keeps projections comparable.
    return sorted(set(qi))


def _parse_number(text: str) -> float | None:
    try:
        x = float(text)
    except ValueError:
        return None
    return x if math.isfinite(x) else None


def load_dataset(source: str | Path | io.TextIOBase) -> Dataset:
    """Read a UTF-8 CSV document with a header row.

    ``source`` may be a path, an open text stream, or the CSV text itself
    (any string containing a newline is treated as text). Empty cells load
    as ``MISSING``. A column is numeric when every non-missing cell parses
    as a finite number.
    """
    if isinstance(source, io.TextIOBase):
        text = source.read()
    elif isinstance(source, str) and "\n" in source:
        text = source
    else:
        text = Path(source).read_text(encoding="utf-8")

    records = [r for r in csv.reader(io.StringIO(text)) if r]
    if not records:
        raise DatasetError("empty document: no header row")
    header, body = records[0], records[1:]
    header = [h.strip() for h in header]
    for i, r in enumerate(body):
        if len(r) != len(header):
            raise DatasetError(f"ragged row {i}: {len(r)} values under {len(header)} headers")
    dupes = sorted(n for n, c in Counter(header).items() if c > 1)
    if dupes:
        raise DatasetError(f"duplicate column names: {', '.join(dupes)}")

    columns = []
    parsed = [list(r) for r in body]
    for j, name in enumerate(header):
        cells = [r[j].strip() for r in body]
        present = [c for c in cells if c != ""]
        numbers = [_parse_number(c) for c in present]
        numeric = bool(present) and all(x is not None for x in numbers)
        columns.append(Column(name, "numeric" if numeric else "categorical"))
        for i, c in enumerate(cells):
            if c == "":
                parsed[i][j] = MISSING
            else:
                parsed[i][j] = float(c) if numeric else c
    return Dataset(tuple(columns), tuple(tuple(r) for r in parsed))


def equivalence_classes(d: Dataset, qi: Iterable[str]) -> Counter:
    """Class key -> class size for the given quasi-identifier set."""
    idx = [d.index(c) for c in _ordered(qi)]
    return Counter(tuple(row[j] for j in idx) for row in d.rows)


def equivalence_class_size(d: Dataset, qi: Iterable[str], row_id: int) -> int:
    return equivalence_classes(d, qi)[d.project(qi, row_id)]


def identification_probability(d: Dataset, qi: Iterable[str], row_id: int) -> float:
    return 1.0 / equivalence_class_size(d, qi, row_id)


@dataclass(frozen=True)
class EquivalenceClass:
    qi_columns: tuple[str, ...]
    key: tuple
    size: int


@dataclass(frozen=True)
class IdentifiabilityEntry:
    row_id: int
    qi_columns: tuple[str, ...]
    class_size: int

    @property
    def probability(self) -> float:
        return 1.0 / self.class_size

    def to_dict(self) -> dict:
        return {
            "row_id": self.row_id,
            "qi_columns": list(self.qi_columns),
            "class_size": self.class_size,
            "probability": self.probability,
        }


@dataclass(frozen=True)
class IdentifiabilityReport:
    threshold: float
    entries: tuple[IdentifiabilityEntry, ...] = field(default_factory=tuple)

    @property
    def flagged(self) -> tuple[IdentifiabilityEntry, ...]:
        return tuple(e for e in self.entries if e.probability > self.threshold)

    def to_dict(self, labels: Sequence[Any] | None = None) -> dict:
        def row(e):
            out = e.to_dict()
            if labels is not None:
                out["label"] = labels[e.row_id]
            out["flagged"] = e.probability > self.threshold
            return out

        return {
            "threshold": self.threshold,
            "entries": [row(e) for e in self.entries],
            "flagged": [row(e) for e in self.flagged],
        }


def identifiability_report(
    d: Dataset, qi_subsets: Sequence[Iterable[str]], threshold: float
) -> IdentifiabilityReport:
    """One entry per (quasi-identifier subset, row); flagged when probability > threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise DatasetError(f"threshold {threshold!r} outside [0, 1]")
    entries = []
    for qi in qi_subsets:
        cols = tuple(_ordered(qi))
        classes = equivalence_classes(d, cols)
        idx = [d.index(c) for c in cols]
        for row_id, row in enumerate(d.rows):
            size = classes[tuple(row[j] for j in idx)]
            entries.append(IdentifiabilityEntry(row_id, cols, size))
    return IdentifiabilityReport(threshold, tuple(entries))


def class_listing(d: Dataset, qi: Iterable[str]) -> list[EquivalenceClass]:
    cols = tuple(_ordered(qi))
    return [EquivalenceClass(cols, k, n) for k, n in equivalence_classes(d, cols).items()]
