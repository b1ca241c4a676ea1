"""CSV ingestion into a typed, immutable columnar table."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateColumnError,
    EmptyAfterFilteringError,
    EmptyCandidateSetError,
    RaggedRowsError,
    TypeOverrideError,
    UnknownColumnError,
)

MISSING_TOKENS = frozenset({"", "NA"})


class Kind(enum.Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class Column:
    """One named column.

    Numeric columns hold float64 values. Categorical columns hold integer
    level codes in ``[0, len(levels))`` with the level labels in ``levels``.
    """

    name: str
    kind: Kind
    values: np.ndarray
    levels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("column names must be non-empty")
        values = np.array(self.values, dtype=float if self.kind is Kind.NUMERIC else np.int64)
        if values.ndim != 1:
            raise ValueError(f"column {self.name!r} must be one-dimensional")
        if self.kind is Kind.NUMERIC:
            if not np.all(np.isfinite(values)):
                raise ValueError(f"column {self.name!r} has non-finite values")
        else:
            if self.levels is None:
                raise ValueError(f"categorical column {self.name!r} needs levels")
            if values.size and (values.min() < 0 or values.max() >= len(self.levels)):
                raise ValueError(f"column {self.name!r} has codes outside [0, {len(self.levels)})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def arity(self) -> int | None:
        return len(self.levels) if self.levels is not None else None

    @property
    def is_numeric(self) -> bool:
        return self.kind is Kind.NUMERIC

    def take(self, rows: np.ndarray) -> "Column":
        return Column(self.name, self.kind, self.values[rows], self.levels)

    @classmethod
    def categorical(cls, name: str, labels: Sequence[str]) -> "Column":
        levels = tuple(sorted(set(labels)))
        index = {lvl: i for i, lvl in enumerate(levels)}
        return cls(name, Kind.CATEGORICAL, np.array([index[v] for v in labels], dtype=np.int64), levels)


@dataclass(frozen=True)
class LoadSummary:
    path: str
    rows_read: int
    rows_dropped: int
    kinds: dict[str, str]
    constant_columns: tuple[str, ...]

    def lines(self) -> list[str]:
        out = [f"{self.path}: {self.rows_read - self.rows_dropped} of {self.rows_read} rows kept"]
        if self.rows_dropped:
            out.append(f"{self.rows_dropped} row(s) dropped for missing cells")
        for name in self.constant_columns:
            out.append(f"column {name!r} has a single distinct value (zero entropy)")
        return out


@dataclass(frozen=True)
class DataTable:
    columns: tuple[Column, ...]
    summary: LoadSummary | None = field(default=None, compare=False)

    def __post_init__(self):
        cols = tuple(self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise ValueError("a table needs at least one column")
        seen = set()
        for col in cols:
            if col.name in seen:
                raise DuplicateColumnError(col.name)
            seen.add(col.name)
        lengths = {len(c.values) for c in cols}
        if len(lengths) != 1:
            raise ValueError(f"columns have differing lengths {sorted(lengths)}")
        if self.n_rows < 2:
            raise EmptyAfterFilteringError(self.n_rows)

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __getitem__(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise UnknownColumnError(name)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def take(self, rows: Iterable[int]) -> "DataTable":
        rows = np.asarray(rows, dtype=np.int64)
        return DataTable(tuple(c.take(rows) for c in self.columns))

    @classmethod
    def from_columns(cls, data: Mapping[str, Sequence]) -> "DataTable":
        """Build a table from plain sequences, inferring kinds like :func:`load_csv`."""
        cols = []
        for name, values in data.items():
            arr = np.asarray(values)
            if arr.dtype.kind in "iuf":
                cols.append(Column(name, Kind.NUMERIC, arr.astype(float)))
            else:
                cols.append(Column.categorical(name, [str(v) for v in values]))
        return cls(tuple(cols))


@dataclass(frozen=True)
class ImportancePartition:
    important: tuple[str, ...]
    candidates: tuple[str, ...]

    def __post_init__(self):
        if not self.important:
            raise ValueError("the importance set must not be empty")
        if not self.candidates:
            raise EmptyCandidateSetError()
        overlap = set(self.important) & set(self.candidates)
        if overlap:
            raise ValueError(f"importance and candidate sets overlap on {sorted(overlap)}")


def _parse_float(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _is_missing(text: str) -> bool:
    text = text.strip()
    if text in MISSING_TOKENS:
        return True
    # nan/inf parse as floats but cannot live in a numeric column
    return text.lower() in {"nan", "inf", "-inf", "+inf", "infinity", "-infinity"}


def load_csv(path, type_hints: Mapping[str, str | Kind] | None = None) -> DataTable:
    """Read a header-first CSV file into a :class:`DataTable`.

    A column is numeric when every non-missing cell parses as a finite real,
    categorical otherwise; ``type_hints`` maps column names to ``"numeric"``
    or ``"categorical"`` to override that. Rows with any missing cell (empty
    or ``NA``) are dropped before typing.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyAfterFilteringError(0) from None
        for name in header:
            if not name:
                raise TypeOverrideError("header contains an empty column name")
        seen = set()
        for name in header:
            if name in seen:
                raise DuplicateColumnError(name)
            seen.add(name)
        body = []
        for row in reader:
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise RaggedRowsError(reader.line_num, len(header), len(row))
            body.append([cell.strip() for cell in row])

    complete = [row for row in body if not any(_is_missing(c) for c in row)]
    if len(complete) < 2:
        raise EmptyAfterFilteringError(len(complete))

    hints = {}
    for name, kind in (type_hints or {}).items():
        if name not in header:
            raise UnknownColumnError(name)
        hints[name] = Kind(kind) if not isinstance(kind, Kind) else kind

    columns = []
    for j, name in enumerate(header):
        cells = [row[j] for row in complete]
        parsed = [_parse_float(c) for c in cells]
        numeric_ok = all(v is not None for v in parsed)
        kind = hints.get(name, Kind.NUMERIC if numeric_ok else Kind.CATEGORICAL)
        if kind is Kind.NUMERIC:
            if not numeric_ok:
                bad = next(c for c, v in zip(cells, parsed) if v is None)
                raise TypeOverrideError(f"column {name!r} forced numeric but holds {bad!r}")
            columns.append(Column(name, Kind.NUMERIC, np.array(parsed, dtype=float)))
        else:
            columns.append(Column.categorical(name, cells))

    constant = tuple(c.name for c in columns if np.unique(c.values).size == 1)
    summary = LoadSummary(
        path=str(path),
        rows_read=len(body),
        rows_dropped=len(body) - len(complete),
        kinds={c.name: c.kind.value for c in columns},
        constant_columns=constant,
    )
    return DataTable(tuple(columns), summary=summary)


def partition(table: DataTable, important: Sequence[str]) -> ImportancePartition:
    """Split the table's columns into the importance set and the candidates.

    Both sets keep the table's column order.
    """
    if isinstance(important, str):
        important = [important]
    for name in important:
        if name not in table:
            raise UnknownColumnError(name)
    chosen = set(important)
    imp = tuple(n for n in table.names if n in chosen)
    cand = tuple(n for n in table.names if n not in chosen)
    if not cand:
        raise EmptyCandidateSetError()
    return ImportancePartition(imp, cand)


def bundled_path(name: str) -> Path:
    """Path of a bundled fixture: ``"pima"`` or ``"longley"``."""
    ref = resources.files("mirank") / "data" / f"{name}.csv"
    return Path(str(ref))


def load_bundled(name: str) -> DataTable:
    return load_csv(bundled_path(name))
