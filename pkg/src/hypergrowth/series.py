"""Time-series containers and the two text parsers.

The canonical interchange format is a two-column CSV::

    year,value
    1,7.013
    1000,13.723

Maddison's "horizontal" tables (one row per region, one column per year)
are read by :func:`parse_maddison_horizontal` after exporting the workbook
sheet to comma- or tab-delimited text.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from decimal import Decimal
from importlib import resources
from typing import Iterable

from .errors import LabelNotFoundError, ParseError, ValidationError

CSV_HEADER = "year,value"


@dataclass(frozen=True)
class Observation:
    year: int
    value: float

    def __post_init__(self):
        if isinstance(self.year, bool) or not isinstance(self.year, int):
            raise ValidationError(f"year must be an integer, got {self.year!r}")
        if not self.value > 0 or not math.isfinite(self.value):
            raise ValidationError(
                f"value at year {self.year} must be positive and finite, got {self.value!r}"
            )


@dataclass(frozen=True)
class YearRange:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValidationError(f"year range start {self.start} > end {self.end}")

    def __contains__(self, year) -> bool:
        return self.start <= year <= self.end

    @classmethod
    def parse(cls, text: str) -> "YearRange":
        """Parse ``START:END`` (inclusive integer years)."""
        parts = text.split(":")
        if len(parts) != 2:
            raise ParseError(f"expected START:END, got {text!r}")
        try:
            start, end = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"window bounds must be integers, got {text!r}") from None
        return cls(start, end)

    def __str__(self):
        return f"{self.start}:{self.end}"


@dataclass(frozen=True)
class TimeSeries:
    """Observations ordered by strictly increasing year.

    An empty or one-point series is a valid value (windowing can produce
    one); fitting routines reject it.
    """

    name: str
    unit: str
    observations: tuple[Observation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        obs = tuple(self.observations)
        object.__setattr__(self, "observations", obs)
        for prev, cur in zip(obs, obs[1:]):
            if cur.year <= prev.year:
                raise ValidationError(
                    f"years must be strictly increasing: {prev.year} then {cur.year}"
                )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]], name="", unit="") -> "TimeSeries":
        return cls(name, unit, tuple(Observation(int(y), float(v)) for y, v in pairs))

    def __len__(self):
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    @property
    def years(self) -> list[int]:
        return [o.year for o in self.observations]

    @property
    def values(self) -> list[float]:
        return [o.value for o in self.observations]

    @property
    def span(self) -> YearRange | None:
        if not self.observations:
            return None
        return YearRange(self.observations[0].year, self.observations[-1].year)

    def scaled(self, factor: float) -> "TimeSeries":
        return replace(
            self,
            observations=tuple(Observation(o.year, o.value * factor) for o in self.observations),
        )

    def shifted(self, delta: int) -> "TimeSeries":
        return replace(
            self,
            observations=tuple(Observation(o.year + delta, o.value) for o in self.observations),
        )


def _check_sorted_unique(rows: list[tuple[int, float, int]]) -> list[tuple[int, float, int]]:
    rows = sorted(rows, key=lambda r: r[0])
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] == prev[0]:
            raise ValidationError(f"duplicate year {cur[0]} (lines {prev[2]} and {cur[2]})")
    return rows


def parse_series_csv(text: str, name: str = "", unit: str = "") -> TimeSeries:
    """Parse the canonical ``year,value`` CSV. Rows may be in any order."""
    lines = text.lstrip("﻿").splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        got = lines[0].strip() if lines else ""
        raise ParseError(f"header must be exactly {CSV_HEADER!r}, got {got!r}", line=1)

    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise ParseError(f"expected 2 columns, got {len(fields)}", line=lineno)
        try:
            year = int(fields[0])
        except ValueError:
            raise ParseError(f"year {fields[0]!r} is not an integer", line=lineno) from None
        try:
            value = float(fields[1])
        except ValueError:
            raise ParseError(f"value {fields[1]!r} is not numeric", line=lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"value {fields[1]!r} is not finite", line=lineno)
        if value <= 0:
            raise ValidationError(f"non-positive value {value!r} at year {year} (line {lineno})")
        rows.append((year, value, lineno))

    if len(rows) < 2:
        raise ValidationError(f"need at least 2 observations, got {len(rows)}")
    rows = _check_sorted_unique(rows)
    return TimeSeries(name, unit, tuple(Observation(y, v) for y, v, _ in rows))


def _format_value(value: float) -> str:
    # positional notation of the shortest round-tripping repr
    text = format(Decimal(repr(value)), "f")
    return text if "." in text else text + ".0"


def to_csv(series: TimeSeries) -> str:
    lines = [CSV_HEADER]
    lines.extend(f"{o.year},{_format_value(o.value)}" for o in series)
    return "\n".join(lines) + "\n"


def _parse_number(cell: str) -> float:
    return float(cell.replace(",", "").replace(" ", "").replace(" ", ""))


def parse_maddison_horizontal(
    text: str, row_label: str, delimiter: str = ",", unit: str = ""
) -> TimeSeries:
    """Extract one labelled row of a Maddison horizontal table.

    The first row holds the years (its first cell is ignored); the first
    column holds the row labels. Blank cells mean "no observation".
    Thousands separators inside cells are stripped.
    """
    if delimiter not in (",", "\t"):
        raise ValueError(f"delimiter must be ',' or tab, got {delimiter!r}")
    table = list(csv.reader(io.StringIO(text.lstrip("﻿")), delimiter=delimiter))
    if not table:
        raise ParseError("empty table", line=1)

    header = table[0]
    years: dict[int, int] = {}
    for col, cell in enumerate(header[1:], start=2):
        cell = cell.strip()
        if not cell:
            continue
        try:
            year = float(_parse_number(cell))
        except ValueError:
            raise ParseError(f"header cell {cell!r} is not a year", line=1, column=col) from None
        if not year.is_integer():
            raise ParseError(f"header cell {cell!r} is not an integer year", line=1, column=col)
        years[col] = int(year)

    labels = []
    for rowno, row in enumerate(table[1:], start=2):
        if not row or not row[0].strip():
            continue
        label = row[0].strip()
        labels.append(label)
        if label != row_label.strip():
            continue
        rows = []
        for col, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if not cell:
                continue
            if col not in years:
                raise ParseError(f"value {cell!r} under a blank year header", line=rowno, column=col)
            try:
                value = _parse_number(cell)
            except ValueError:
                raise ParseError(f"cell {cell!r} is not numeric", line=rowno, column=col) from None
            if not math.isfinite(value):
                raise ParseError(f"cell {cell!r} is not finite", line=rowno, column=col)
            if value <= 0:
                raise ValidationError(f"non-positive value {value!r} at year {years[col]}")
            rows.append((years[col], value, rowno))
        rows = _check_sorted_unique(rows)
        return TimeSeries(label, unit, tuple(Observation(y, v) for y, v, _ in rows))

    raise LabelNotFoundError(row_label, labels)


def window(series: TimeSeries, span: YearRange) -> TimeSeries:
    """Observations with ``span.start <= year <= span.end``; may be empty."""
    kept = tuple(o for o in series.observations if o.year in span)
    return replace(series, observations=kept)


BUNDLED_AFRICA = "africa_gdp.csv"
AFRICA_UNIT = "billion 1990 International Geary-Khamis dollars"


def load_africa() -> TimeSeries:
    """The bundled Maddison (2010) Africa GDP fixture."""
    text = resources.files("hypergrowth.data").joinpath(BUNDLED_AFRICA).read_text("utf-8")
    return parse_series_csv(text, name="Africa", unit=AFRICA_UNIT)
