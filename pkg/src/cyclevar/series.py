"""Quarterly series ingestion and construction of the model variables.

Raw inputs are plain CSV exports (BEA/FRED style): a header row, one date
column holding either ``<year>Q<q>`` quarterly stamps or ISO month dates,
and one numeric value column. Monthly series are reduced to quarterly by
the arithmetic mean of the three months of each quarter.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import AlignmentError, DomainError, GapError, ParseError, SchemaError
from .quarters import QuarterDate, from_index, from_month, parse_quarter

_ISO_MONTH_RE = re.compile(r"^\s*(\d{4})-(\d{2})(?:-(\d{2}))?\s*$")


@dataclass(frozen=True)
class RawSeries:
    """A gap-free quarterly series.

    Storing only the first quarter plus a contiguous value vector makes the
    no-gaps invariant structural: every constructor that could introduce a
    gap must raise instead.
    """

    id: str
    start: QuarterDate
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError(f"series {self.id!r} must hold a nonempty 1-D vector")
        if not np.all(np.isfinite(values)):
            raise DomainError(f"series {self.id!r} contains non-finite values")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> QuarterDate:
        return self.start + (len(self) - 1)

    @property
    def calendar(self) -> list[QuarterDate]:
        return [self.start + i for i in range(len(self))]

    def window(self, start: QuarterDate, end: QuarterDate) -> "RawSeries":
        if start < self.start or self.end < end:
            raise AlignmentError(
                f"window {start}..{end} outside series {self.id!r} span {self.start}..{self.end}"
            )
        i, j = start - self.start, end - self.start
        return RawSeries(self.id, start, self.values[i : j + 1])


def _parse_date_token(token: str) -> tuple[QuarterDate, bool]:
    """Return (quarter, is_monthly) for a date cell."""
    text = str(token)
    m = _ISO_MONTH_RE.match(text)
    if m is not None:
        return from_month(int(m.group(1)), int(m.group(2))), True
    return parse_quarter(text), False


def _is_missing(cell) -> bool:
    if cell is None:
        return True
    text = str(cell).strip()
    return text in ("", ".", "NA", "NaN", "nan")


def load_series_csv(
    path,
    date_column: str,
    value_column: str,
    series_id: str | None = None,
) -> RawSeries:
    """Load one series from CSV and return it on a gap-free quarterly calendar.

    Monthly inputs are averaged within each quarter; incomplete quarters at
    either edge of the span are dropped, internal missing months raise
    :class:`GapError`. Leading/trailing missing values are trimmed; internal
    ones are load errors.
    """
    try:
        frame = pd.read_csv(path, dtype=str)
    except FileNotFoundError:
        raise
    for column in (date_column, value_column):
        if column not in frame.columns:
            raise SchemaError(
                f"{path}: missing column {column!r} (found {list(frame.columns)})"
            )

    rows: list[tuple[QuarterDate, int, float]] = []  # (quarter, month-or-0, value)
    monthly = False
    for row_number, (raw_date, raw_value) in enumerate(
        zip(frame[date_column], frame[value_column]), start=2
    ):
        if _is_missing(raw_value):
            rows.append((None, row_number, math.nan))
            continue
        try:
            quarter, is_month = _parse_date_token(raw_date)
        except ParseError as exc:
            raise ParseError(f"{path} row {row_number}: {exc}") from exc
        monthly = monthly or is_month
        try:
            value = float(raw_value)
        except ValueError:
            raise ParseError(
                f"{path} row {row_number}: unparsable value {raw_value!r}"
            ) from None
        month = int(_ISO_MONTH_RE.match(str(raw_date)).group(2)) if is_month else 0
        rows.append((quarter, month, value))

    # Trim missing-value rows at the edges; reject them inside the span.
    while rows and rows[0][0] is None:
        rows.pop(0)
    while rows and rows[-1][0] is None:
        rows.pop()
    if not rows:
        raise SchemaError(f"{path}: no usable observations")
    for quarter, row_number, value in rows:
        if quarter is None:
            raise GapError(f"{path} row {row_number}: missing value inside the span")

    name = series_id or str(path)
    if monthly:
        return _monthly_to_quarterly(name, rows, path)
    return _from_quarterly_rows(name, [(q, v) for q, _, v in rows], path)


def _from_quarterly_rows(name, rows, path) -> RawSeries:
    rows = sorted(rows, key=lambda item: item[0].index)
    indices = [q.index for q, _ in rows]
    for a, b in zip(indices, indices[1:]):
        if a == b:
            raise GapError(f"{path}: duplicate quarter {from_index(a)}")
    missing = sorted(set(range(indices[0], indices[-1] + 1)) - set(indices))
    if missing:
        labels = [str(from_index(i)) for i in missing]
        raise GapError(f"{path}: missing quarters {', '.join(labels)}", missing=labels)
    return RawSeries(name, rows[0][0], np.array([v for _, v in rows]))


def _monthly_to_quarterly(name, rows, path) -> RawSeries:
    by_quarter: dict[int, list[float]] = {}
    for quarter, _, value in rows:
        by_quarter.setdefault(quarter.index, []).append(value)
    indices = sorted(by_quarter)
    # Edge quarters may be partial (a series starting mid-quarter); drop them.
    while indices and len(by_quarter[indices[0]]) < 3:
        indices.pop(0)
    while indices and len(by_quarter[indices[-1]]) < 3:
        indices.pop()
    if not indices:
        raise SchemaError(f"{path}: no complete quarter of monthly data")
    missing = sorted(set(range(indices[0], indices[-1] + 1)) - set(indices))
    if missing:
        labels = [str(from_index(i)) for i in missing]
        raise GapError(f"{path}: missing quarters {', '.join(labels)}", missing=labels)
    bad = [i for i in indices if len(by_quarter[i]) != 3]
    if bad:
        labels = [str(from_index(i)) for i in bad]
        raise GapError(
            f"{path}: quarters without exactly three months: {', '.join(labels)}",
            missing=labels,
        )
    values = np.array([sum(by_quarter[i]) / 3.0 for i in indices])
    return RawSeries(name, from_index(indices[0]), values)


def _require_same_calendar(*series: RawSeries) -> None:
    first = series[0]
    for other in series[1:]:
        if other.start != first.start or len(other) != len(first):
            raise AlignmentError(
                f"calendar mismatch: {first.id!r} spans {first.start}..{first.end}, "
                f"{other.id!r} spans {other.start}..{other.end}"
            )


def intersect_series(*series: RawSeries) -> list[RawSeries]:
    """Trim all series to their common span."""
    start = max(s.start for s in series)
    end = min(s.end for s in series)
    if end < start:
        raise AlignmentError("series calendars have an empty intersection")
    return [s.window(start, end) for s in series]


def construct_labor_share(
    compensation: RawSeries,
    net_interest: RawSeries,
    rental_income: RawSeries,
    corporate_profits: RawSeries,
    capital_consumption: RawSeries,
) -> RawSeries:
    """Compensation's share of the sum of the five income components."""
    parts = (compensation, net_interest, rental_income, corporate_profits, capital_consumption)
    _require_same_calendar(*parts)
    denominator = sum(p.values for p in parts[1:]) + compensation.values
    bad = np.flatnonzero(denominator <= 0)
    if bad.size:
        quarter = compensation.start + int(bad[0])
        raise DomainError(f"nonpositive income total at {quarter}")
    return RawSeries("labor_share", compensation.start, compensation.values / denominator)


def construct_employment_rate(unemployment: RawSeries) -> RawSeries:
    """100 minus the unemployment rate."""
    values = unemployment.values
    bad = np.flatnonzero((values < 0) | (values > 100))
    if bad.size:
        quarter = unemployment.start + int(bad[0])
        raise DomainError(f"unemployment rate outside [0, 100] at {quarter}")
    return RawSeries("employment_rate", unemployment.start, 100.0 - values)


def construct_spread(long_rate: RawSeries, short_rate: RawSeries) -> RawSeries:
    """Long yield minus short yield."""
    _require_same_calendar(long_rate, short_rate)
    return RawSeries("spread", long_rate.start, long_rate.values - short_rate.values)


def log_transform(series: RawSeries) -> RawSeries:
    """Natural log, elementwise; requires strictly positive values."""
    bad = np.flatnonzero(series.values <= 0)
    if bad.size:
        quarter = series.start + int(bad[0])
        raise DomainError(f"log of nonpositive value in {series.id!r} at {quarter}")
    return RawSeries(series.id, series.start, np.log(series.values))


def rename(series: RawSeries, new_id: str) -> RawSeries:
    return RawSeries(new_id, series.start, series.values)


@dataclass(frozen=True)
class AlignedPanel:
    """T x k matrix of observations on a shared gap-free quarterly calendar."""

    variables: tuple[str, ...]
    start: QuarterDate
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("panel values must be 2-D")
        if values.shape[1] != len(self.variables):
            raise ValueError(
                f"{values.shape[1]} columns for {len(self.variables)} variable labels"
            )
        if values.shape[0] == 0:
            raise ValueError("panel must have at least one row")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def end(self) -> QuarterDate:
        return self.start + (len(self) - 1)

    @property
    def calendar(self) -> list[QuarterDate]:
        return [self.start + i for i in range(len(self))]

    def index_of(self, date: QuarterDate) -> int:
        offset = date - self.start
        if offset < 0 or offset >= len(self):
            raise AlignmentError(f"{date} outside panel span {self.start}..{self.end}")
        return offset

    def column(self, variable: str) -> np.ndarray:
        try:
            j = self.variables.index(variable)
        except ValueError:
            raise AlignmentError(
                f"unknown variable {variable!r}; panel holds {self.variables}"
            ) from None
        return self.values[:, j]

    def window(self, start: QuarterDate, end: QuarterDate) -> "AlignedPanel":
        i, j = self.index_of(start), self.index_of(end)
        if j < i:
            raise AlignmentError(f"window {start}..{end} is empty")
        return AlignedPanel(self.variables, start, self.values[i : j + 1])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, columns=list(self.variables))
        frame.insert(0, "date", [str(d) for d in self.calendar])
        return frame

    def to_csv(self, path) -> None:
        self.to_frame().to_csv(path, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, path) -> "AlignedPanel":
        frame = pd.read_csv(path)
        if "date" not in frame.columns:
            raise SchemaError(f"{path}: missing 'date' column")
        dates = [parse_quarter(d) for d in frame["date"]]
        for a, b in zip(dates, dates[1:]):
            if b - a != 1:
                raise GapError(f"{path}: calendar gap between {a} and {b}")
        variables = [c for c in frame.columns if c != "date"]
        return cls(tuple(variables), dates[0], frame[variables].to_numpy(dtype=float))


def align_panel(series: list[RawSeries], order: list[str]) -> AlignedPanel:
    """Restrict the series to their common span, columns in the given order."""
    by_id = {s.id: s for s in series}
    missing = [label for label in order if label not in by_id]
    if missing:
        raise AlignmentError(f"no series for labels {missing}; have {sorted(by_id)}")
    chosen = [by_id[label] for label in order]
    trimmed = intersect_series(*chosen)
    values = np.column_stack([s.values for s in trimmed])
    return AlignedPanel(tuple(order), trimmed[0].start, values)
