"""Quarterly calendar type and arithmetic.

Dates are written ``<year>Q<q>`` (e.g. ``1953Q2``). Arithmetic works on a
flat quarter index, so adding or subtracting any integer number of quarters
is total and associative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

from .errors import ParseError

_QUARTER_RE = re.compile(r"^\s*(\d{1,6})Q(\d)\s*$")


@total_ordering
@dataclass(frozen=True)
class QuarterDate:
    year: int
    quarter: int

    def __post_init__(self):
        if self.quarter not in (1, 2, 3, 4):
            raise ParseError(f"quarter must be in 1..4, got {self.quarter}")

    @property
    def index(self) -> int:
        """Flat count of quarters since 0Q1."""
        return self.year * 4 + (self.quarter - 1)

    def __add__(self, quarters: int) -> "QuarterDate":
        return from_index(self.index + int(quarters))

    def __sub__(self, other):
        if isinstance(other, QuarterDate):
            return self.index - other.index
        return from_index(self.index - int(other))

    def __lt__(self, other: "QuarterDate") -> bool:
        return self.index < other.index

    def __str__(self) -> str:
        return f"{self.year}Q{self.quarter}"


def from_index(index: int) -> QuarterDate:
    """Inverse of :attr:`QuarterDate.index`."""
    year, q = divmod(index, 4)
    return QuarterDate(year, q + 1)


def parse_quarter(text: str) -> QuarterDate:
    """Parse ``<year>Q<q>`` into a :class:`QuarterDate`.

    Raises :class:`ParseError` naming the offending token on malformed input
    or a quarter digit outside 1..4.
    """
    match = _QUARTER_RE.match(str(text))
    if match is None:
        raise ParseError(f"not a quarterly date: {text!r}")
    year, q = int(match.group(1)), int(match.group(2))
    if q not in (1, 2, 3, 4):
        raise ParseError(f"quarter out of range in {text!r}")
    return QuarterDate(year, q)


def from_month(year: int, month: int) -> QuarterDate:
    if not 1 <= month <= 12:
        raise ParseError(f"month out of range: {month}")
    return QuarterDate(year, (month - 1) // 3 + 1)


def quarter_range(start: QuarterDate, end: QuarterDate) -> list[QuarterDate]:
    """Inclusive, gap-free run of quarters from ``start`` to ``end``."""
    if end < start:
        raise ValueError(f"range end {end} precedes start {start}")
    return [from_index(i) for i in range(start.index, end.index + 1)]
