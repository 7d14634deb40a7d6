"""Exception types shared across the data, numeric, and sampler layers."""

from __future__ import annotations


class CyclevarError(Exception):
    """Base class for all package-specific errors."""


class ParseError(CyclevarError, ValueError):
    """A token (date, number) could not be parsed."""


class SchemaError(CyclevarError):
    """An input file is missing a required column or header."""


class GapError(CyclevarError):
    """A calendar has internal gaps.

    ``missing`` lists the absent quarters (or months) as strings.
    """

    def __init__(self, message: str, missing: list[str] | None = None):
        super().__init__(message)
        self.missing = missing or []


class AlignmentError(CyclevarError):
    """Series calendars do not match or have an empty intersection."""


class DomainError(CyclevarError, ValueError):
    """A value lies outside the mathematical domain of an operation."""


class WindowError(CyclevarError):
    """A cycle window is out of range or has too few observations."""


class SingularityError(CyclevarError):
    """A regressor matrix is rank deficient."""


class FactorizationError(CyclevarError):
    """Cholesky factorization failed.

    ``pivot`` is the zero-based index of the first non-positive pivot.
    """

    def __init__(self, message: str, pivot: int):
        super().__init__(message)
        self.pivot = pivot


class SamplerError(CyclevarError):
    """The Gibbs sampler aborted.

    ``sweep`` and ``block`` identify where the failure occurred.
    """

    def __init__(self, message: str, sweep: int | None = None, block: str | None = None):
        super().__init__(message)
        self.sweep = sweep
        self.block = block


class StoreError(CyclevarError):
    """A draw archive is empty, malformed, or inconsistent."""
