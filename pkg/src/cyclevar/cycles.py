"""Descriptive statistics over peak-to-peak business-cycle windows.

Windows run between consecutive dated peaks, with a configurable extension
past the second peak so that a cycle completing after the official dating
is still captured. Volatilities use the sample standard deviation
(denominator n-1); co-movement uses Pearson correlation within windows and
the sample cross-correlation function across leads and lags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import WindowError
from .quarters import QuarterDate
from .series import AlignedPanel


@dataclass(frozen=True)
class CycleWindow:
    start_peak: QuarterDate
    end_peak: QuarterDate
    extension: int = 4

    def __post_init__(self):
        if not self.start_peak < self.end_peak:
            raise WindowError(f"window start {self.start_peak} not before end {self.end_peak}")
        if self.extension < 0:
            raise WindowError("extension must be nonnegative")

    @property
    def end(self) -> QuarterDate:
        return self.end_peak + self.extension

    def clipped_end(self, calendar_end: QuarterDate) -> QuarterDate:
        return min(self.end, calendar_end)

    def label(self) -> str:
        return f"{self.start_peak}-{self.end_peak}"


def segment_cycles(
    calendar: list[QuarterDate],
    peaks: list[QuarterDate],
    extension: int = 4,
) -> list[CycleWindow]:
    """Turn consecutive peak pairs into windows, extensions clipped to the calendar."""
    if len(peaks) < 2:
        raise WindowError("need at least two peaks to form a window")
    for a, b in zip(peaks, peaks[1:]):
        if not a < b:
            raise WindowError(f"peaks not strictly increasing at {a}, {b}")
    first, last = calendar[0], calendar[-1]
    outside = [p for p in peaks if p < first or last < p]
    if outside:
        raise WindowError(f"peaks outside calendar {first}..{last}: {[str(p) for p in outside]}")
    return [CycleWindow(a, b, extension) for a, b in zip(peaks, peaks[1:])]


def _window_panel(panel: AlignedPanel, window: CycleWindow) -> AlignedPanel:
    sub = panel.window(window.start_peak, window.clipped_end(panel.end))
    if len(sub) < 3:
        raise WindowError(f"window {window.label()} has fewer than 3 observations")
    return sub


def per_cycle_stats(
    panel: AlignedPanel, windows: list[CycleWindow]
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Per-window standard deviations and pairwise Pearson correlations.

    Returns (stds, correlations): the first has columns
    ``window_start, window_end, variable, std``; the second
    ``window_start, window_end, x, y, r`` over all variable pairs.
    """
    std_rows, corr_rows = [], []
    for window in windows:
        sub = _window_panel(panel, window)
        tag = {"window_start": str(window.start_peak), "window_end": str(window.clipped_end(panel.end))}
        for j, name in enumerate(sub.variables):
            std_rows.append({**tag, "variable": name, "std": float(np.std(sub.values[:, j], ddof=1))})
        for i, x in enumerate(sub.variables):
            for j in range(i + 1, sub.k):
                r = pearson(sub.values[:, i], sub.values[:, j])
                corr_rows.append({**tag, "x": x, "y": sub.variables[j], "r": r})
    return pd.DataFrame(std_rows), pd.DataFrame(corr_rows)


def era_stats(
    panel: AlignedPanel, eras: dict[str, tuple[QuarterDate, QuarterDate]]
) -> pd.DataFrame:
    """Standard deviations over named fixed date ranges."""
    rows = []
    for era, (start, end) in eras.items():
        sub = panel.window(start, end)
        if len(sub) < 3:
            raise WindowError(f"era {era!r} has fewer than 3 observations")
        for j, name in enumerate(sub.variables):
            rows.append(
                {
                    "era": era,
                    "start": str(start),
                    "end": str(end),
                    "variable": name,
                    "std": float(np.std(sub.values[:, j], ddof=1)),
                }
            )
    return pd.DataFrame(rows)


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc @ xc) * (yc @ yc))
    if denom == 0:
        raise WindowError("Pearson correlation undefined for a constant series")
    return float(xc @ yc / denom)


@dataclass(frozen=True)
class CrossCorrelation:
    """Sample cross-correlation of two series over symmetric leads/lags.

    ``rho[i]`` corresponds to ``lags[i]``; lag h pairs x_{t+h} with y_t.
    Lead/lag sign conventions differ across texts, so the pairing is fixed
    here once and tested for the identity rho_xy(h) = rho_yx(-h).
    """

    lags: np.ndarray
    rho: np.ndarray
    n: int

    @property
    def threshold(self) -> float:
        """Approximate two-sided significance bound, 2/sqrt(n)."""
        return 2.0 / np.sqrt(self.n)

    def at(self, lag: int) -> float:
        i = int(lag) + (len(self.lags) - 1) // 2
        if not 0 <= i < len(self.lags):
            raise WindowError(f"lag {lag} outside computed range")
        return float(self.rho[i])

    def argmax_lag(self) -> int:
        return int(self.lags[int(np.argmax(self.rho))])


def cross_correlation(x: np.ndarray, y: np.ndarray, max_lag: int) -> CrossCorrelation:
    """Cross-correlation rho_xy(h) for h in [-max_lag, max_lag].

    rho_xy(h) = gamma_xy(h) / sqrt(gamma_x(0) * gamma_y(0)) with
    gamma_xy(h) the sample cross-covariance pairing x_{t+h} with y_t,
    using full-sample means and divisor n.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise WindowError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    if max_lag >= n - 2:
        raise WindowError(f"max_lag {max_lag} too large for {n} observations")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc @ xc / n) * (yc @ yc / n))
    lags = np.arange(-max_lag, max_lag + 1)
    rho = np.empty(lags.size)
    for i, h in enumerate(lags):
        if h >= 0:
            cov = xc[h:] @ yc[: n - h] / n
        else:
            cov = xc[: n + h] @ yc[-h:] / n
        rho[i] = cov / denom
    return CrossCorrelation(lags, rho, n)


@dataclass(frozen=True)
class PhaseTrajectory:
    """Time-ordered (x, y) points tracing one window, with its Pearson r."""

    window: CycleWindow
    x_var: str
    y_var: str
    dates: tuple[QuarterDate, ...]
    x: np.ndarray
    y: np.ndarray
    r: float

    def to_frame(self) -> pd.DataFrame:
        n = len(self.dates)
        return pd.DataFrame(
            {
                "date": [str(d) for d in self.dates],
                "x": self.x,
                "y": self.y,
                "is_first": [i == 0 for i in range(n)],
                "is_last": [i == n - 1 for i in range(n)],
            }
        )


def phase_trajectory(
    panel: AlignedPanel, window: CycleWindow, x_var: str, y_var: str
) -> PhaseTrajectory:
    sub = _window_panel(panel, window)
    x, y = sub.column(x_var), sub.column(y_var)
    return PhaseTrajectory(
        window=window,
        x_var=x_var,
        y_var=y_var,
        dates=tuple(sub.calendar),
        x=x.copy(),
        y=y.copy(),
        r=pearson(x, y),
    )
