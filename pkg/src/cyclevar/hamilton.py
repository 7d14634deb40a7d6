"""Regression-based trend/cycle decomposition.

The cyclical component of a series is the residual from regressing the
value ``lookahead`` quarters ahead on a constant and the ``lags`` most
recent values. Unlike two-sided smoothers this uses no future information
at the regressor end and avoids end-of-sample bias.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import SingularityError, WindowError
from .series import AlignedPanel


@dataclass(frozen=True)
class HamiltonSpec:
    lookahead: int = 8
    lags: int = 4

    def __post_init__(self):
        if self.lookahead < 1 or self.lags < 1:
            raise ValueError("lookahead and lags must both be >= 1")

    @property
    def trim(self) -> int:
        """Observations lost at the start of the sample."""
        return self.lookahead + self.lags - 1


def ols(y: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares fit returning (coefficients, residuals).

    Requires more rows than columns and full column rank.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or y.ndim != 1:
        raise ValueError("ols expects a vector y and a matrix X")
    if X.shape[0] != y.size:
        raise ValueError(f"X has {X.shape[0]} rows for {y.size} observations")
    if X.shape[0] <= X.shape[1]:
        raise ValueError("need more observations than regressors")
    coefficients, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise SingularityError(
            f"regressor matrix is rank deficient (rank {rank} < {X.shape[1]} columns)"
        )
    return coefficients, y - X @ coefficients


def hamilton_filter(values: np.ndarray, spec: HamiltonSpec = HamiltonSpec()) -> np.ndarray:
    """Cyclical component of a series.

    Output length equals ``len(values) - (lookahead + lags - 1)`` and the
    first output observation is dated ``lookahead + lags - 1`` quarters
    after the input start.
    """
    values = np.asarray(values, dtype=float)
    h, p = spec.lookahead, spec.lags
    n = values.size
    if n < h + p + 10:
        raise WindowError(f"series of length {n} too short for lookahead {h}, lags {p}")
    n_obs = n - spec.trim
    X = np.empty((n_obs, p + 1))
    X[:, 0] = 1.0
    for lag in range(p):
        # Regressor column for y_{t-lag}, t running over the usable rows.
        X[:, lag + 1] = values[p - 1 - lag : p - 1 - lag + n_obs]
    y = values[p - 1 + h :]
    _, residuals = ols(y, X)
    return residuals


def hamilton_filter_panel(
    panel: AlignedPanel,
    spec: HamiltonSpec = HamiltonSpec(),
    scale: Mapping[str, float] | None = None,
) -> AlignedPanel:
    """Apply the filter column-by-column, trimming the shared calendar.

    ``scale`` optionally rescales named columns of the output, e.g. by 100
    so that cyclical log deviations read as percent.
    """
    columns = [hamilton_filter(panel.values[:, j], spec) for j in range(panel.k)]
    values = np.column_stack(columns)
    if scale:
        for name, factor in scale.items():
            values[:, panel.variables.index(name)] *= float(factor)
    return AlignedPanel(panel.variables, panel.start + spec.trim, values)
