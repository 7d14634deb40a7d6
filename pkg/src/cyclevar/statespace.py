"""Gaussian state-space filtering, smoothing, and simulation smoothing.

All models here share the random-walk transition x_{t+1} = x_t + w_t,
w_t ~ N(0, Q), with per-period observation maps and noise covariances:

    y_t = Z_t x_t + d_t + v_t,   v_t ~ N(0, H_t).

The first period is initialized at the given prior mean/covariance (no
state innovation is added before the first observation). The recursions
are numba-compiled; covariances are explicitly symmetrized every step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError
from .linalg import CHOLESKY_JITTER, chol_lower, chol_psd, chol_solve_inplace

_LOG_2PI = float(np.log(2.0 * np.pi))


@njit(cache=True)
def _psd_solve(a: np.ndarray, b: np.ndarray) -> None:
    """Solve a X = b in place for symmetric PSD ``a``.

    Cholesky fast path with a jittered retry; exactly singular systems fall
    back to an eigen pseudo-inverse so degenerate (zero-variance) states
    propagate exact means instead of failing.
    """
    n = a.shape[0]
    L = np.empty((n, n))
    if chol_lower(a, L) < 0:
        chol_solve_inplace(L, b)
        return
    trace = 0.0
    for i in range(n):
        trace += a[i, i]
    bumped = a.copy()
    bump = CHOLESKY_JITTER * max(trace / n, 1.0)
    for i in range(n):
        bumped[i, i] += bump
    if chol_lower(bumped, L) < 0:
        chol_solve_inplace(L, b)
        return
    values, vectors = np.linalg.eigh(a)
    cutoff = 1e-14 * max(values[n - 1], 0.0)
    projected = vectors.T @ b
    for j in range(n):
        if values[j] > cutoff:
            for c in range(b.shape[1]):
                projected[j, c] /= values[j]
        else:
            for c in range(b.shape[1]):
                projected[j, c] = 0.0
    result = vectors @ projected
    for i in range(n):
        for c in range(b.shape[1]):
            b[i, c] = result[i, c]


@njit(cache=True)
def _symmetrize(a: np.ndarray) -> None:
    n = a.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            v = 0.5 * (a[i, j] + a[j, i])
            a[i, j] = v
            a[j, i] = v


@njit(cache=True)
def _kalman_core(y, Z, d, H, Q, x0, P0, filt_m, filt_P, pred_m, pred_P):
    """Forward recursion. Returns (failed_period_or_-1, log_likelihood)."""
    T, k, m = Z.shape
    L = np.empty((k, k))
    xp = x0.copy()
    Pp = P0.copy()
    loglik = 0.0
    vcol = np.empty((k, 1))
    for t in range(T):
        pred_m[t] = xp
        pred_P[t] = Pp
        PZt = Pp @ Z[t].T
        S = Z[t] @ PZt + H[t]
        _symmetrize(S)
        if chol_lower(S, L) >= 0:
            return t, 0.0
        v = y[t] - Z[t] @ xp - d[t]
        logdet = 0.0
        for i in range(k):
            logdet += 2.0 * np.log(L[i, i])
        for i in range(k):
            vcol[i, 0] = v[i]
        chol_solve_inplace(L, vcol)
        quad = 0.0
        for i in range(k):
            quad += v[i] * vcol[i, 0]
        loglik += -0.5 * (k * _LOG_2PI + logdet + quad)
        # Gain: K = P Z' S^-1 = B' with B = S^-1 Z P.
        B = PZt.T.copy()
        chol_solve_inplace(L, B)
        xf = xp + B.T @ v
        Pf = Pp - B.T @ PZt.T
        _symmetrize(Pf)
        filt_m[t] = xf
        filt_P[t] = Pf
        xp = xf
        Pp = Pf + Q
    return -1, loglik


@njit(cache=True)
def _smoother_core(filt_m, filt_P, Q, sm_m, sm_P):
    T, m = filt_m.shape
    sm_m[T - 1] = filt_m[T - 1]
    sm_P[T - 1] = filt_P[T - 1]
    for t in range(T - 2, -1, -1):
        Pq = filt_P[t] + Q  # predicted covariance for t+1
        J = filt_P[t].T.copy()
        _psd_solve(Pq, J)  # J' now solves Pq J' = P, so J = P Pq^-1
        Jm = J.T.copy()
        sm_m[t] = filt_m[t] + Jm @ (sm_m[t + 1] - filt_m[t])
        sm_P[t] = filt_P[t] + Jm @ (sm_P[t + 1] - Pq) @ Jm.T
        _symmetrize(sm_P[t])


@njit(cache=True)
def _backward_sample_core(filt_m, filt_P, Q, eps, path):
    T, m = filt_m.shape
    F = np.empty((m, m))
    chol_psd(filt_P[T - 1], F, CHOLESKY_JITTER)
    path[T - 1] = filt_m[T - 1] + F @ eps[T - 1]
    for t in range(T - 2, -1, -1):
        Pq = filt_P[t] + Q
        J = filt_P[t].T.copy()
        _psd_solve(Pq, J)
        Jm = J.T.copy()
        mean = filt_m[t] + Jm @ (path[t + 1] - filt_m[t])
        C = filt_P[t] - Jm @ filt_P[t]
        _symmetrize(C)
        chol_psd(C, F, CHOLESKY_JITTER)
        path[t] = mean + F @ eps[t]


@dataclass
class StateSpaceModel:
    """Random-walk-state model with per-period observation maps.

    obs_matrices: (T, k, m) maps Z_t; obs_covs: (T, k, k) noise H_t;
    state_cov: (m, m) innovation Q; init_mean/init_cov: first-period prior;
    obs_offsets: optional (T, k) intercepts d_t.
    """

    obs_matrices: np.ndarray
    obs_covs: np.ndarray
    state_cov: np.ndarray
    init_mean: np.ndarray
    init_cov: np.ndarray
    obs_offsets: np.ndarray | None = None

    def __post_init__(self):
        self.obs_matrices = np.ascontiguousarray(self.obs_matrices, dtype=float)
        self.obs_covs = np.ascontiguousarray(self.obs_covs, dtype=float)
        self.state_cov = np.ascontiguousarray(self.state_cov, dtype=float)
        self.init_mean = np.ascontiguousarray(self.init_mean, dtype=float)
        self.init_cov = np.ascontiguousarray(self.init_cov, dtype=float)
        if self.obs_matrices.ndim != 3:
            raise ValueError("obs_matrices must have shape (T, k, m)")
        T, k, m = self.obs_matrices.shape
        if self.obs_covs.shape != (T, k, k):
            raise ValueError(f"obs_covs must have shape {(T, k, k)}, got {self.obs_covs.shape}")
        if self.state_cov.shape != (m, m):
            raise ValueError(f"state_cov must have shape {(m, m)}, got {self.state_cov.shape}")
        if self.init_mean.shape != (m,) or self.init_cov.shape != (m, m):
            raise ValueError("init_mean/init_cov dimensions inconsistent with obs_matrices")
        if self.obs_offsets is None:
            self.obs_offsets = np.zeros((T, k))
        else:
            self.obs_offsets = np.ascontiguousarray(self.obs_offsets, dtype=float)
            if self.obs_offsets.shape != (T, k):
                raise ValueError(f"obs_offsets must have shape {(T, k)}")

    @property
    def n_periods(self) -> int:
        return self.obs_matrices.shape[0]

    @property
    def obs_dim(self) -> int:
        return self.obs_matrices.shape[1]

    @property
    def state_dim(self) -> int:
        return self.obs_matrices.shape[2]

    def _check_data(self, y: np.ndarray) -> np.ndarray:
        y = np.ascontiguousarray(y, dtype=float)
        expected = (self.n_periods, self.obs_dim)
        if y.shape != expected:
            raise ValueError(f"data must have shape {expected}, got {y.shape}")
        return y


@dataclass
class FilterResult:
    filtered_means: np.ndarray
    filtered_covs: np.ndarray
    predicted_means: np.ndarray
    predicted_covs: np.ndarray
    log_likelihood: float


def kalman_filter(model: StateSpaceModel, y: np.ndarray) -> FilterResult:
    """Predict/update recursion over the whole sample."""
    y = model._check_data(y)
    T, _, m = model.obs_matrices.shape
    filt_m = np.empty((T, m))
    filt_P = np.empty((T, m, m))
    pred_m = np.empty((T, m))
    pred_P = np.empty((T, m, m))
    failed, loglik = _kalman_core(
        y, model.obs_matrices, model.obs_offsets, model.obs_covs,
        model.state_cov, model.init_mean, model.init_cov,
        filt_m, filt_P, pred_m, pred_P,
    )
    if failed >= 0:
        raise DomainError(f"singular innovation covariance at period {failed}")
    return FilterResult(filt_m, filt_P, pred_m, pred_P, float(loglik))


def kalman_smoother(model: StateSpaceModel, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full-sample smoothed means and covariances."""
    result = kalman_filter(model, y)
    T, m = result.filtered_means.shape
    sm_m = np.empty((T, m))
    sm_P = np.empty((T, m, m))
    _smoother_core(result.filtered_means, result.filtered_covs, model.state_cov, sm_m, sm_P)
    return sm_m, sm_P


def ffbs(model: StateSpaceModel, y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Forward-filter backward-sample: one joint draw of the state path.

    Consumes exactly T * state_dim standard normals from ``rng``.
    """
    result = kalman_filter(model, y)
    T, m = result.filtered_means.shape
    eps = rng.standard_normal((T, m))
    path = np.empty((T, m))
    _backward_sample_core(result.filtered_means, result.filtered_covs, model.state_cov, eps, path)
    return path
