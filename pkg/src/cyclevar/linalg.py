"""Dense linear-algebra and distribution-sampling primitives.

The Cholesky routine is hand-rolled (and numba-compiled) rather than
delegated to LAPACK so that factorizations are bit-identical across
platforms and the failing pivot is available for error reporting. The
same kernel backs the state-space recursions.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import DomainError, FactorizationError

# Relative diagonal jitter used on a failed factorization before giving up;
# guards against accumulation-induced near-singularity in long Gibbs runs.
CHOLESKY_JITTER = 1e-10


@njit(cache=True)
def chol_lower(a: np.ndarray, out: np.ndarray) -> int:
    """Lower Cholesky factor of ``a`` into ``out``.

    Returns -1 on success, else the index of the first non-positive pivot.
    """
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            out[i, j] = 0.0
    for j in range(n):
        d = a[j, j]
        for k in range(j):
            d -= out[j, k] * out[j, k]
        if d <= 0.0:
            return j
        d = np.sqrt(d)
        out[j, j] = d
        for i in range(j + 1, n):
            s = a[i, j]
            for k in range(j):
                s -= out[i, k] * out[j, k]
            out[i, j] = s / d
    return -1


@njit(cache=True)
def chol_solve_inplace(L: np.ndarray, b: np.ndarray) -> None:
    """Solve (L L') x = b for each column of ``b``, overwriting ``b``."""
    n = L.shape[0]
    m = b.shape[1]
    for c in range(m):
        for i in range(n):
            s = b[i, c]
            for j in range(i):
                s -= L[i, j] * b[j, c]
            b[i, c] = s / L[i, i]
        for i in range(n - 1, -1, -1):
            s = b[i, c]
            for j in range(i + 1, n):
                s -= L[j, i] * b[j, c]
            b[i, c] = s / L[i, i]


@njit(cache=True)
def chol_psd(a: np.ndarray, out: np.ndarray, jitter: float) -> int:
    """Factor a PSD matrix, tolerating zero pivots.

    Tries a strict factorization, then one jittered retry, then falls back
    to an eigendecomposition with negative eigenvalues clipped to zero (so
    exactly singular inputs yield a factor with zero columns). Returns the
    number of the path taken (0 strict, 1 jittered, 2 eigen).
    """
    if chol_lower(a, out) < 0:
        return 0
    n = a.shape[0]
    trace = 0.0
    for i in range(n):
        trace += a[i, i]
    bumped = a.copy()
    bump = jitter * max(trace / n, 1.0)
    for i in range(n):
        bumped[i, i] += bump
    if chol_lower(bumped, out) < 0:
        return 1
    values, vectors = np.linalg.eigh(a)
    for j in range(n):
        scale = np.sqrt(max(values[j], 0.0))
        for i in range(n):
            out[i, j] = vectors[i, j] * scale
    return 2


def _check_square(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {matrix.shape}")
    return matrix


def cholesky(matrix: np.ndarray, symmetry_tol: float = 1e-10) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    A failed factorization is retried once with a relative diagonal jitter;
    if it still fails, :class:`FactorizationError` reports the pivot.
    """
    matrix = _check_square(matrix, "matrix")
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > symmetry_tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    out = np.empty_like(matrix)
    pivot = chol_lower(matrix, out)
    if pivot < 0:
        return out
    n = matrix.shape[0]
    bumped = matrix + np.eye(n) * (CHOLESKY_JITTER * max(np.trace(matrix) / n, 1.0))
    pivot = chol_lower(bumped, out)
    if pivot < 0:
        return out
    raise FactorizationError(f"matrix not positive definite at pivot {pivot}", pivot=pivot)


def psd_factor(matrix: np.ndarray) -> np.ndarray:
    """Factor F with F F' = matrix for any symmetric PSD input."""
    matrix = _check_square(matrix, "matrix")
    out = np.empty_like(matrix)
    chol_psd(matrix, out, CHOLESKY_JITTER)
    return out


def sample_mvn(mean: np.ndarray, cov: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One multivariate-normal draw; semidefinite covariances are allowed.

    Always consumes exactly ``len(mean)`` standard normals so that stream
    positions do not depend on degeneracy of the covariance.
    """
    mean = np.asarray(mean, dtype=float)
    cov = _check_square(cov, "cov")
    if cov.shape[0] != mean.size:
        raise ValueError(f"mean has length {mean.size} but cov is {cov.shape}")
    z = rng.standard_normal(mean.size)
    if not np.any(cov):
        return mean.copy()
    return mean + psd_factor(cov) @ z


def sample_inverse_wishart(
    scale: np.ndarray, dof: float, rng: np.random.Generator
) -> np.ndarray:
    """Inverse-Wishart draw via the Bartlett decomposition.

    Requires ``dof > dim - 1``; the mean is scale / (dof - dim - 1) when it
    exists. A one-dimensional scale reduces to an inverse gamma.
    """
    scale = _check_square(scale, "scale")
    p = scale.shape[0]
    if dof <= p - 1:
        raise DomainError(f"inverse-Wishart needs dof > dim - 1, got {dof} for dim {p}")
    if p == 1:
        return np.array([[float(scale[0, 0]) / rng.chisquare(dof)]])
    # Draw X ~ Wishart(dof, scale^-1); the inverse has the target law.
    inverse_scale = np.linalg.inv(scale)
    inverse_scale = 0.5 * (inverse_scale + inverse_scale.T)
    L = psd_factor(inverse_scale)
    bartlett = np.zeros((p, p))
    for i in range(p):
        bartlett[i, i] = np.sqrt(rng.chisquare(dof - i))
        for j in range(i):
            bartlett[i, j] = rng.standard_normal()
    root = L @ bartlett
    wishart = root @ root.T
    draw = np.linalg.inv(wishart)
    return 0.5 * (draw + draw.T)


def companion_form(coefficients: np.ndarray, k: int, lags: int) -> np.ndarray:
    """Companion matrix of a VAR coefficient vector.

    ``coefficients`` stacks the k equations one after another, each holding
    its k*lags coefficients ordered variable-fastest within each lag. The
    top k rows of the result are that coefficient matrix; identity blocks
    shift the remaining lags down.
    """
    coefficients = np.asarray(coefficients, dtype=float).ravel()
    m = k * lags
    if coefficients.size != k * m:
        raise ValueError(f"expected {k * m} coefficients for k={k}, lags={lags}, got {coefficients.size}")
    companion = np.zeros((m, m))
    companion[:k, :] = coefficients.reshape(k, m)
    if lags > 1:
        companion[k:, : m - k] = np.eye(m - k)
    return companion


def spectral_radius(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))
