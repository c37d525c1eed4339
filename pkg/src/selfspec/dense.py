"""Dense reference eigensolver for small symmetric-definite pencils.

The pencil ``K x = λ M x`` with ``K ≻ 0`` is reduced through the Cholesky factor ``K = L Lᵀ`` to the symmetric
standard problem ``C = L⁻¹ M L⁻ᵀ``, whose eigenvalues ``μ`` are the reciprocals of the pencil eigenvalues. ``C`` is
diagonalized by the cyclic Jacobi method, which keeps small eigenvalues to high relative accuracy.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

logger = logging.getLogger(__name__)

_MAX_SWEEPS = 60
_EPS = float(np.finfo(np.float64).eps)
_TINY = float(np.finfo(np.float64).tiny)


def jacobi_eigenvalues(a: NDArray[np.float64], *, tol: float | None = None) -> NDArray[np.float64]:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.

    Rotations whose off-diagonal entry is below ``eps * sqrt(|a_pp a_qq|)`` are replaced by zeroing the entry.

    Args:
        a: Symmetric matrix; not modified.
        tol: Sweeps stop once the off-diagonal Frobenius norm is below ``tol * ||a||_F``; defaults to
            ``dim * eps``.

    Example:
        >>> import numpy as np
        >>> jacobi_eigenvalues(np.array([[2.0, 1.0], [1.0, 2.0]])).round(12).tolist()
        [1.0, 3.0]
    """
    w = np.array(a, dtype=float)
    dim = w.shape[0]
    if dim <= 1:
        return np.diagonal(w).copy()
    scale = float(np.linalg.norm(w))
    if scale == 0.0:
        return np.zeros(dim)
    limit = (dim * _EPS if tol is None else tol) * scale
    for sweep in range(_MAX_SWEEPS):
        off = math.sqrt(max(float(np.sum(w * w) - np.sum(np.diagonal(w) ** 2)), 0.0))
        if off <= limit:
            logger.debug("jacobi converged after %d sweeps (dim=%d)", sweep, dim)
            break
        rotated = False
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = w[p, q]
                if abs(apq) <= _EPS * math.sqrt(abs(w[p, p] * w[q, q])) or abs(apq) <= _TINY * scale:
                    w[p, q] = w[q, p] = 0.0
                    continue
                h = w[q, q] - w[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = w[:, p].copy()
                col_q = w[:, q].copy()
                w[:, p] = c * col_p - s * col_q
                w[:, q] = s * col_p + c * col_q
                row_p = w[p, :].copy()
                row_q = w[q, :].copy()
                w[p, :] = c * row_p - s * row_q
                w[q, :] = s * row_p + c * row_q
                w[p, q] = w[q, p] = 0.0
                rotated = True
        if not rotated:
            logger.debug("jacobi stopped after %d sweeps with no rotation left (dim=%d)", sweep + 1, dim)
            break
    else:
        logger.warning("jacobi stopped after %d sweeps at off-diagonal norm above %g", _MAX_SWEEPS, limit)
    return np.sort(np.diagonal(w))


def reduced_matrix(k: NDArray[np.float64], m: NDArray[np.float64]) -> NDArray[np.float64]:
    """Return ``L⁻¹ M L⁻ᵀ`` for the lower Cholesky factor ``L`` of *k*."""
    lower = scipy.linalg.cholesky(k, lower=True)
    half = scipy.linalg.solve_triangular(lower, m, lower=True)
    c = scipy.linalg.solve_triangular(lower, half.T, lower=True)
    return 0.5 * (c + c.T)


def pencil_eigenvalues(k: NDArray[np.float64], m: NDArray[np.float64], *, rank_tol: float) -> NDArray[np.float64]:
    """All finite eigenvalues of ``K x = λ M x``, ascending.

    Eigenvalues ``μ`` of the reduced matrix with ``|μ| <= rank_tol * max|μ|`` belong to the kernel of ``M`` and are
    dropped.
    """
    mu = jacobi_eigenvalues(reduced_matrix(k, m))
    if mu.size == 0:
        return mu
    cutoff = rank_tol * float(np.max(np.abs(mu)))
    kept = mu[np.abs(mu) > cutoff]
    return np.sort(1.0 / kept)
