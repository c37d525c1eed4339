"""Symmetric band matrices and the unpivoted LDLᵀ factorization used for inertia counting.

Storage follows LAPACK's upper band layout (the one :func:`scipy.linalg.cholesky_banded` consumes): entry ``A[i, j]``
with ``i <= j`` lives at ``upper[bandwidth + i - j, j]``. Entries outside the band are zero by construction and
symmetry is exact because only one triangle is stored.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from selfspec.errors import SingularShiftError


class BandedSymmetricMatrix(NamedTuple):
    """Symmetric matrix in packed upper band storage.

    Attributes:
        dim: Matrix order.
        bandwidth: Number of super-diagonals kept.
        upper: Array of shape ``(bandwidth + 1, dim)``; ``upper[bandwidth + i - j, j] == A[i, j]`` for ``i <= j``.
    """

    dim: int
    bandwidth: int
    upper: NDArray[np.float64]

    @classmethod
    def zeros(cls, dim: int, bandwidth: int) -> BandedSymmetricMatrix:
        """Zero matrix with the given shape."""
        return cls(dim, bandwidth, np.zeros((bandwidth + 1, dim)))

    @classmethod
    def from_dense(cls, a: NDArray[np.float64], bandwidth: int | None = None) -> BandedSymmetricMatrix:
        """Pack the upper triangle of a dense symmetric matrix.

        Args:
            a: Square matrix; only the upper triangle is read.
            bandwidth: Super-diagonals to keep; defaults to the full matrix.

        Example:
            >>> import numpy as np
            >>> BandedSymmetricMatrix.from_dense(np.array([[2.0, -1.0], [-1.0, 2.0]])).upper.tolist()
            [[0.0, -1.0], [2.0, 2.0]]
        """
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"Expected a square matrix, got shape {a.shape}")
        dim = a.shape[0]
        bw = dim - 1 if bandwidth is None else min(bandwidth, max(dim - 1, 0))
        upper = np.zeros((bw + 1, dim))
        for off in range(bw + 1):
            upper[bw - off, off:] = np.diagonal(a, offset=off)
        return cls(dim, bw, upper)

    def entry(self, i: int, j: int) -> float:
        """Entry ``A[i, j]`` (zero outside the band)."""
        if i > j:
            i, j = j, i
        if j - i > self.bandwidth:
            return 0.0
        return float(self.upper[self.bandwidth + i - j, j])

    def diagonal(self) -> NDArray[np.float64]:
        """Copy of the main diagonal."""
        return self.upper[self.bandwidth].copy()

    def to_dense(self) -> NDArray[np.float64]:
        """Dense symmetric copy."""
        a = np.zeros((self.dim, self.dim))
        for off in range(self.bandwidth + 1):
            diag = self.upper[self.bandwidth - off, off:]
            idx = np.arange(self.dim - off)
            a[idx, idx + off] = diag
            a[idx + off, idx] = diag
        return a

    def max_abs(self) -> float:
        """Largest entry magnitude."""
        return float(np.max(np.abs(self.upper))) if self.upper.size else 0.0

    def row_max_abs(self) -> NDArray[np.float64]:
        """Largest entry magnitude of each row.

        Example:
            >>> import numpy as np
            >>> a = BandedSymmetricMatrix.from_dense(np.array([[1e-3, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 5.0]]))
            >>> a.row_max_abs().tolist()
            [2.0, 2.0, 5.0]
        """
        bw = self.bandwidth
        rows = np.abs(self.upper[bw]).copy()
        for off in range(1, min(bw, self.dim - 1) + 1):
            band = np.abs(self.upper[bw - off, off:])
            np.maximum(rows[off:], band, out=rows[off:])
            np.maximum(rows[: self.dim - off], band, out=rows[: self.dim - off])
        return rows

    def with_bandwidth(self, bandwidth: int) -> BandedSymmetricMatrix:
        """Same matrix padded with zero diagonals up to *bandwidth*."""
        if bandwidth < self.bandwidth:
            raise ValueError(f"Cannot shrink bandwidth from {self.bandwidth} to {bandwidth}")
        upper = np.zeros((bandwidth + 1, self.dim))
        upper[bandwidth - self.bandwidth :] = self.upper
        return BandedSymmetricMatrix(self.dim, bandwidth, upper)

    def combine(self, other: BandedSymmetricMatrix, factor: float) -> BandedSymmetricMatrix:
        """Return ``self + factor * other`` on the common bandwidth."""
        if other.dim != self.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        bw = max(self.bandwidth, other.bandwidth)
        a = self.with_bandwidth(bw).upper
        b = other.with_bandwidth(bw).upper
        return BandedSymmetricMatrix(self.dim, bw, a + factor * b)

    def congruence(self, scale: NDArray[np.float64]) -> BandedSymmetricMatrix:
        """Return ``diag(scale) @ A @ diag(scale)``; inertia is preserved for nonzero *scale*."""
        upper = self.upper.copy()
        for off in range(self.bandwidth + 1):
            row = self.bandwidth - off
            upper[row, off:] *= scale[: self.dim - off] * scale[off:]
        return BandedSymmetricMatrix(self.dim, self.bandwidth, upper)

    def is_positive_definite(self) -> bool:
        """Whether a banded Cholesky factorization succeeds."""
        try:
            scipy.linalg.cholesky_banded(self.upper, lower=False, check_finite=False)
        except (np.linalg.LinAlgError, ValueError):
            return False
        return True


def ldlt_pivots(
    a: BandedSymmetricMatrix,
    *,
    pivot_rel_tol: float,
    shift: float = 0.0,
    row_scale: NDArray[np.float64] | None = None,
) -> NDArray[np.float64]:
    """Pivots ``D`` of the unpivoted band factorization ``A = L D Lᵀ``.

    ``L`` keeps the bandwidth of ``A``, so the work is ``O(dim * bandwidth**2)``. By Sylvester's law of inertia the
    number of negative pivots is the number of negative eigenvalues of ``A``.

    Args:
        a: The matrix to factor.
        pivot_rel_tol: A pivot below ``pivot_rel_tol * row_scale[j]`` aborts the factorization.
        shift: The shift that produced *a*, reported in the error.
        row_scale: Magnitude of each row; defaults to the largest entry of each row of *a*. For a shifted matrix
            ``K - λM`` pass the row magnitudes of ``|K| + |λ||M|``.

    Raises:
        SingularShiftError: On a pivot below the threshold.

    Example:
        >>> import numpy as np
        >>> m = BandedSymmetricMatrix.from_dense(np.array([[1.0, 2.0], [2.0, 1.0]]))
        >>> ldlt_pivots(m, pivot_rel_tol=1e-14).tolist()
        [1.0, -3.0]
    """
    dim, bw = a.dim, a.bandwidth
    scale = a.row_max_abs() if row_scale is None else np.asarray(row_scale, dtype=float)
    thresholds = (pivot_rel_tol * scale).tolist()
    up = a.upper.tolist()
    diag = up[bw]
    # lower[i][k] holds L[i, i - 1 - k].
    lower = [[0.0] * bw for _ in range(dim)]
    pivots = [0.0] * dim
    for j in range(dim):
        l_j = lower[j]
        d_j = diag[j]
        for k in range(max(0, j - bw), j):
            l_jk = l_j[j - 1 - k]
            d_j -= l_jk * l_jk * pivots[k]
        if abs(d_j) <= thresholds[j]:
            raise SingularShiftError(f"Pivot {d_j:.3e} at row {j} is numerically zero", shift=shift)
        pivots[j] = d_j
        for i in range(j + 1, min(dim, j + bw + 1)):
            l_i = lower[i]
            acc = up[bw + j - i][i]
            for k in range(max(0, i - bw), j):
                acc -= l_i[i - 1 - k] * l_j[j - 1 - k] * pivots[k]
            l_i[i - 1 - j] = acc / d_j
    return np.array(pivots)
