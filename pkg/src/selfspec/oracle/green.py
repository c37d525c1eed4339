"""Green kernel of ``(-1)^n d^(2n)/dx^(2n)`` with clamped ends, and the collocation spectrum of atomic weights.

For a source point ``s`` the kernel is a polynomial of degree ``2n - 1`` on each side of ``s``. Writing both pieces in
powers of ``x - s``, the coefficients solve a ``4n``-square linear system: ``n`` clamped conditions at 0, ``n`` at 1,
continuity of derivatives ``0 .. 2n-2`` at ``s`` and a jump ``(-1)^n`` in derivative ``2n - 1``.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from selfspec.banded import BandedSymmetricMatrix
from selfspec.errors import OracleError
from selfspec.pencil import SymmetricPencil, dense_eigs
from selfspec.settings import DEFAULT_SETTINGS, Settings

if TYPE_CHECKING:
    from selfspec.selfsim import AtomicMeasure

logger = logging.getLogger(__name__)

_GRAM_COND_LIMIT = 1e14


@lru_cache(maxsize=4096)
def _coefficients(n: int, s: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    size = 2 * n
    system = np.zeros((2 * size, 2 * size))
    rhs = np.zeros(2 * size)
    row = 0
    for k in range(n):
        for i in range(k, size):
            falling = math.perm(i, k)
            system[row, i] = falling * (-s) ** (i - k)
            system[row + n, size + i] = falling * (1.0 - s) ** (i - k)
        row += 1
    row += n
    for k in range(size):
        system[row, k] = -1.0
        system[row, size + k] = 1.0
        row += 1
    rhs[-1] = (-1) ** n / math.factorial(size - 1)
    solution = scipy.linalg.solve(system, rhs)
    return tuple(solution[:size].tolist()), tuple(solution[size:].tolist())


def green_coefficients(
    n: int, s: float, *, settings: Settings = DEFAULT_SETTINGS
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Coefficients of the left and right kernel pieces in powers of ``x - s``.

    Raises:
        OracleError: ``IllConditioned`` when *s* lies within ``settings.endpoint_tol`` of 0 or 1.
        ValueError: For ``n < 1`` or *s* outside ``[0, 1]``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"Source point {s!r} is outside [0, 1]")
    if s < settings.endpoint_tol or s > 1.0 - settings.endpoint_tol:
        raise OracleError(
            f"Source point {s!r} is too close to an endpoint", kind="IllConditioned", details={"s": s}
        )
    return _coefficients(n, float(s))


def green_value(n: int, x: float, s: float, *, settings: Settings = DEFAULT_SETTINGS) -> float:
    """Value of the clamped Green kernel ``G(x, s)``.

    Example:
        >>> round(green_value(1, 0.5, 0.5), 12), round(green_value(2, 0.5, 0.5) * 192, 12)
        (0.25, 1.0)
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"Evaluation point {x!r} is outside [0, 1]")
    left, right = green_coefficients(n, s, settings=settings)
    coeffs = left if x <= s else right
    h = x - s
    # Horner in powers of (x - s).
    value = 0.0
    for c in reversed(coeffs):
        value = value * h + c
    return value


def green_matrix(n: int, points: NDArray[np.float64], *, settings: Settings = DEFAULT_SETTINGS) -> NDArray[np.float64]:
    """Symmetrized Gram matrix ``G(ξ_i, ξ_j)``."""
    pts = np.asarray(points, dtype=float)
    gram = np.array([[green_value(n, float(x), float(s), settings=settings) for s in pts] for x in pts])
    return 0.5 * (gram + gram.T)


def green_spectrum(n: int, mu: AtomicMeasure, *, settings: Settings = DEFAULT_SETTINGS) -> NDArray[np.float64]:
    """All eigenvalues of the atomic-weight problem by collocation, ascending.

    Solves ``Γ⁻¹ v = λ diag(w) v`` through the dense pencil path.

    Raises:
        OracleError: ``SingularGram`` when ``Γ`` cannot be inverted reliably.
        DiscretizationError: ``DimensionTooLarge`` above ``settings.dense_max_dim`` atoms.

    Example:
        >>> from selfspec.selfsim import AtomicMeasure
        >>> green_spectrum(1, AtomicMeasure.of([1 / 3, 2 / 3], [1.0, 1.0])).round(9).tolist()
        [3.0, 9.0]
    """
    if mu.size == 0:
        return np.zeros(0)
    gram = green_matrix(n, np.asarray(mu.positions), settings=settings)
    cond = float(np.linalg.cond(gram))
    if not math.isfinite(cond) or cond > _GRAM_COND_LIMIT:
        raise OracleError(
            f"Green Gram matrix is singular to working precision (cond={cond:.3e})",
            kind="SingularGram",
            details={"cond": cond},
        )
    inverse = scipy.linalg.inv(gram)
    inverse = 0.5 * (inverse + inverse.T)
    logger.debug("green collocation: %d atoms, cond=%.3e", mu.size, cond)
    pencil = SymmetricPencil.create(
        BandedSymmetricMatrix.from_dense(inverse),
        BandedSymmetricMatrix.from_dense(np.diag(mu.weights)),
        counts=(mu.positive_count, mu.negative_count),
        settings=settings,
    )
    return dense_eigs(pencil, settings=settings)
