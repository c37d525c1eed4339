"""Clamped spline spaces of maximal smoothness and the Galerkin pencil matrices.

The space uses B-splines of degree ``2n - 1`` on the open knot vector with end multiplicity ``2n`` and single interior
knots. Dropping the first ``n`` and the last ``n`` functions imposes ``y^(k)(0) = y^(k)(1) = 0`` for ``k < n``, so the
remaining ``dim == len(interior_knots)`` functions form a conforming basis whose members overlap at most ``2n - 1``
neighbours.
"""

from __future__ import annotations

import bisect
import logging
from functools import lru_cache
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from numpy.typing import NDArray

from selfspec.banded import BandedSymmetricMatrix
from selfspec.errors import DiscretizationError
from selfspec.settings import DEFAULT_SETTINGS, Settings

if TYPE_CHECKING:
    from collections.abc import Sequence

    from selfspec.selfsim import AtomicMeasure

logger = logging.getLogger(__name__)


class SplineSpace(NamedTuple):
    """Boundary-reduced spline space.

    Attributes:
        n: Half-order of the differential operator.
        degree: Polynomial degree ``2n - 1``.
        interior_knots: Strictly increasing knots in ``(0, 1)``.
        knot_vector: Full open knot vector including the repeated end knots.
        dim: Number of basis functions after the clamped reduction.
        bandwidth: Largest index distance between basis functions with overlapping supports.
    """

    n: int
    degree: int
    interior_knots: tuple[float, ...]
    knot_vector: tuple[float, ...]
    dim: int
    bandwidth: int

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Distinct knots ``0, interior..., 1``."""
        return (0.0, *self.interior_knots, 1.0)

    @property
    def full_dim(self) -> int:
        """Number of B-splines before the boundary reduction."""
        return len(self.knot_vector) - self.degree - 1


class BasisValues(NamedTuple):
    """Nonzero entries of a basis evaluation.

    Attributes:
        start: Reduced index of the first stored entry.
        values: Consecutive entries ``start, start + 1, ...``.
    """

    start: int
    values: NDArray[np.float64]

    def to_dense(self, dim: int) -> NDArray[np.float64]:
        """Scatter into a length-*dim* vector."""
        out = np.zeros(dim)
        out[self.start : self.start + len(self.values)] = self.values
        return out


def build_space(
    n: int, interior_knots: Sequence[float], *, settings: Settings = DEFAULT_SETTINGS
) -> SplineSpace:
    """Build the clamped spline space of degree ``2n - 1`` on *interior_knots*.

    Args:
        n: Half-order, at least 1.
        interior_knots: Strictly increasing knots inside ``(0, 1)``.
        settings: Supplies the minimal knot separation.

    Returns:
        The reduced space.

    Raises:
        DiscretizationError: ``EmptySpace`` without interior knots, ``KnotCollision`` for knots that repeat, touch
            the ends, or are out of order.
        ValueError: If *n* is not positive.

    Example:
        >>> space = build_space(1, [1 / 3, 2 / 3])
        >>> space.degree, space.dim, space.bandwidth
        (1, 2, 1)
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    knots = tuple(float(t) for t in interior_knots)
    if not knots:
        raise DiscretizationError("A clamped space needs at least one interior knot", kind="EmptySpace")
    sep = settings.knot_merge_tol
    previous = 0.0
    for i, t in enumerate((*knots, 1.0)):
        if not t - previous > sep:
            raise DiscretizationError(
                f"Knot {i} at {t!r} is not separated from {previous!r} by more than {sep:g}",
                kind="KnotCollision",
                details={"index": i, "knot": t},
            )
        previous = t
    degree = 2 * n - 1
    knot_vector = (0.0,) * (degree + 1) + knots + (1.0,) * (degree + 1)
    dim = len(knots)
    return SplineSpace(n, degree, knots, knot_vector, dim, min(degree, dim - 1))


def _find_span(space: SplineSpace, x: float) -> int:
    """Knot span ``s`` with ``t[s] <= x < t[s + 1]``; ``x == 1`` uses the last nonempty span."""
    t = space.knot_vector
    span = bisect.bisect_right(t, x) - 1
    return min(max(span, space.degree), space.full_dim - 1)


def _all_derivatives(t: Sequence[float], degree: int, x: float, span: int, nders: int) -> NDArray[np.float64]:
    """Values and derivatives up to *nders* of the ``degree + 1`` B-splines that are nonzero on *span*.

    Row ``k`` holds the ``k``-th derivatives of ``B_{span - degree}, ..., B_span`` at *x*.
    """
    left = np.empty(degree)
    right = np.empty(degree)
    ndu = np.empty((degree + 1, degree + 1))
    a = np.empty((2, degree + 1))
    out = np.zeros((nders + 1, degree + 1))
    ne = min(nders, degree)

    # Upper triangle of ndu: basis functions; lower triangle: inverse knot differences.
    ndu[0, 0] = 1.0
    for j in range(degree):
        left[j] = x - t[span - j]
        right[j] = t[span + 1 + j] - x
        saved = 0.0
        for r in range(j + 1):
            ndu[j + 1, r] = 1.0 / (right[r] + left[j - r])
            temp = ndu[r, j] * ndu[j + 1, r]
            ndu[r, j + 1] = saved + right[r] * temp
            saved = left[j - r] * temp
        ndu[j + 1, j + 1] = saved

    out[0, :] = ndu[:, degree]
    for r in range(degree + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, ne + 1):
            d = 0.0
            rk = r - k
            pk = degree - k
            if r >= k:
                a[s2, 0] = a[s1, 0] * ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk > -1 else -rk
            j2 = k - 1 if r - 1 <= pk else degree - r
            if j1 <= j2:
                a[s2, j1 : j2 + 1] = (a[s1, j1 : j2 + 1] - a[s1, j1 - 1 : j2]) * ndu[pk + 1, rk + j1 : rk + j2 + 1]
                d += float(a[s2, j1 : j2 + 1] @ ndu[rk + j1 : rk + j2 + 1, pk])
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] * ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            out[k, r] = d
            s1, s2 = s2, s1

    factor = degree
    for k in range(1, ne + 1):
        out[k, :] *= factor
        factor *= degree - k
    return out


def _reduce(space: SplineSpace, span: int, row: NDArray[np.float64]) -> BasisValues:
    """Map full B-spline indices ``span - degree + j`` to reduced indices, dropping the clamped ones."""
    first = span - space.degree - space.n
    lo = max(0, -first)
    hi = min(len(row), space.dim - first)
    if hi <= lo:
        return BasisValues(0, np.zeros(0))
    return BasisValues(first + lo, row[lo:hi].copy())


def eval_basis(space: SplineSpace, x: float, r: int = 0) -> BasisValues:
    """Evaluate the ``r``-th derivatives of all reduced basis functions at *x*.

    At an interior knot the right limit is used; at ``x == 1`` the left limit.

    Args:
        space: The spline space.
        x: Evaluation point in ``[0, 1]``.
        r: Derivative order, at most ``2n - 1``.

    Returns:
        At most ``degree + 1`` consecutive nonzero entries.

    Raises:
        DiscretizationError: ``DerivativeOrderTooHigh`` when ``r > 2n - 1``.
        ValueError: For negative *r* or *x* outside ``[0, 1]``.

    Example:
        >>> space = build_space(1, [0.5])
        >>> eval_basis(space, 0.5).values.tolist()
        [1.0]
        >>> eval_basis(space, 0.25, 1).values.tolist()
        [2.0]
    """
    if r < 0:
        raise ValueError(f"Derivative order must be nonnegative, got {r}")
    if r > space.degree:
        raise DiscretizationError(
            f"Derivative order {r} exceeds the spline degree {space.degree}",
            kind="DerivativeOrderTooHigh",
            details={"r": r, "degree": space.degree},
        )
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"Evaluation point {x!r} is outside [0, 1]")
    span = _find_span(space, x)
    ders = _all_derivatives(space.knot_vector, space.degree, x, span, r)
    return _reduce(space, span, ders[r])


@lru_cache(maxsize=16)
def _gauss_rule(points: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    return np.polynomial.legendre.leggauss(points)


def quadrature_points(n: int) -> int:
    """Gauss points per knot interval for the order-*n* stiffness integrand, one above exactness."""
    return (2 * (n - 1) + 2) // 2 + 1


def assemble_stiffness(space: SplineSpace, *, points: int | None = None) -> BandedSymmetricMatrix:
    """Assemble ``K[i, j] = ∫ φ_i^(n) φ_j^(n) dx`` element by element.

    Args:
        space: The spline space.
        points: Gauss points per knot interval; defaults to :func:`quadrature_points`.

    Returns:
        The symmetric positive definite stiffness matrix.

    Example:
        >>> assemble_stiffness(build_space(1, [1 / 3, 2 / 3])).to_dense().round(12).tolist()
        [[6.0, -3.0], [-3.0, 6.0]]
    """
    n, p = space.n, space.degree
    nodes, weights = _gauss_rule(points or quadrature_points(n))
    k = BandedSymmetricMatrix.zeros(space.dim, space.bandwidth)
    bw = space.bandwidth
    t = space.knot_vector
    breakpoints = space.breakpoints
    for cell in range(len(breakpoints) - 1):
        x0, x1 = breakpoints[cell], breakpoints[cell + 1]
        half = 0.5 * (x1 - x0)
        span = p + cell
        first = span - p - n
        local = np.zeros((p + 1, p + 1))
        for xi, wq in zip(nodes, weights, strict=True):
            x = x0 + half * (xi + 1.0)
            row = _all_derivatives(t, p, x, span, n)[n]
            local += (wq * half) * np.outer(row, row)
        for a in range(p + 1):
            i = first + a
            if not 0 <= i < space.dim:
                continue
            for b in range(a, p + 1):
                j = first + b
                if 0 <= j < space.dim:
                    k.upper[bw + i - j, j] += local[a, b]
    logger.debug("assembled stiffness: dim=%d bandwidth=%d cells=%d", space.dim, bw, len(breakpoints) - 1)
    return k


def assemble_weight(
    space: SplineSpace, mu: AtomicMeasure, *, settings: Settings = DEFAULT_SETTINGS
) -> BandedSymmetricMatrix:
    """Assemble ``M[i, j] = Σ w φ_i(ξ) φ_j(ξ)`` over the atoms ``(ξ, w)`` of *mu*.

    Args:
        space: The spline space; every atom must sit on one of its knots.
        mu: The atomic measure.
        settings: Supplies the knot-matching tolerance.

    Returns:
        The symmetric (generally indefinite) weight matrix.

    Raises:
        DiscretizationError: ``AtomOffKnot`` for an atom away from every knot.

    Example:
        >>> from selfspec.selfsim import AtomicMeasure
        >>> space = build_space(1, [1 / 3, 2 / 3])
        >>> assemble_weight(space, AtomicMeasure.of([1 / 3, 2 / 3], [2 / 3, 1 / 3])).to_dense().round(12).tolist()
        [[0.666666666667, 0.0], [0.0, 0.333333333333]]
    """
    m = BandedSymmetricMatrix.zeros(space.dim, space.bandwidth)
    bw = space.bandwidth
    knots = space.interior_knots
    for xi, w in zip(mu.positions, mu.weights, strict=True):
        pos = bisect.bisect_left(knots, xi - settings.knot_merge_tol)
        if pos == len(knots) or abs(knots[pos] - xi) > settings.knot_merge_tol:
            raise DiscretizationError(
                f"Atom at {xi!r} is not a knot of the space", kind="AtomOffKnot", details={"position": xi}
            )
        v = eval_basis(space, knots[pos])
        for a, va in enumerate(v.values):
            i = v.start + a
            for b in range(a, len(v.values)):
                j = v.start + b
                if j - i <= bw:
                    m.upper[bw + i - j, j] += w * va * v.values[b]
    return m
