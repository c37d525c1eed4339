"""Self-similar functions of zero spectral order and their finite-depth refinements.

A similarity operator on ``L2[0, 1]`` is fixed by ``N`` branch lengths ``a_k`` (summing to one), additive terms
``beta_k`` and scaling terms ``d_k``. Writing ``alpha_0 = 0`` and ``alpha_k = alpha_{k-1} + a_k``, it maps ``f`` to the
function equal to ``beta_k + d_k * f((x - alpha_{k-1}) / a_k)`` on ``(alpha_{k-1}, alpha_k)``. Zero spectral order
means exactly one ``d_m`` is nonzero, so only branch ``m`` carries a rescaled copy and every other branch is constant.

The fixed point ``P`` is never evaluated directly. Instead :func:`refine` iterates the operator from ``P_0 = 0`` and
returns the exact piecewise-constant ``P_j``; :func:`atoms` turns its interior jumps into the point masses that
approximate the weight ``rho = P'``.
"""

from __future__ import annotations

import bisect
import logging
import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from selfspec.errors import DiscretizationError, ParameterError
from selfspec.settings import DEFAULT_SETTINGS, Settings

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


class SimilarityParams(NamedTuple):
    """Validated parameters of a similarity operator of zero spectral order.

    Build instances with :func:`validate`; the derived fields are not checked here.

    Attributes:
        n: Half-order of the equation.
        a: Branch lengths, positive, summing to one.
        beta: Additive terms.
        d: Scaling terms; exactly ``d[m - 1]`` is nonzero.
        m: 1-based index of the nonzero scaling term.
        alpha: Partition points ``alpha_0 = 0 < alpha_1 < ... < alpha_N = 1``.
    """

    n: int
    a: tuple[float, ...]
    beta: tuple[float, ...]
    d: tuple[float, ...]
    m: int
    alpha: tuple[float, ...]

    @property
    def N(self) -> int:  # noqa: N802
        """Number of branches."""
        return len(self.a)

    @property
    def a_m(self) -> float:
        """Length of the self-similar branch."""
        return self.a[self.m - 1]

    @property
    def d_m(self) -> float:
        """The nonzero scaling term."""
        return self.d[self.m - 1]


class StructureReport(NamedTuple):
    """Structural quantities of a parameter set that govern the spectral asymptotics.

    Attributes:
        zeta: First-level jump magnitudes ``zeta_1 .. zeta_{N-1}``.
        z_plus: Number of positive ``zeta_k``.
        z_minus: Number of negative ``zeta_k``.
        nondegenerate: ``True`` iff no ``zeta_k`` vanishes.
        ratio_q: Spectral ratio ``a_m**(2n-1) * d_m``.
        contraction_l2: L2 contraction factor ``sqrt(sum(a_k * d_k**2))``.
    """

    zeta: tuple[float, ...]
    z_plus: int
    z_minus: int
    nondegenerate: bool
    ratio_q: float
    contraction_l2: float


class RefinedWeight(NamedTuple):
    """Exact piecewise-constant truncation ``P_j`` of the self-similar function.

    Attributes:
        depth: Number of similarity iterations applied to ``P_0 = 0``.
        breakpoints: Strictly increasing cell boundaries from 0 to 1.
        values: Constant value on each cell (one fewer than ``breakpoints``).
        jump_scale: ``max|beta|`` of the generating parameters; jumps below ``zero_jump_rel * jump_scale`` are zeros.
    """

    depth: int
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    jump_scale: float


class AtomicMeasure(NamedTuple):
    """Finite collection of interior point masses.

    Attributes:
        positions: Strictly increasing positions in the open interval ``(0, 1)``.
        weights: Nonzero masses, one per position.
    """

    positions: tuple[float, ...]
    weights: tuple[float, ...]

    @classmethod
    def of(cls, positions: Sequence[float], weights: Sequence[float]) -> AtomicMeasure:
        """Build a measure from unsorted atoms, validating positions and dropping zero masses.

        Raises:
            ValueError: If lengths differ, a position lies outside ``(0, 1)``, or two positions coincide.

        Example:
            >>> AtomicMeasure.of([0.75, 0.25], [1.0, -2.0])
            AtomicMeasure(positions=(0.25, 0.75), weights=(-2.0, 1.0))
        """
        if len(positions) != len(weights):
            raise ValueError(f"Got {len(positions)} positions but {len(weights)} weights")
        pairs = sorted((float(x), float(w)) for x, w in zip(positions, weights) if w != 0)
        for x, _ in pairs:
            if not 0.0 < x < 1.0:
                raise ValueError(f"Atom position {x!r} is not interior to (0, 1)")
        for (x0, _), (x1, _) in zip(pairs, pairs[1:]):
            if x1 <= x0:
                raise ValueError(f"Duplicate atom position {x1!r}")
        return cls(tuple(x for x, _ in pairs), tuple(w for _, w in pairs))

    @property
    def size(self) -> int:
        """Number of atoms."""
        return len(self.positions)

    @property
    def positive_count(self) -> int:
        """Number of atoms with positive mass."""
        return sum(1 for w in self.weights if w > 0)

    @property
    def negative_count(self) -> int:
        """Number of atoms with negative mass."""
        return sum(1 for w in self.weights if w < 0)

    def scaled(self, factor: float) -> AtomicMeasure:
        """Return the measure with every mass multiplied by *factor*."""
        return AtomicMeasure(self.positions, tuple(factor * w for w in self.weights))


def validate(
    *,
    n: int,
    a: Sequence[float],
    beta: Sequence[float],
    d: Sequence[float],
    settings: Settings = DEFAULT_SETTINGS,
) -> SimilarityParams:
    """Validate raw similarity parameters and derive ``m`` and the partition points.

    Args:
        n: Half-order of the equation, at least 1.
        a: Branch lengths.
        beta: Additive terms.
        d: Scaling terms.
        settings: Tolerances (``sum_tol`` is used).

    Returns:
        The validated parameter set.

    Raises:
        ParameterError: With kind ``InvalidConfig`` (bad ``n`` or list lengths), ``NonPositiveLength``, ``SumNotOne``,
            ``NotZeroOrder`` (zero or several nonzero ``d_k``, or all ``beta_k`` zero) or ``NotContractive``
            (``a_m * d_m**2 >= 1``).

    Example:
        >>> p = validate(n=2, a=[1 / 3, 1 / 3, 1 / 3], beta=[0, 2 / 3, 1], d=[0, 0, 0.5])
        >>> p.m, p.N
        (3, 3)
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParameterError(f"Half-order n must be a positive integer, got {n!r}", kind="InvalidConfig")
    if not len(a) == len(beta) == len(d):
        raise ParameterError(
            f"Parameter lists differ in length: a={len(a)}, beta={len(beta)}, d={len(d)}", kind="InvalidConfig"
        )
    if len(a) < 2:
        raise ParameterError(f"Need at least two branches, got {len(a)}", kind="InvalidConfig")

    a_t = tuple(float(x) for x in a)
    beta_t = tuple(float(x) for x in beta)
    d_t = tuple(float(x) for x in d)

    bad = [k + 1 for k, x in enumerate(a_t) if not x > 0]
    if bad:
        raise ParameterError(f"Branch lengths must be positive; a_k <= 0 at k={bad}", kind="NonPositiveLength")
    total = math.fsum(a_t)
    if abs(total - 1.0) > settings.sum_tol:
        raise ParameterError(f"Branch lengths sum to {total!r}, not 1", kind="SumNotOne", details={"sum": total})

    nonzero = [k + 1 for k, x in enumerate(d_t) if x != 0]
    if len(nonzero) != 1:
        raise ParameterError(
            f"Exactly one scaling term must be nonzero; found {len(nonzero)} at k={nonzero}",
            kind="NotZeroOrder",
            details={"nonzero_d": nonzero},
        )
    if all(b == 0 for b in beta_t):
        raise ParameterError("At least one additive term must be nonzero", kind="NotZeroOrder")

    m = nonzero[0]
    a_m, d_m = a_t[m - 1], d_t[m - 1]
    if a_m * d_m * d_m >= 1:
        raise ParameterError(
            f"Similarity operator is not contractive: a_m * d_m^2 = {a_m * d_m * d_m!r} >= 1",
            kind="NotContractive",
            details={"m": m},
        )

    alpha = [0.0]
    for length in a_t[:-1]:
        alpha.append(alpha[-1] + length)
    alpha.append(1.0)
    return SimilarityParams(n=n, a=a_t, beta=beta_t, d=d_t, m=m, alpha=tuple(alpha))


def _zero_threshold(params: SimilarityParams, settings: Settings) -> float:
    return settings.zero_jump_rel * max(abs(b) for b in params.beta)


def structure(params: SimilarityParams, *, settings: Settings = DEFAULT_SETTINGS) -> StructureReport:
    """Compute the first-level jumps ``zeta_k``, their sign counts and the spectral ratio.

    ``zeta_{m-1} = beta_m - beta_{m-1} + d_m * beta_1`` and ``zeta_m = beta_{m+1} - beta_m - d_m * beta_N``; every other
    ``zeta_k = beta_{k+1} - beta_k``. Rows with index 0 or ``N`` simply do not occur when ``m`` is 1 or ``N``.

    Example:
        >>> p = validate(n=2, a=[1 / 3, 1 / 3, 1 / 3], beta=[0, -1, 0], d=[0, 0, 0.5])
        >>> s = structure(p)
        >>> s.zeta, s.z_plus, s.z_minus
        ((-1.0, 1.0), 1, 1)
    """
    beta, m, big_n = params.beta, params.m, params.N
    d_m = params.d_m
    zeta: list[float] = []
    for k in range(1, big_n):
        if k == m - 1:
            zeta.append(beta[m - 1] - beta[m - 2] + d_m * beta[0])
        elif k == m:
            zeta.append(beta[m] - beta[m - 1] - d_m * beta[big_n - 1])
        else:
            zeta.append(beta[k] - beta[k - 1])

    eps = _zero_threshold(params, settings)
    z_plus = sum(1 for z in zeta if z > eps)
    z_minus = sum(1 for z in zeta if z < -eps)
    return StructureReport(
        zeta=tuple(zeta),
        z_plus=z_plus,
        z_minus=z_minus,
        nondegenerate=z_plus + z_minus == big_n - 1,
        ratio_q=params.a_m ** (2 * params.n - 1) * d_m,
        contraction_l2=math.sqrt(math.fsum(ak * dk * dk for ak, dk in zip(params.a, params.d))),
    )


def _merge_close(breakpoints: list[float], values: list[float], tol: float) -> tuple[list[float], list[float]]:
    """Drop cells narrower than *tol*; the jump across the removed cell is the sum of its two jumps."""
    out_bp = [breakpoints[0]]
    out_vals: list[float] = []
    for i, value in enumerate(values):
        right = breakpoints[i + 1]
        if right - out_bp[-1] < tol:
            continue
        out_bp.append(right)
        out_vals.append(value)
    # A sliver at the right end extends the last kept cell to 1.
    out_bp[-1] = breakpoints[-1]
    return out_bp, out_vals


def refine(params: SimilarityParams, depth: int, *, settings: Settings = DEFAULT_SETTINGS) -> RefinedWeight:
    """Apply the similarity operator *depth* times to the zero function.

    Cells outside branch ``m`` carry the constant ``beta_k``; branch ``m`` carries the affine image
    ``alpha_{m-1} + a_m * x`` of every cell of the previous iterate with value ``beta_m + d_m * v``.

    Args:
        params: Validated parameters.
        depth: Number of iterations, at least 0.
        settings: Tolerances (``max_depth``, ``knot_merge_tol``).

    Returns:
        The exact piecewise-constant iterate ``P_depth``.

    Raises:
        DiscretizationError: With kind ``DepthOverflow`` when *depth* exceeds ``settings.max_depth``.
        ValueError: If *depth* is negative.

    Example:
        >>> p = validate(n=2, a=[1 / 3, 1 / 3, 1 / 3], beta=[0, 2 / 3, 1], d=[0, 0, 0.5])
        >>> [round(v, 12) for v in refine(p, 2).values]
        [0.0, 0.666666666667, 1.0, 1.333333333333, 1.5]
    """
    if depth < 0:
        raise ValueError(f"Refinement depth must be nonnegative, got {depth}")
    if depth > settings.max_depth:
        raise DiscretizationError(
            f"Refinement depth {depth} exceeds the cap of {settings.max_depth}",
            kind="DepthOverflow",
            details={"depth": depth, "max_depth": settings.max_depth},
        )

    m, alpha = params.m, params.alpha
    a_m, beta_m, d_m = params.a_m, params.beta[m - 1], params.d_m
    breakpoints = [0.0, 1.0]
    values = [0.0]
    for level in range(depth):
        new_bp = [0.0]
        new_vals: list[float] = []
        for k in range(1, params.N + 1):
            if k != m:
                new_bp.append(alpha[k])
                new_vals.append(params.beta[k - 1])
                continue
            left = alpha[m - 1]
            new_bp.extend(left + a_m * x for x in breakpoints[1:-1])
            new_bp.append(alpha[m])
            new_vals.extend(beta_m + d_m * v for v in values)
        breakpoints, values = _merge_close(new_bp, new_vals, settings.knot_merge_tol)
        logger.debug("refine level %d: %d cells", level + 1, len(values))
    return RefinedWeight(
        depth=depth,
        breakpoints=tuple(breakpoints),
        values=tuple(values),
        jump_scale=max(abs(b) for b in params.beta),
    )


def atoms(w: RefinedWeight, *, settings: Settings = DEFAULT_SETTINGS) -> AtomicMeasure:
    """Convert the interior jumps of a refinement into point masses.

    The mass at an interior breakpoint is ``right value - left value``. Jumps at 0 and 1 are discarded (test functions
    vanish there) and jumps below ``zero_jump_rel * w.jump_scale`` (the largest ``|beta_k|``) count as
    exact zeros, the same test :func:`structure` applies to the first-level jumps.

    Example:
        >>> p = validate(n=2, a=[1 / 3, 1 / 3, 1 / 3], beta=[0, 2 / 3, 1], d=[0, 0, 0.5])
        >>> mu = atoms(refine(p, 1))
        >>> [round(x, 12) for x in mu.positions], [round(x, 12) for x in mu.weights]
        ([0.333333333333, 0.666666666667], [0.666666666667, 0.333333333333])
    """
    if len(w.values) < 2:
        return AtomicMeasure((), ())
    jumps = np.diff(np.asarray(w.values))
    eps = settings.zero_jump_rel * w.jump_scale
    keep = np.abs(jumps) > eps
    positions = np.asarray(w.breakpoints[1:-1])[keep]
    return AtomicMeasure(tuple(positions.tolist()), tuple(jumps[keep].tolist()))


def evaluate(w: RefinedWeight, x: float) -> float:
    """Value of the refinement at *x* (right-continuous; ``x = 1`` falls in the last cell).

    Raises:
        ValueError: If *x* lies outside ``[0, 1]``.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"Evaluation point {x!r} outside [0, 1]")
    idx = bisect.bisect_right(w.breakpoints, x) - 1
    return w.values[min(idx, len(w.values) - 1)]


def l2_distance(w1: RefinedWeight, w2: RefinedWeight) -> float:
    """Exact L2 distance between two piecewise-constant refinements."""
    grid = np.union1d(np.asarray(w1.breakpoints), np.asarray(w2.breakpoints))
    mids = 0.5 * (grid[:-1] + grid[1:])
    widths = np.diff(grid)
    diff = np.array([evaluate(w1, x) - evaluate(w2, x) for x in mids])
    return float(np.sqrt(np.sum(diff * diff * widths)))


def contraction_profile(
    params: SimilarityParams, depth: int, *, settings: Settings = DEFAULT_SETTINGS
) -> list[float]:
    """Successive distances ``||P_{j+1} - P_j||`` in L2 for ``j = 0 .. depth - 1``.

    The similarity operator contracts with factor :attr:`StructureReport.contraction_l2`, so the sequence decays at
    least geometrically with that factor.
    """
    previous = refine(params, 0, settings=settings)
    out: list[float] = []
    for j in range(1, depth + 1):
        current = refine(params, j, settings=settings)
        out.append(l2_distance(current, previous))
        previous = current
    return out


def first_level_measure(params: SimilarityParams, *, settings: Settings = DEFAULT_SETTINGS) -> AtomicMeasure:
    """Atoms ``(alpha_k, zeta_k)`` at the interior partition points, zero jumps dropped.

    The pencil built on this measure has exactly ``Z+`` positive and ``Z-`` negative eigenvalues.
    """
    report = structure(params, settings=settings)
    eps = _zero_threshold(params, settings)
    pairs = [(x, z) for x, z in zip(params.alpha[1:-1], report.zeta) if abs(z) > eps]
    return AtomicMeasure(tuple(x for x, _ in pairs), tuple(z for _, z in pairs))
