"""Spectrum slicing for the symmetric pencil ``K - λM`` with ``K`` positive definite and ``M`` indefinite.

Eigenvalues are located by counting negative pivots of the band ``LDLᵀ`` factorization of ``K - λM`` (Sylvester's law
of inertia) and bisecting on that count. Before any count the pencil is congruence-scaled by ``diag(K)^(-1/2)``,
which leaves every inertia unchanged and keeps pivots of order one on strongly graded knot sequences.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from numpy.typing import NDArray

from selfspec.banded import BandedSymmetricMatrix, ldlt_pivots
from selfspec.dense import pencil_eigenvalues
from selfspec.errors import DiscretizationError, SingularShiftError, SpectrumExhaustedError
from selfspec.settings import DEFAULT_SETTINGS, Settings
from selfspec.spline import assemble_stiffness, assemble_weight

if TYPE_CHECKING:
    from selfspec.selfsim import AtomicMeasure
    from selfspec.spline import SplineSpace

logger = logging.getLogger(__name__)

_BRACKET_LIMIT = 1e300
_TRIAL_FRACTIONS = (0.5, 0.375, 0.625, 0.25, 0.75, 0.125, 0.875, 0.0625)
_RESOLVED_ULPS = 4


class SymmetricPencil(NamedTuple):
    """The pencil ``K - λM`` together with its scaled form and spectrum sizes.

    Build instances with :meth:`create` or :meth:`from_measure`.

    Attributes:
        K: Positive definite stiffness matrix.
        M: Symmetric weight matrix on the same band.
        scale: ``diag(K)^(-1/2)``.
        available_positive: Number of positive pencil eigenvalues.
        available_negative: Number of negative pencil eigenvalues.
    """

    K: BandedSymmetricMatrix
    M: BandedSymmetricMatrix
    scale: NDArray[np.float64]
    available_positive: int
    available_negative: int

    @property
    def dim(self) -> int:
        """Pencil order."""
        return self.K.dim

    @classmethod
    def create(
        cls,
        k: BandedSymmetricMatrix,
        m: BandedSymmetricMatrix,
        *,
        counts: tuple[int, int] | None = None,
        settings: Settings = DEFAULT_SETTINGS,
    ) -> SymmetricPencil:
        """Validate and scale a pencil.

        Args:
            k: Stiffness matrix; must pass a Cholesky check.
            m: Weight matrix of the same order.
            counts: Known ``(positive, negative)`` spectrum sizes; computed from the inertia of ``M`` otherwise.
            settings: Supplies the rank threshold for the inertia of ``M``.

        Raises:
            DiscretizationError: ``EmptySpace`` for a pencil of order zero.
            ValueError: On mismatched orders or a ``K`` that is not positive definite.
        """
        if k.dim != m.dim:
            raise ValueError(f"Pencil matrices differ in order: {k.dim} vs {m.dim}")
        if k.dim == 0:
            raise DiscretizationError("Pencil of order zero", kind="EmptySpace")
        bw = max(k.bandwidth, m.bandwidth)
        k, m = k.with_bandwidth(bw), m.with_bandwidth(bw)
        if not k.is_positive_definite():
            raise ValueError("Stiffness matrix is not positive definite")
        scale = 1.0 / np.sqrt(k.diagonal())
        if counts is None:
            mu = np.linalg.eigvalsh(m.congruence(scale).to_dense())
            cutoff = settings.rank_tol * max(float(np.max(np.abs(mu))), 0.0)
            counts = (int(np.sum(mu > cutoff)), int(np.sum(mu < -cutoff)))
        return cls(k, m, scale, counts[0], counts[1])

    @classmethod
    def from_measure(
        cls, space: SplineSpace, mu: AtomicMeasure, *, settings: Settings = DEFAULT_SETTINGS
    ) -> SymmetricPencil:
        """Assemble the Galerkin pencil of *mu* on *space*.

        ``M = Φ diag(w) Φᵀ`` with the evaluation matrix ``Φ`` of full column rank on the atoms, so the positive and
        negative spectrum sizes are the sign counts of the weights.

        Example:
            >>> from selfspec.selfsim import AtomicMeasure
            >>> from selfspec.spline import build_space
            >>> p = SymmetricPencil.from_measure(build_space(1, [0.5]), AtomicMeasure.of([0.5], [1.0]))
            >>> p.available_positive, p.available_negative
            (1, 0)
        """
        k = assemble_stiffness(space)
        m = assemble_weight(space, mu, settings=settings)
        return cls.create(k, m, counts=(mu.positive_count, mu.negative_count), settings=settings)

    def scaled(self) -> tuple[BandedSymmetricMatrix, BandedSymmetricMatrix]:
        """The congruence-scaled pair ``(S K S, S M S)``."""
        return self.K.congruence(self.scale), self.M.congruence(self.scale)


class InertiaResult(NamedTuple):
    """Negative index of ``K - λM``.

    Attributes:
        lambda_: The shift actually factored (perturbed when *zero_flag* is set).
        neg_count: Number of negative pivots.
        zero_flag: Whether the requested shift hit a numerically zero pivot and had to be perturbed.
    """

    lambda_: float
    neg_count: int
    zero_flag: bool


class EigenList(NamedTuple):
    """Signed-index eigenvalues of a pencil.

    Attributes:
        positive: ``λ_1 <= λ_2 <= ...``.
        negative: ``λ_-1 >= λ_-2 >= ...``.
        rel_tol: Relative bracket width each value was resolved to.
        certified: Whether every value came from a converged inertia bracket.
    """

    positive: tuple[float, ...]
    negative: tuple[float, ...]
    rel_tol: float
    certified: bool

    def by_index(self, index: int) -> float:
        """Eigenvalue with signed *index* (``+1`` is the smallest positive, ``-1`` the largest negative)."""
        if index > 0:
            return self.positive[index - 1]
        if index < 0:
            return self.negative[-index - 1]
        raise ValueError("Eigenvalue index must be nonzero")


def _factor_neg_count(p: SymmetricPencil, lam: float, settings: Settings) -> int:
    ks, ms = p.scaled()
    shifted = ks.combine(ms, -lam)
    row_scale = ks.row_max_abs() + abs(lam) * ms.row_max_abs()
    pivots = ldlt_pivots(shifted, pivot_rel_tol=settings.pivot_rel_tol, shift=lam, row_scale=row_scale)
    return int(np.count_nonzero(pivots < 0.0))


def inertia(
    p: SymmetricPencil, lam: float, *, perturb: bool = False, settings: Settings = DEFAULT_SETTINGS
) -> InertiaResult:
    """Count the negative eigenvalues of ``K - λM``.

    For ``λ > 0`` the count equals the number of pencil eigenvalues in ``(0, λ)``; for ``λ < 0`` the number in
    ``(λ, 0)``.

    Args:
        p: The pencil.
        lam: The shift.
        perturb: Retry a singular shift at nearby values instead of raising.
        settings: Supplies the pivot threshold and retry cap.

    Raises:
        SingularShiftError: When *lam* is numerically an eigenvalue (and *perturb* is off or retries run out).

    Example:
        >>> from selfspec.selfsim import AtomicMeasure
        >>> from selfspec.spline import build_space
        >>> p = SymmetricPencil.from_measure(build_space(1, [0.5]), AtomicMeasure.of([0.5], [1.0]))
        >>> inertia(p, 5.0).neg_count, inertia(p, 3.9).neg_count
        (1, 0)
    """
    try:
        return InertiaResult(lam, _factor_neg_count(p, lam, settings), False)
    except SingularShiftError:
        if not perturb:
            raise
    step = max(abs(lam) * 1e-12, 1e-12, _RESOLVED_ULPS * float(np.spacing(abs(lam))))
    for attempt in range(1, settings.max_shift_retries + 1):
        shifted = lam + step * attempt * (1 if attempt % 2 else -1)
        try:
            count = _factor_neg_count(p, shifted, settings)
        except SingularShiftError:
            continue
        logger.debug("singular shift %r perturbed to %r", lam, shifted)
        return InertiaResult(shifted, count, True)
    raise SingularShiftError(
        f"Shift {lam!r} stays singular after {settings.max_shift_retries} perturbations", shift=lam
    )


def _side_count(p: SymmetricPencil, x: float, sign: int, settings: Settings) -> int:
    """Number of eigenvalues with the given sign and magnitude in ``(0, x)``."""
    if x == 0.0:
        return 0
    return inertia(p, sign * x, settings=settings).neg_count


def count_interval(p: SymmetricPencil, lo: float, hi: float, *, settings: Settings = DEFAULT_SETTINGS) -> int:
    """Number of pencil eigenvalues in ``(lo, hi]``.

    Raises:
        ValueError: Unless ``lo < hi``.
        SingularShiftError: When an endpoint is numerically an eigenvalue.

    Example:
        >>> from selfspec.selfsim import AtomicMeasure
        >>> from selfspec.spline import build_space
        >>> p = SymmetricPencil.from_measure(build_space(1, [0.5]), AtomicMeasure.of([0.5], [1.0]))
        >>> count_interval(p, 0.0, 3.9), count_interval(p, 0.0, 5.0), count_interval(p, -1.0, 1.0)
        (0, 1, 0)
    """
    if not lo < hi:
        raise ValueError(f"Expected lo < hi, got ({lo!r}, {hi!r})")
    if lo >= 0.0:
        return _side_count(p, hi, 1, settings) - _side_count(p, lo, 1, settings)
    if hi <= 0.0:
        return _side_count(p, -lo, -1, settings) - _side_count(p, -hi, -1, settings)
    return _side_count(p, -lo, -1, settings) + _side_count(p, hi, 1, settings)


class _Bracket(NamedTuple):
    lo: float
    hi: float
    count_lo: int
    count_hi: int
    converged: bool


def _expand_count(p: SymmetricPencil, x: float, sign: int, settings: Settings) -> tuple[float, int]:
    """Count at *x* while the upper end of the bracket is still growing; a singular *x* is moved upward."""
    for attempt in range(settings.max_shift_retries + 1):
        moved = x * (1.0 + attempt * 2.0**-10)
        try:
            return moved, _side_count(p, moved, sign, settings)
        except SingularShiftError:
            logger.debug("singular shift %r while expanding the bracket", sign * moved)
    raise SingularShiftError(f"Could not move off the eigenvalue near {sign * x!r}", shift=sign * x)


def _interior_count(
    p: SymmetricPencil, lo: float, hi: float, sign: int, settings: Settings
) -> tuple[float, int] | None:
    """Count at the midpoint of ``(lo, hi)``, falling back to other interior points when it is singular."""
    for frac in _TRIAL_FRACTIONS[: settings.max_shift_retries]:
        x = lo + frac * (hi - lo)
        if not lo < x < hi:
            continue
        try:
            return x, _side_count(p, x, sign, settings)
        except SingularShiftError:
            logger.debug("singular shift %r inside (%r, %r)", sign * x, lo, hi)
    return None


def _resolved(lo: float, hi: float, rel_tol: float) -> bool:
    return hi - lo <= max(rel_tol * hi, _RESOLVED_ULPS * float(np.spacing(hi)))


def _initial_upper(p: SymmetricPencil, sign: int) -> float:
    """Rayleigh-quotient bound ``min K̃_ii / M̃_ii`` over diagonal entries of the requested sign."""
    _, ms = p.scaled()
    diag = sign * ms.diagonal()
    useful = diag[diag > 0.0]
    if useful.size:
        return float(1.0 / np.max(useful))
    peak = ms.max_abs()
    return 1.0 / peak if peak > 0.0 else 1.0


def _bisect(p: SymmetricPencil, target: int, sign: int, rel_tol: float, settings: Settings) -> _Bracket:
    """Bracket ``(lo, hi]`` in magnitude with ``count(lo) < target <= count(hi)`` and relative width ``<= rel_tol``.

    A bracket whose interior cannot be factored at any trial point is returned unconverged.
    """
    lo, count_lo = 0.0, 0
    hi, count_hi = _expand_count(p, _initial_upper(p, sign), sign, settings)
    while count_hi < target:
        lo, count_lo = hi, count_hi
        if 2.0 * hi > _BRACKET_LIMIT:
            raise SpectrumExhaustedError(
                f"No eigenvalue {sign * target} below {sign * _BRACKET_LIMIT:g}",
                available_positive=p.available_positive,
                available_negative=p.available_negative,
            )
        hi, count_hi = _expand_count(p, 2.0 * hi, sign, settings)
        logger.debug("bracket expanded to %g (count %d, target %d)", sign * hi, count_hi, target)
    for _ in range(settings.max_bisection_steps):
        if _resolved(lo, hi, rel_tol):
            return _Bracket(lo, hi, count_lo, count_hi, True)
        trial = _interior_count(p, lo, hi, sign, settings)
        if trial is None:
            logger.warning(
                "eigenvalue %d is numerically singular across (%r, %r); stopping at relative width %g",
                sign * target,
                sign * lo,
                sign * hi,
                (hi - lo) / hi,
            )
            return _Bracket(lo, hi, count_lo, count_hi, False)
        mid, count_mid = trial
        if count_mid >= target:
            hi, count_hi = mid, count_mid
        else:
            lo, count_lo = mid, count_mid
    logger.warning("bisection for index %d stopped at relative width %g", sign * target, (hi - lo) / hi)
    return _Bracket(lo, hi, count_lo, count_hi, False)


def _check_request(p: SymmetricPencil, pos_count: int, neg_count: int) -> None:
    if pos_count > p.available_positive or neg_count > p.available_negative:
        raise SpectrumExhaustedError(
            f"Requested {pos_count} positive and {neg_count} negative eigenvalues; the pencil has "
            f"{p.available_positive} and {p.available_negative}",
            available_positive=p.available_positive,
            available_negative=p.available_negative,
        )


def _check_tol(rel_tol: float, settings: Settings) -> None:
    if not rel_tol >= settings.min_rel_tol:
        raise ValueError(f"rel_tol must be at least {settings.min_rel_tol:g}, got {rel_tol!r}")


def eig_by_index(
    p: SymmetricPencil, index: int, rel_tol: float | None = None, *, settings: Settings = DEFAULT_SETTINGS
) -> float:
    """Eigenvalue with signed *index* by inertia bisection.

    Args:
        p: The pencil.
        index: ``+k`` for the k-th smallest positive eigenvalue, ``-k`` for the k-th largest negative one.
        rel_tol: Relative bracket width; defaults to ``settings.rel_tol``.
        settings: Numerical defaults.

    Raises:
        SpectrumExhaustedError: If the pencil has fewer eigenvalues on that side than ``|index|``.
        ValueError: For ``index == 0`` or a tolerance below ``settings.min_rel_tol``.

    Example:
        >>> from selfspec.selfsim import AtomicMeasure
        >>> from selfspec.spline import build_space
        >>> p = SymmetricPencil.from_measure(build_space(1, [0.5]), AtomicMeasure.of([0.5], [-1.0]))
        >>> round(eig_by_index(p, -1), 8)
        -4.0
    """
    if index == 0:
        raise ValueError("Eigenvalue index must be nonzero")
    tol = settings.rel_tol if rel_tol is None else rel_tol
    _check_tol(tol, settings)
    sign = 1 if index > 0 else -1
    _check_request(p, index if sign > 0 else 0, -index if sign < 0 else 0)
    bracket = _bisect(p, abs(index), sign, tol, settings)
    return sign * 0.5 * (bracket.lo + bracket.hi)


def _side_values(
    p: SymmetricPencil, count: int, sign: int, rel_tol: float, settings: Settings
) -> tuple[list[float], bool]:
    values: list[float] = []
    certified = True
    while len(values) < count:
        target = len(values) + 1
        bracket = _bisect(p, target, sign, rel_tol, settings)
        certified = certified and bracket.converged
        mid = sign * 0.5 * (bracket.lo + bracket.hi)
        multiplicity = max(1, bracket.count_hi - max(bracket.count_lo, target - 1))
        if multiplicity > 1:
            logger.debug("eigenvalue %r has multiplicity %d", mid, multiplicity)
        values.extend([mid] * min(multiplicity, count - len(values)))
    return values, certified


def spectrum(
    p: SymmetricPencil,
    pos_count: int,
    neg_count: int,
    rel_tol: float | None = None,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> EigenList:
    """The first *pos_count* positive and *neg_count* negative eigenvalues.

    Raises:
        SpectrumExhaustedError: When either request exceeds the available spectrum; the error carries both counts.

    Example:
        >>> from selfspec.selfsim import AtomicMeasure
        >>> from selfspec.spline import build_space
        >>> p = SymmetricPencil.from_measure(build_space(2, [0.5]), AtomicMeasure.of([0.5], [1.0]))
        >>> [round(v, 6) for v in spectrum(p, 1, 0).positive]
        [192.0]
    """
    if pos_count < 0 or neg_count < 0:
        raise ValueError("Eigenvalue counts must be nonnegative")
    tol = settings.rel_tol if rel_tol is None else rel_tol
    _check_tol(tol, settings)
    _check_request(p, pos_count, neg_count)
    positive, cert_pos = _side_values(p, pos_count, 1, tol, settings)
    negative, cert_neg = _side_values(p, neg_count, -1, tol, settings)
    return EigenList(tuple(positive), tuple(negative), tol, cert_pos and cert_neg)


def dense_eigs(p: SymmetricPencil, *, settings: Settings = DEFAULT_SETTINGS) -> NDArray[np.float64]:
    """All finite pencil eigenvalues by Cholesky reduction and cyclic Jacobi, ascending.

    Raises:
        DiscretizationError: ``DimensionTooLarge`` above ``settings.dense_max_dim``.

    Example:
        >>> import numpy as np
        >>> k = BandedSymmetricMatrix.from_dense(np.eye(2))
        >>> m = BandedSymmetricMatrix.from_dense(np.diag([1.0, -1.0]))
        >>> dense_eigs(SymmetricPencil.create(k, m)).tolist()
        [-1.0, 1.0]
    """
    if p.dim > settings.dense_max_dim:
        raise DiscretizationError(
            f"Dense path accepts at most {settings.dense_max_dim} unknowns, got {p.dim}",
            kind="DimensionTooLarge",
            details={"dim": p.dim},
        )
    ks, ms = p.scaled()
    return pencil_eigenvalues(ks.to_dense(), ms.to_dense(), rank_tol=settings.rank_tol)
