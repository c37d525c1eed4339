"""Geometric eigenvalue asymptotics for weights of zero spectral order.

For a nondegenerate structure (every first-level jump nonzero) the eigenvalues on each side of zero split into
residue classes ``l = 1 .. period`` that grow geometrically in the period counter ``k``::

    |λ_(offset + l + k * period)| ≈ τ_l * |q|^-(power * k + shift)

with ``q = a_m^(2n-1) d_m``. A positive ``d_m`` gives each side its own period (the count of positive or negative
jumps) and ratio ``1/|q|``; a negative ``d_m`` makes the two sides alternate with period ``N - 1`` and ratio
``1/q²``, the negative side lagging by half a step.
"""

from __future__ import annotations

import enum
import logging
from typing import TYPE_CHECKING, Literal, NamedTuple

from selfspec.errors import InsufficientDataError
from selfspec.settings import DEFAULT_SETTINGS, Settings

if TYPE_CHECKING:
    from selfspec.pencil import EigenList
    from selfspec.selfsim import StructureReport

logger = logging.getLogger(__name__)

Side = Literal["positive", "negative"]


class Regime(enum.Enum):
    """Asymptotic regime of one side of the spectrum."""

    POSITIVE_GEOMETRIC = "positive-geometric"
    NEGATIVE_GEOMETRIC = "negative-geometric"
    ALTERNATING = "alternating"
    UNSUPPORTED = "unsupported"


class SideLaw(NamedTuple):
    """Growth law of the eigenvalues on one side of zero.

    Attributes:
        side: ``"positive"`` or ``"negative"``.
        regime: The regime the law belongs to.
        period: Number of residue classes.
        offset: Eigenvalues on this side that precede the classes.
        power: Exponent of ``|q|`` gained per period.
        shift: Extra exponent of ``|q|`` common to every term.
        q_abs: ``|a_m^(2n-1) d_m|``.
    """

    side: Side
    regime: Regime
    period: int
    offset: int
    power: int
    shift: int
    q_abs: float

    @property
    def ratio(self) -> float:
        """Predicted growth factor per period."""
        return self.q_abs ** (-self.power)

    @property
    def sign(self) -> int:
        """``+1`` for the positive side, ``-1`` for the negative one."""
        return 1 if self.side == "positive" else -1

    def index(self, l: int, k: int) -> int:  # noqa: E741
        """Signed eigenvalue index of residue class *l* (1-based) in period *k* (0-based)."""
        return self.sign * (self.offset + l + k * self.period)

    def normalize(self, value: float, k: int) -> float:
        """Scale ``|value|`` by ``|q|^(power * k + shift)``."""
        return abs(value) * self.q_abs ** (self.power * k + self.shift)

    def complete_periods(self, available: int) -> int:
        """How many full periods *available* eigenvalues cover."""
        return max(0, (available - self.offset) // self.period)

    def position(self, index: int) -> tuple[int, int] | None:
        """Inverse of :meth:`index`: ``(l, k)`` for an unsigned index, or ``None`` before the classes start."""
        rest = index - self.offset - 1
        if rest < 0:
            return None
        k, l0 = divmod(rest, self.period)
        return l0 + 1, k


class RegimeDescriptor(NamedTuple):
    """Regime of a structure together with one law per side that has asymptotics.

    Attributes:
        regime: Overall regime; for ``d_m > 0`` with both sides active this is the positive side's.
        laws: Side laws, positive side first.
        q: ``a_m^(2n-1) d_m`` (signed).
    """

    regime: Regime
    laws: tuple[SideLaw, ...]
    q: float

    def law(self, side: Side) -> SideLaw | None:
        """Law of *side*, or ``None`` when that side has no asymptotic classes."""
        return next((law for law in self.laws if law.side == side), None)


class SideAsymptotics(NamedTuple):
    """Coefficient estimates for one side.

    Attributes:
        law: The side law used to normalize.
        tau: Deepest normalized value per residue class.
        normalized: Normalized values per class, indexed by ``k``.
        residuals: Relative changes between successive normalized values per class.
        converged: Whether every final residual is below the convergence threshold.
    """

    law: SideLaw
    tau: tuple[float, ...]
    normalized: tuple[tuple[float, ...], ...]
    residuals: tuple[tuple[float, ...], ...]
    converged: bool

    @property
    def period(self) -> int:
        """Number of residue classes."""
        return self.law.period

    @property
    def ratio(self) -> float:
        """Growth factor per period."""
        return self.law.ratio


class AsymptoticsReport(NamedTuple):
    """Asymptotic analysis of a computed spectrum.

    Attributes:
        regime: Overall regime.
        sides: Estimates for every side that had eigenvalues; empty for an unsupported regime.
        eigenvalues: The analysed spectrum.
    """

    regime: Regime
    sides: tuple[SideAsymptotics, ...]
    eigenvalues: EigenList

    def side(self, side: Side) -> SideAsymptotics | None:
        """Estimates for *side*, if it was analysed."""
        return next((s for s in self.sides if s.law.side == side), None)

    @property
    def converged(self) -> bool:
        """Whether every analysed side converged."""
        return bool(self.sides) and all(s.converged for s in self.sides)


class GeometricDiagnostics(NamedTuple):
    """Successive ratios of one residue class against the predicted factor.

    Attributes:
        side: Side of the spectrum.
        l: Residue class.
        ratios: ``λ_(l + (k+1) period) / λ_(l + k period)`` for each available ``k``.
        deviations: ``|ratio / predicted - 1|`` for each ratio.
    """

    side: Side
    l: int
    ratios: tuple[float, ...]
    deviations: tuple[float, ...]


def classify(s: StructureReport, d_m_sign: int | None = None) -> RegimeDescriptor:
    """Derive the per-side growth laws from a structure report.

    Args:
        s: Structure report of the similarity parameters.
        d_m_sign: Sign of ``d_m``; taken from ``s.ratio_q`` when omitted.

    Example:
        >>> from selfspec.selfsim import structure, validate
        >>> params = validate(n=2, a=[1 / 3] * 3, beta=[0, 2 / 3, 1], d=[0, 0, 0.5])
        >>> desc = classify(structure(params))
        >>> desc.regime.value, [(law.side, law.period, round(law.ratio, 9)) for law in desc.laws]
        ('positive-geometric', [('positive', 2, 54.0)])
    """
    sign = d_m_sign if d_m_sign is not None else (1 if s.ratio_q > 0 else -1)
    q_abs = abs(s.ratio_q)
    if not s.nondegenerate:
        return RegimeDescriptor(Regime.UNSUPPORTED, (), s.ratio_q)
    if sign < 0:
        period = s.z_plus + s.z_minus
        laws = (
            SideLaw("positive", Regime.ALTERNATING, period, 0, 2, 0, q_abs),
            SideLaw("negative", Regime.ALTERNATING, period, s.z_minus, 2, 1, q_abs),
        )
        return RegimeDescriptor(Regime.ALTERNATING, laws, s.ratio_q)
    laws_list: list[SideLaw] = []
    if s.z_plus > 0:
        laws_list.append(SideLaw("positive", Regime.POSITIVE_GEOMETRIC, s.z_plus, 0, 1, 0, q_abs))
    if s.z_minus > 0:
        laws_list.append(SideLaw("negative", Regime.NEGATIVE_GEOMETRIC, s.z_minus, 0, 1, 0, q_abs))
    return RegimeDescriptor(laws_list[0].regime, tuple(laws_list), s.ratio_q)


def _side_values(eigs: EigenList, side: Side) -> tuple[float, ...]:
    return eigs.positive if side == "positive" else eigs.negative


def _class_series(values: tuple[float, ...], law: SideLaw, l: int, periods: int) -> list[float]:  # noqa: E741
    return [values[abs(law.index(l, k)) - 1] for k in range(periods)]


def estimate_tau(
    eigs: EigenList, descriptor: RegimeDescriptor, *, settings: Settings = DEFAULT_SETTINGS
) -> AsymptoticsReport:
    """Estimate the coefficients ``τ_l`` on every side that carries eigenvalues.

    ``τ_l`` is the normalized value of the deepest complete period; no extrapolation is attempted.

    Args:
        eigs: Computed spectrum.
        descriptor: Result of :func:`classify`.
        settings: Supplies the convergence threshold.

    Returns:
        The report; for an unsupported regime it carries the raw spectrum and no estimates.

    Raises:
        InsufficientDataError: When a side with eigenvalues covers fewer than three complete periods, or no side has
            eigenvalues at all.
    """
    if descriptor.regime is Regime.UNSUPPORTED:
        return AsymptoticsReport(Regime.UNSUPPORTED, (), eigs)
    sides: list[SideAsymptotics] = []
    for law in descriptor.laws:
        values = _side_values(eigs, law.side)
        if not values:
            continue
        periods = law.complete_periods(len(values))
        if periods < 3:
            raise InsufficientDataError(
                f"{law.side} side covers {periods} complete periods of {law.period}; at least 3 are needed",
                details={"side": law.side, "periods": periods, "available": len(values)},
            )
        normalized: list[tuple[float, ...]] = []
        residuals: list[tuple[float, ...]] = []
        for l in range(1, law.period + 1):  # noqa: E741
            series = _class_series(values, law, l, periods)
            norm = tuple(law.normalize(v, k) for k, v in enumerate(series))
            normalized.append(norm)
            residuals.append(tuple(abs(norm[k] - norm[k - 1]) / norm[k] for k in range(1, len(norm))))
        converged = all(res[-1] < settings.converged_threshold for res in residuals)
        tau = tuple(norm[-1] for norm in normalized)
        logger.info("%s side: tau=%s converged=%s", law.side, ", ".join(f"{t:.6g}" for t in tau), converged)
        sides.append(SideAsymptotics(law, tau, tuple(normalized), tuple(residuals), converged))
    if not sides:
        raise InsufficientDataError("No eigenvalues on any side with asymptotic classes")
    return AsymptoticsReport(descriptor.regime, tuple(sides), eigs)


def geometric_check(eigs: EigenList, descriptor: RegimeDescriptor) -> tuple[GeometricDiagnostics, ...]:
    """Compare successive same-class eigenvalue ratios with the predicted factor.

    Raises:
        InsufficientDataError: When a side with eigenvalues covers fewer than two complete periods, or nothing can be
            checked.
    """
    out: list[GeometricDiagnostics] = []
    for law in descriptor.laws:
        values = _side_values(eigs, law.side)
        if not values:
            continue
        periods = law.complete_periods(len(values))
        if periods < 2:
            raise InsufficientDataError(
                f"{law.side} side covers {periods} complete periods; at least 2 are needed",
                details={"side": law.side, "periods": periods},
            )
        predicted = law.ratio
        for l in range(1, law.period + 1):  # noqa: E741
            series = _class_series(values, law, l, periods)
            ratios = tuple(series[k + 1] / series[k] for k in range(periods - 1))
            out.append(GeometricDiagnostics(law.side, l, ratios, tuple(abs(r / predicted - 1.0) for r in ratios)))
    if not out:
        raise InsufficientDataError("No eigenvalues to check against a growth law")
    return tuple(out)
