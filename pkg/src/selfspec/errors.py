"""Error handling for selfspec.

Provides the public :class:`SelfSpecError` exception family. Every failure the pipeline can diagnose (invalid
similarity parameters, degenerate discretizations, singular shifts, exhausted spectra, oracle breakdowns) is raised as
a subclass carrying a stable ``kind`` name, so callers can branch on the condition without parsing message strings.
"""

from __future__ import annotations

from typing import Any, Literal, TypeAlias

ErrorKind: TypeAlias = Literal[
    "SumNotOne",
    "NonPositiveLength",
    "NotZeroOrder",
    "NotContractive",
    "InvalidConfig",
    "DepthOverflow",
    "EmptySpace",
    "KnotCollision",
    "DerivativeOrderTooHigh",
    "AtomOffKnot",
    "SingularShift",
    "IndexBeyondSpectrum",
    "DimensionTooLarge",
    "InsufficientData",
    "IllConditioned",
    "SingularGram",
    "RankMismatch",
    "InsufficientPositiveSpectrum",
]


class SelfSpecError(Exception):
    """Structured error raised by every selfspec operation.

    The exception carries the diagnostic ``kind`` alongside the human-readable message. ``details`` holds whatever
    numbers make the failure reproducible (the offending sum, the shift that hit a zero pivot, the achievable
    eigenvalue counts, ...).

    Attributes:
        message: Human-readable error description.
        kind: Stable diagnostic name, e.g. ``"SumNotOne"`` or ``"SingularShift"``.
        details: Extra structured context, empty when there is none.

    Examples:
        Catch a validation failure and branch on its kind:

        >>> from selfspec import SelfSpecError, validate
        >>> try:
        ...     validate(n=2, a=[0.5, 0.25], beta=[0, 1], d=[0, 0.5])
        ... except SelfSpecError as e:
        ...     print(e.kind)
        SumNotOne
    """

    def __init__(self, message: str, *, kind: ErrorKind, details: dict[str, Any] | None = None) -> None:
        """Create a SelfSpecError.

        Args:
            message: Human-readable error description.
            kind: Stable diagnostic name.
            details: Extra structured context.
        """
        super().__init__(message)
        self.message = message
        self.kind: ErrorKind = kind
        self.details: dict[str, Any] = dict(details or {})

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class ParameterError(SelfSpecError):
    """Similarity parameters or a job configuration failed validation."""


class DiscretizationError(SelfSpecError):
    """A refinement, spline space, or assembled matrix could not be built."""


class SingularShiftError(SelfSpecError):
    """The shift ``lambda`` is numerically an eigenvalue of the pencil; the caller must perturb it.

    Attributes:
        shift: The offending shift.
    """

    def __init__(self, message: str, *, shift: float) -> None:
        """Create a SingularShiftError for *shift*."""
        super().__init__(message, kind="SingularShift", details={"shift": shift})
        self.shift = shift


class SpectrumExhaustedError(SelfSpecError):
    """The pencil has fewer eigenvalues on the requested side than were asked for.

    Attributes:
        available_positive: Number of positive eigenvalues the pencil has.
        available_negative: Number of negative eigenvalues the pencil has.
    """

    def __init__(self, message: str, *, available_positive: int, available_negative: int) -> None:
        """Create a SpectrumExhaustedError carrying the achievable counts."""
        super().__init__(
            message,
            kind="IndexBeyondSpectrum",
            details={"available_positive": available_positive, "available_negative": available_negative},
        )
        self.available_positive = available_positive
        self.available_negative = available_negative


class InsufficientDataError(SelfSpecError):
    """Too few eigenvalues were supplied to estimate asymptotic coefficients."""

    def __init__(self, message: str, *, details: dict[str, Any] | None = None) -> None:
        """Create an InsufficientDataError."""
        super().__init__(message, kind="InsufficientData", details=details)


class OracleError(SelfSpecError):
    """An independent verification path could not produce a result."""
