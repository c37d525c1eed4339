"""Orchestration of one job: parameters, refinement, assembly, spectrum."""

from __future__ import annotations

import logging
import math
from typing import NamedTuple

from selfspec.asympt import Regime, RegimeDescriptor, classify
from selfspec.cli.config import JobConfig
from selfspec.errors import SpectrumExhaustedError
from selfspec.pencil import EigenList, SymmetricPencil, spectrum
from selfspec.selfsim import SimilarityParams, StructureReport, atoms, refine, structure
from selfspec.settings import DEFAULT_SETTINGS, Settings
from selfspec.spline import build_space

logger = logging.getLogger(__name__)

_MIN_AUTO_DEPTH = 4


class SolveResult(NamedTuple):
    """A computed spectrum and how it was obtained.

    Attributes:
        params: Validated similarity parameters.
        structure: Structure report of *params*.
        descriptor: Asymptotic regime and side laws.
        depth: Refinement depth actually used.
        atom_count: Number of atoms of the refined measure.
        dim: Order of the Galerkin pencil.
        eigs: The requested eigenvalues.
    """

    params: SimilarityParams
    structure: StructureReport
    descriptor: RegimeDescriptor
    depth: int
    atom_count: int
    dim: int
    eigs: EigenList


def solve_at_depth(
    params: SimilarityParams,
    depth: int,
    pos_count: int,
    neg_count: int,
    rel_tol: float,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> SolveResult:
    """Refine to *depth*, assemble the pencil of the jump measure and extract the requested eigenvalues.

    Raises:
        SpectrumExhaustedError: When the refined measure has too few atoms of either sign (including none at all).
    """
    report = structure(params, settings=settings)
    mu = atoms(refine(params, depth, settings=settings), settings=settings)
    if mu.size == 0:
        raise SpectrumExhaustedError(
            f"Refinement at depth {depth} carries no atoms", available_positive=0, available_negative=0
        )
    space = build_space(params.n, mu.positions, settings=settings)
    pencil = SymmetricPencil.from_measure(space, mu, settings=settings)
    logger.debug("depth %d: %d atoms, dim %d", depth, mu.size, pencil.dim)
    eigs = spectrum(pencil, pos_count, neg_count, rel_tol, settings=settings)
    return SolveResult(params, report, classify(report), depth, mu.size, pencil.dim, eigs)


def levels_needed(report: StructureReport, pos_count: int, neg_count: int) -> int:
    """Similarity levels after which the requested counts are expected to exist.

    Each level adds ``Z+`` positive and ``Z-`` negative eigenvalues for ``d_m > 0``; for ``d_m < 0`` the signs swap
    from level to level, so two levels add ``N - 1`` of each.

    Example:
        >>> from selfspec.selfsim import structure, validate
        >>> params = validate(n=2, a=[1 / 3] * 3, beta=[0, 2 / 3, 1], d=[0, 0, 0.5])
        >>> levels_needed(structure(params), 8, 0)
        4
    """
    if report.ratio_q < 0:
        period = max(1, report.z_plus + report.z_minus)
        return max(2 * math.ceil(count / period) for count in (pos_count, neg_count))
    levels = 0
    for count, per_level in ((pos_count, report.z_plus), (neg_count, report.z_minus)):
        if count:
            levels = max(levels, math.ceil(count / max(1, per_level)))
    return levels


def _max_change(previous: EigenList, current: EigenList) -> float:
    pairs = list(zip(previous.positive, current.positive)) + list(zip(previous.negative, current.negative))
    return max((abs(b - a) / abs(b) for a, b in pairs), default=0.0)


def solve_auto(
    params: SimilarityParams,
    pos_count: int,
    neg_count: int,
    rel_tol: float,
    auto_depth_tol: float,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> SolveResult:
    """Increase the depth until every requested eigenvalue changes by less than *auto_depth_tol* between depths.

    Starts at ``max(4, levels_needed + 3)``. Depths whose measure cannot supply the requested counts are skipped.
    At ``settings.max_depth`` the last successful result is returned even if it has not settled.

    Raises:
        SpectrumExhaustedError: When no depth up to the cap supplies the requested counts.
    """
    report = structure(params, settings=settings)
    start = min(settings.max_depth, max(_MIN_AUTO_DEPTH, levels_needed(report, pos_count, neg_count) + 3))
    previous: SolveResult | None = None
    last_error: SpectrumExhaustedError | None = None
    for depth in range(start, settings.max_depth + 1):
        try:
            current = solve_at_depth(params, depth, pos_count, neg_count, rel_tol, settings=settings)
        except SpectrumExhaustedError as e:
            logger.debug("depth %d: %s", depth, e.message)
            last_error = e
            previous = None
            continue
        if previous is not None:
            change = _max_change(previous.eigs, current.eigs)
            logger.debug("depth %d: max relative change %.3e", depth, change)
            if change < auto_depth_tol:
                logger.info("eigenvalues settled at depth %d", depth)
                return current
        previous = current
    if previous is not None:
        logger.info("depth cap %d reached before the eigenvalues settled", settings.max_depth)
        return previous
    assert last_error is not None
    raise last_error


def solve(config: JobConfig, *, settings: Settings = DEFAULT_SETTINGS) -> SolveResult:
    """Run *config* at its explicit depth or in automatic mode."""
    params = config.params(settings=settings)
    if config.depth == "auto":
        return solve_auto(
            params, config.pos_count, config.neg_count, config.rel_tol, config.auto_depth_tol, settings=settings
        )
    return solve_at_depth(params, config.depth, config.pos_count, config.neg_count, config.rel_tol, settings=settings)


def is_degenerate(descriptor: RegimeDescriptor) -> bool:
    """Whether no asymptotic law applies."""
    return descriptor.regime is Regime.UNSUPPORTED
