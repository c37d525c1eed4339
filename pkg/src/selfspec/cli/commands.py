"""Subcommand implementations. Each returns an exit code and writes its report to a text stream."""

from __future__ import annotations

import csv
import enum
import io
import logging
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

from selfspec.asympt import Regime, RegimeDescriptor, classify, estimate_tau, geometric_check
from selfspec.cli.output import eigen_rows, format_number, render_rows, render_table
from selfspec.cli.pipeline import is_degenerate, solve
from selfspec.cli.presets import NORMALIZED_TOL, PRESETS, RAW_TOL
from selfspec.errors import ParameterError
from selfspec.oracle import run_suite
from selfspec.selfsim import structure
from selfspec.settings import DEFAULT_SETTINGS, Settings

if TYPE_CHECKING:
    from collections.abc import Sequence
    from typing import TextIO

    from selfspec.cli.config import JobConfig, OutputFormat

logger = logging.getLogger(__name__)

_ASYMPT_PERIODS = 4


class ExitCode(enum.IntEnum):
    """Process exit codes."""

    OK = 0
    FAILURE = 1
    INVALID_PARAMETERS = 2
    DEGENERATE = 3
    SPECTRUM_EXHAUSTED = 4
    VERIFICATION_FAILED = 5


def format_exact(value: float) -> str:
    """Render *value* as a small fraction when it is one to double precision.

    Example:
        >>> format_exact(2 / 3), format_exact(1 / ((1 / 27) * 0.5)), format_exact(0.123456789)
        ('2/3', '54', '0.123456789')
    """
    frac = Fraction(value).limit_denominator(1000)
    if abs(float(frac) - value) <= 1e-12 * max(1.0, abs(value)):
        return str(frac)
    return f"{value:.15g}"


def _render(header: Sequence[str], body: Sequence[Sequence[str]], fmt: OutputFormat) -> str:
    if fmt == "text":
        return render_table(header, body)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(body)
    return buf.getvalue()


def _emit(text: str, config: JobConfig, out: TextIO) -> None:
    if config.output == "-":
        out.write(text)
        return
    Path(config.output).write_text(text, encoding="utf-8")
    logger.info("wrote %s", config.output)


def _regime_text(descriptor: RegimeDescriptor) -> str:
    if descriptor.regime is Regime.UNSUPPORTED:
        return "unsupported"
    parts = [f"{law.regime.value}(period {law.period})" for law in descriptor.laws]
    return ",".join(dict.fromkeys(parts))


def _ratio(descriptor: RegimeDescriptor) -> float:
    if descriptor.laws:
        return descriptor.laws[0].ratio
    return 1.0 / abs(descriptor.q)


def cmd_analyze(config: JobConfig, out: TextIO, *, settings: Settings = DEFAULT_SETTINGS) -> ExitCode:
    """Print the structure report: jumps, sign counts, regime, growth ratio and contraction factor."""
    report = structure(config.params(settings=settings), settings=settings)
    descriptor = classify(report)
    fields = [
        ("zeta", ",".join(format_exact(z) for z in report.zeta)),
        ("Z+", str(report.z_plus)),
        ("Z-", str(report.z_minus)),
        ("ratio", format_exact(_ratio(descriptor))),
        ("regime", _regime_text(descriptor)),
    ]
    negative = descriptor.law("negative")
    if descriptor.regime is Regime.ALTERNATING and negative is not None:
        fields.append(("neg_offset", str(negative.offset)))
    fields.append(("contraction", format_number(report.contraction_l2)))
    if config.format == "text":
        text = " ".join(f"{key}={value}" for key, value in fields) + "\n"
    else:
        text = _render(("field", "value"), fields, "csv")
    _emit(text, config, out)
    return ExitCode.OK


def _degenerate(config: JobConfig, descriptor: RegimeDescriptor, err: TextIO) -> bool:
    if is_degenerate(descriptor) and not config.force:
        err.write("error: degenerate structure (a first-level jump vanishes); rerun with --force for a raw spectrum\n")
        return True
    return False


def cmd_solve(
    config: JobConfig, out: TextIO, err: TextIO, *, settings: Settings = DEFAULT_SETTINGS
) -> ExitCode:
    """Compute the requested eigenvalues and print one row per eigenvalue."""
    descriptor = classify(structure(config.params(settings=settings), settings=settings))
    if _degenerate(config, descriptor, err):
        return ExitCode.DEGENERATE
    result = solve(config, settings=settings)
    logger.info("solved at depth %d (%d atoms, dim %d)", result.depth, result.atom_count, result.dim)
    _emit(render_rows(eigen_rows(result.eigs, result.descriptor), config.format), config, out)
    return ExitCode.OK


def _default_counts(config: JobConfig, descriptor: RegimeDescriptor) -> JobConfig:
    if config.pos_count or config.neg_count:
        return config
    counts = {law.side: law.offset + _ASYMPT_PERIODS * law.period for law in descriptor.laws}
    return config._replace(pos_count=counts.get("positive", 0), neg_count=counts.get("negative", 0))


def cmd_asympt(
    config: JobConfig, out: TextIO, err: TextIO, *, settings: Settings = DEFAULT_SETTINGS
) -> ExitCode:
    """Estimate the per-class coefficients and compare successive ratios with the predicted factor.

    Without explicit counts, four periods are requested on every side that has a law.
    """
    descriptor = classify(structure(config.params(settings=settings), settings=settings))
    if _degenerate(config, descriptor, err):
        return ExitCode.DEGENERATE
    result = solve(_default_counts(config, descriptor), settings=settings)
    report = estimate_tau(result.eigs, descriptor, settings=settings)
    deviations = {(g.side, g.l): g.deviations[-1] for g in geometric_check(result.eigs, descriptor)}
    body = [
        [
            side.law.side,
            str(l),
            str(side.period),
            format_exact(side.ratio),
            format_number(tau),
            format_number(side.residuals[l - 1][-1]),
            format_number(deviations[side.law.side, l]),
        ]
        for side in report.sides
        for l, tau in enumerate(side.tau, start=1)  # noqa: E741
    ]
    header = ("side", "l", "period", "ratio", "tau", "residual", "ratio_deviation")
    summary = f"regime={report.regime.value} depth={result.depth} converged={'yes' if report.converged else 'no'}\n"
    text = _render(header, body, config.format)
    _emit(summary + text if config.format == "text" else text, config, out)
    return ExitCode.OK


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def cmd_reproduce_table(
    table_id: int, out: TextIO, err: TextIO, *, settings: Settings = DEFAULT_SETTINGS
) -> ExitCode:
    """Recompute a reference table and print computed against published values.

    Succeeds when every raw value is within 1% and every normalized value within 0.5%.

    Raises:
        ParameterError: ``InvalidConfig`` for an unknown table number.
    """
    try:
        preset = PRESETS[table_id]
    except KeyError:
        raise ParameterError(
            f"Unknown table {table_id}; expected one of {sorted(PRESETS)}", kind="InvalidConfig"
        ) from None
    result = solve(preset.config, settings=settings)
    body: list[list[str]] = []
    first_failure: str | None = None
    for row in preset.rows:
        law = result.descriptor.law(row.side)
        assert law is not None
        index = law.index(row.l, row.k)
        value = result.eigs.by_index(index)
        normalized = law.normalize(value, row.k)
        raw_dev = _relative(abs(value), row.raw)
        norm_dev = _relative(normalized, row.normalized)
        passed = raw_dev <= RAW_TOL and norm_dev <= NORMALIZED_TOL
        if not passed and first_failure is None:
            first_failure = f"index {index} (l={row.l}, k={row.k})"
        body.append(
            [
                str(index),
                str(row.l),
                str(row.k),
                f"{abs(value):.6g}",
                f"{row.raw:.3g}",
                f"{raw_dev:.2e}",
                f"{normalized:.2f}",
                f"{row.normalized:.2f}",
                f"{norm_dev:.2e}",
                "PASS" if passed else "FAIL",
            ]
        )
    header = ("index", "l", "k", "|lambda|", "reference", "dev", "normalized", "reference", "dev", "status")
    out.write(f"table {preset.table_id}: {preset.title} (depth {result.depth}, dim {result.dim})\n")
    out.write(render_table(header, body))
    if first_failure is not None:
        err.write(f"error: table {preset.table_id} deviates at {first_failure}\n")
        return ExitCode.VERIFICATION_FAILED
    return ExitCode.OK


def cmd_verify(
    suite: str,
    out: TextIO,
    err: TextIO,
    *,
    seed: int = 0,
    size: int | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> ExitCode:
    """Run a property suite and print its counts, worst deviation and any failures."""
    report = run_suite(suite, seed=seed, size=size, settings=settings)
    out.write(
        f"suite={report.name} seed={seed} checks={report.checks} failures={len(report.failures)} "
        f"worst={report.worst_deviation:.3e} {'PASS' if report.passed else 'FAIL'}\n"
    )
    for failure in report.failures:
        err.write(f"  {failure}\n")
    return ExitCode.OK if report.passed else ExitCode.VERIFICATION_FAILED
