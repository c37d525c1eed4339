"""Command-line interface: ``selfspec {analyze,solve,asympt,reproduce-table,verify}``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import TYPE_CHECKING

from selfspec.cli.commands import (
    ExitCode,
    cmd_analyze,
    cmd_asympt,
    cmd_reproduce_table,
    cmd_solve,
    cmd_verify,
)
from selfspec.cli.config import JobConfig, load_config, parse_depth, parse_number
from selfspec.cli.presets import PRESETS
from selfspec.errors import (
    DiscretizationError,
    InsufficientDataError,
    OracleError,
    ParameterError,
    SelfSpecError,
    SingularShiftError,
    SpectrumExhaustedError,
)
from selfspec.oracle import SUITES

if TYPE_CHECKING:
    from collections.abc import Sequence

__all__ = ["ExitCode", "JobConfig", "build_parser", "load_config", "main"]

logger = logging.getLogger(__name__)


def _depth_arg(value: str) -> int | str:
    try:
        return parse_depth(value)
    except ParameterError as e:
        raise argparse.ArgumentTypeError(e.message) from None


def _number_arg(value: str) -> float:
    try:
        return parse_number(value, "--tol")
    except ParameterError as e:
        raise argparse.ArgumentTypeError(e.message) from None


def _job_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", required=True, help="JSON job configuration")
    parent.add_argument("--depth", type=_depth_arg, help="refinement depth or 'auto'")
    parent.add_argument("--pos", type=int, help="number of positive eigenvalues")
    parent.add_argument("--neg", type=int, help="number of negative eigenvalues")
    parent.add_argument("--tol", type=_number_arg, help="relative bisection tolerance")
    parent.add_argument("--format", choices=("csv", "text"), help="output format")
    parent.add_argument("--force", action="store_true", default=None, help="solve even for a degenerate structure")
    parent.add_argument("--output", help="output path ('-' for standard output)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """The argument parser for :func:`main`."""
    parser = argparse.ArgumentParser(
        prog="selfspec", description="Spectra of high-order boundary problems with self-similar weights."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)
    job = _job_options()
    sub.add_parser("analyze", parents=[job], help="print the structure report")
    sub.add_parser("solve", parents=[job], help="compute eigenvalues")
    sub.add_parser("asympt", parents=[job], help="estimate the asymptotic coefficients")
    table = sub.add_parser("reproduce-table", help="recompute a reference table")
    table.add_argument("table", type=int, choices=sorted(PRESETS))
    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("suite", choices=sorted(SUITES))
    verify.add_argument("--seed", type=int, default=0, help="random seed")
    verify.add_argument("--size", type=int, help="number of random instances")
    return parser


def _job(args: argparse.Namespace) -> JobConfig:
    config = load_config(args.config)
    overrides = {
        "depth": args.depth,
        "pos_count": args.pos,
        "neg_count": args.neg,
        "rel_tol": args.tol,
        "format": args.format,
        "force": args.force,
        "output": args.output,
    }
    config = config._replace(**{key: value for key, value in overrides.items() if value is not None})
    if config.pos_count < 0 or config.neg_count < 0:
        raise ParameterError("Eigenvalue counts must be nonnegative", kind="InvalidConfig")
    return config


def _dispatch(args: argparse.Namespace) -> ExitCode:
    out, err = sys.stdout, sys.stderr
    if args.command == "reproduce-table":
        return cmd_reproduce_table(args.table, out, err)
    if args.command == "verify":
        return cmd_verify(args.suite, out, err, seed=args.seed, size=args.size)
    config = _job(args)
    if args.command == "analyze":
        return cmd_analyze(config, out)
    if args.command == "solve":
        return cmd_solve(config, out, err)
    return cmd_asympt(config, out, err)


def _exit_code(e: SelfSpecError) -> ExitCode:
    if isinstance(e, (ParameterError, InsufficientDataError)):
        return ExitCode.INVALID_PARAMETERS
    if isinstance(e, SpectrumExhaustedError):
        return ExitCode.SPECTRUM_EXHAUSTED
    if isinstance(e, (DiscretizationError, SingularShiftError)):
        return ExitCode.DEGENERATE
    if isinstance(e, OracleError):
        return ExitCode.VERIFICATION_FAILED
    return ExitCode.FAILURE


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return int(_dispatch(args))
    except SelfSpecError as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return int(_exit_code(e))
