"""Job configuration: a flat JSON document with exact fraction support."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal, NamedTuple, TypeAlias

from selfspec.errors import ParameterError
from selfspec.selfsim import SimilarityParams, validate
from selfspec.settings import DEFAULT_SETTINGS, Settings

OutputFormat: TypeAlias = Literal["csv", "text"]


class JobConfig(NamedTuple):
    """One solver job.

    Attributes:
        n: Half-order of the equation.
        N: Number of similarity branches.
        a: Branch lengths.
        beta: Additive terms.
        d: Scaling terms.
        depth: Refinement depth, or ``"auto"`` to refine until the eigenvalues settle.
        pos_count: Positive eigenvalues requested.
        neg_count: Negative eigenvalues requested.
        rel_tol: Relative bisection tolerance.
        auto_depth_tol: Relative eigenvalue change that ends automatic refinement.
        output: Output path, ``"-"`` for standard output.
        format: ``"csv"`` or ``"text"``.
        force: Solve even when no asymptotic law applies.
    """

    n: int
    N: int
    a: tuple[float, ...]
    beta: tuple[float, ...]
    d: tuple[float, ...]
    depth: int | Literal["auto"] = "auto"
    pos_count: int = 0
    neg_count: int = 0
    rel_tol: float = 1e-10
    auto_depth_tol: float = 1e-3
    output: str = "-"
    format: OutputFormat = "csv"
    force: bool = False

    def params(self, *, settings: Settings = DEFAULT_SETTINGS) -> SimilarityParams:
        """Validate the similarity parameters of this job."""
        return validate(n=self.n, a=self.a, beta=self.beta, d=self.d, settings=settings)


_FIELDS = frozenset(JobConfig._fields)


def parse_number(value: Any, field: str) -> float:
    """Read a JSON number or an exact ``"p/q"`` string as the nearest double.

    Example:
        >>> parse_number("1/3", "a") == 1 / 3
        True
    """
    if isinstance(value, bool):
        raise ParameterError(f"{field}: expected a number, got {value!r}", kind="InvalidConfig")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ParameterError(f"{field}: cannot read {value!r} as a number", kind="InvalidConfig")


def _integer(value: Any, field: str, *, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ParameterError(f"{field}: expected an integer >= {minimum}, got {value!r}", kind="InvalidConfig")
    return value


def _number_list(value: Any, field: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ParameterError(f"{field}: expected a list, got {type(value).__name__}", kind="InvalidConfig")
    return tuple(parse_number(item, f"{field}[{i}]") for i, item in enumerate(value))


def parse_depth(value: Any) -> int | Literal["auto"]:
    """Accept ``"auto"`` or an integer depth of at least 1 (also as a string)."""
    if value == "auto":
        return "auto"
    if isinstance(value, str) and value.strip().isdigit():
        value = int(value)
    return _integer(value, "depth", minimum=1)


def config_from_mapping(data: dict[str, Any]) -> JobConfig:
    """Build a :class:`JobConfig` from decoded JSON.

    Raises:
        ParameterError: ``InvalidConfig`` for unknown keys, missing parameters, or malformed values.
    """
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ParameterError(f"Unknown configuration keys: {', '.join(unknown)}", kind="InvalidConfig")
    missing = [key for key in ("n", "a", "beta", "d") if key not in data]
    if missing:
        raise ParameterError(f"Missing configuration keys: {', '.join(missing)}", kind="InvalidConfig")
    a = _number_list(data["a"], "a")
    big_n = _integer(data.get("N", len(a)), "N", minimum=2)
    if big_n != len(a):
        raise ParameterError(f"N={big_n} but a has {len(a)} entries", kind="InvalidConfig")
    fmt = data.get("format", "csv")
    if fmt not in ("csv", "text"):
        raise ParameterError(f"format: expected 'csv' or 'text', got {fmt!r}", kind="InvalidConfig")
    force = data.get("force", False)
    if not isinstance(force, bool):
        raise ParameterError(f"force: expected a boolean, got {force!r}", kind="InvalidConfig")
    output = data.get("output", "-")
    if not isinstance(output, str):
        raise ParameterError(f"output: expected a path, got {output!r}", kind="InvalidConfig")
    return JobConfig(
        n=_integer(data["n"], "n", minimum=1),
        N=big_n,
        a=a,
        beta=_number_list(data["beta"], "beta"),
        d=_number_list(data["d"], "d"),
        depth=parse_depth(data.get("depth", "auto")),
        pos_count=_integer(data.get("pos_count", 0), "pos_count", minimum=0),
        neg_count=_integer(data.get("neg_count", 0), "neg_count", minimum=0),
        rel_tol=parse_number(data.get("rel_tol", 1e-10), "rel_tol"),
        auto_depth_tol=parse_number(data.get("auto_depth_tol", 1e-3), "auto_depth_tol"),
        output=output,
        format=fmt,
        force=force,
    )


def load_config(path: str | Path) -> JobConfig:
    """Read a job configuration file.

    Raises:
        ParameterError: ``InvalidConfig`` when the file is missing, is not a JSON object, or fails validation.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParameterError(f"Cannot read configuration {path}: {e.strerror}", kind="InvalidConfig") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})", kind="InvalidConfig") from e
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: expected a JSON object", kind="InvalidConfig")
    return config_from_mapping(data)
