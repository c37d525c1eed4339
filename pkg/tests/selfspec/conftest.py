from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np
import pytest
from ruamel.yaml import YAML

from selfspec import (
    AtomicMeasure,
    BandedSymmetricMatrix,
    SelfSpecError,
    SimilarityParams,
    SymmetricPencil,
    build_space,
    spectrum,
    validate,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from pathlib import Path

THIRDS = (1 / 3, 1 / 3, 1 / 3)

# -- Parameter fixtures ----------------------------------------------------------


@pytest.fixture
def positive_params() -> SimilarityParams:
    """Positive jumps only: beta=(0, 2/3, 1), d_3=1/2."""
    return validate(n=2, a=THIRDS, beta=(0, 2 / 3, 1), d=(0, 0, 0.5))


@pytest.fixture
def mixed_params() -> SimilarityParams:
    """One jump of each sign: beta=(0, -1, 0), d_3=1/2."""
    return validate(n=2, a=THIRDS, beta=(0, -1, 0), d=(0, 0, 0.5))


@pytest.fixture
def alternating_params() -> SimilarityParams:
    """beta=(0, -1, 0), d_3=-1/2: the sides alternate."""
    return validate(n=2, a=THIRDS, beta=(0, -1, 0), d=(0, 0, -0.5))


# -- Builders ----------------------------------------------------------------------


def diagonal_pencil(k: Sequence[float], m: Sequence[float]) -> SymmetricPencil:
    """Pencil with diagonal ``K`` and ``M``; its eigenvalues are ``k_i / m_i`` for nonzero ``m_i``."""
    return SymmetricPencil.create(
        BandedSymmetricMatrix.from_dense(np.diag(np.asarray(k, dtype=float)), 0),
        BandedSymmetricMatrix.from_dense(np.diag(np.asarray(m, dtype=float)), 0),
    )


def spline_eigenvalues(n: int, positions: Sequence[float], weights: Sequence[float]) -> list[float]:
    """Every eigenvalue of the spline pencil of an atomic measure, ascending."""
    mu = AtomicMeasure.of(positions, weights)
    pencil = SymmetricPencil.from_measure(build_space(n, mu.positions), mu)
    eigs = spectrum(pencil, mu.positive_count, mu.negative_count, 1e-12)
    return sorted(eigs.negative) + list(eigs.positive)


# -- Assertion helpers -------------------------------------------------------------


def assert_rel(actual: float, expected: float, tol: float) -> None:
    """Assert ``|actual - expected| <= tol * |expected|``."""
    dev = abs(actual - expected) / abs(expected)
    assert dev <= tol, f"{actual!r} deviates from {expected!r} by {dev:.3e} (tolerance {tol:g})"


def assert_selfspec_error(fn: Callable[..., Any], *args: Any, kind: str, **kwargs: Any) -> SelfSpecError:
    """Assert that ``fn(*args, **kwargs)`` raises a SelfSpecError of the given kind."""
    with pytest.raises(SelfSpecError) as exc_info:
        fn(*args, **kwargs)
    assert exc_info.value.kind == kind, f"expected {kind}, got {exc_info.value.kind}: {exc_info.value.message}"
    assert exc_info.value.message
    return exc_info.value


def load_yaml_cases(cases_dir: Path) -> list[dict[str, Any]]:
    """Load all YAML case entries from ``*.yaml`` files in *cases_dir*.

    Each YAML file must be a top-level list of mappings.  All entries from every
    file are concatenated into a single flat list, sorted by filename.
    """
    yaml = YAML(typ="safe")
    cases: list[dict[str, Any]] = []
    for yaml_file in sorted(cases_dir.glob("*.yaml")):
        raw = yaml.load(yaml_file.read_text())  # pyright: ignore[reportUnknownMemberType]
        if not raw:
            continue
        if not isinstance(raw, list):
            raise AssertionError(f"YAML file {yaml_file} must contain a top-level list of cases")
        entries: list[dict[str, Any]] = []
        for entry in raw:  # pyright: ignore[reportUnknownVariableType]
            assert isinstance(entry, dict), f"Each YAML entry in {yaml_file} must be a mapping"
            entries.append(entry)  # pyright: ignore[reportUnknownArgumentType]
        cases.extend(entries)
    return cases
