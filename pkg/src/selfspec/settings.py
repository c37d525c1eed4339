"""Numerical defaults shared by every stage of the pipeline."""

from __future__ import annotations

import dataclasses
from typing import Final


@dataclasses.dataclass(frozen=True, slots=True)
class Settings:
    """Tolerances and caps used across selfspec.

    Every public function that depends on one of these values accepts a ``settings=`` keyword; pass a modified copy
    (``dataclasses.replace(DEFAULT_SETTINGS, max_depth=20)``) to override.

    Attributes:
        sum_tol: Absolute tolerance on ``sum(a) == 1``.
        knot_merge_tol: Breakpoints closer than this are merged and their jumps summed.
        zero_jump_rel: Jumps below ``zero_jump_rel * max|beta|`` are exact zeros.
        max_depth: Refinement depth cap.
        pivot_rel_tol: A pivot below ``pivot_rel_tol * max|K - lambda M|`` signals a singular shift.
        rel_tol: Default relative bracket width for eigenvalue bisection.
        min_rel_tol: Smallest accepted ``rel_tol``.
        max_bisection_steps: Iteration cap for a single bisection.
        max_shift_retries: How often a singular shift is perturbed before giving up.
        converged_threshold: Relative change between the last two periods below which a tau estimate is converged.
        auto_depth_tol: Relative eigenvalue change between consecutive depths that stops auto-depth.
        dense_max_dim: Largest pencil the dense oracle path accepts.
        endpoint_tol: Source points closer than this to 0 or 1 make the Green kernel ill-conditioned.
        rank_tol: Relative threshold below which a dense eigenvalue counts as zero.
        lemma_slack: Relative slack allowed in the determinant-lemma inequalities.
    """

    sum_tol: float = 1e-12
    knot_merge_tol: float = 1e-13
    zero_jump_rel: float = 1e-14
    max_depth: int = 64
    pivot_rel_tol: float = 1e-14
    rel_tol: float = 1e-10
    min_rel_tol: float = 1e-14
    max_bisection_steps: int = 2000
    max_shift_retries: int = 8
    converged_threshold: float = 5e-3
    auto_depth_tol: float = 1e-3
    dense_max_dim: int = 200
    endpoint_tol: float = 1e-12
    rank_tol: float = 1e-12
    lemma_slack: float = 1e-9


DEFAULT_SETTINGS: Final = Settings()
