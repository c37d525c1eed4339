"""Benchmark Walkthrough: interactive tour of the three reference weights."""

from __future__ import annotations

from typing import TYPE_CHECKING

import marimo

if TYPE_CHECKING:
    import types
    from collections.abc import Callable, Mapping

    from selfspec import AtomicMeasure, RegimeDescriptor, StructureReport
    from selfspec.cli.pipeline import SolveResult
    from selfspec.cli.presets import TablePreset

__generated_with = "0.19.11"
app = marimo.App()


@app.cell
def _(mo: types.ModuleType):
    mo.md("""
    # Benchmark Walkthrough

    Recipes that take the three reference weights (fourth order, three branches of
    length 1/3) through **selfspec**: structure analysis, the inertia-bisection
    solver, the asymptotic coefficients, and an independent check against the
    Green kernel.

    **How to use this notebook:**

    - `marimo run recipes/table_walkthrough.py`: read-only app mode
    - `marimo edit recipes/table_walkthrough.py`: interactive editing mode (change the depth, see results update)
    """)
    return


@app.cell
def _():
    import marimo as mo

    from selfspec import AtomicMeasure, classify, estimate_tau, structure
    from selfspec.cli.pipeline import solve_at_depth
    from selfspec.cli.presets import PRESETS
    from selfspec.oracle import green_spectrum

    return AtomicMeasure, PRESETS, classify, estimate_tau, green_spectrum, mo, solve_at_depth, structure


@app.cell
def _(
    PRESETS: Mapping[int, TablePreset],
    classify: Callable[[StructureReport], RegimeDescriptor],
    mo: types.ModuleType,
    structure: Callable[..., StructureReport],
):
    # --- Recipe: Structure of each weight ---
    _rows: list[str] = []
    for _id, _preset in sorted(PRESETS.items()):
        _report = structure(_preset.config.params())
        _desc = classify(_report)
        _laws = ", ".join(f"{law.side} (period {law.period}, ratio {law.ratio:.0f})" for law in _desc.laws)
        _zeta = ", ".join(f"{z:+.3f}" for z in _report.zeta)
        _rows.append(f"| {_id} | {_zeta} | {_report.z_plus} | {_report.z_minus} | `{_desc.regime.value}` | {_laws} |")

    mo.md(
        """
        ## Recipe 1: Structure Reports

        `structure()` computes the first-level jumps; `classify()` turns their signs
        and the sign of the scaling term into one growth law per side.

        | Table | Jumps | Z+ | Z- | Regime | Laws |
        |---|---|---|---|---|---|
        """
        + "\n".join(_rows)
    )
    return


@app.cell
def _(
    PRESETS: Mapping[int, TablePreset],
    mo: types.ModuleType,
    solve_at_depth: Callable[..., SolveResult],
):
    # --- Recipe: Eigenvalues settle as the depth grows ---
    _config = PRESETS[1].config
    _params = _config.params()
    _lines: list[str] = []
    for _depth in (4, 6, 8, 10):
        _result = solve_at_depth(_params, _depth, 4, 0, 1e-10)
        _values = " | ".join(f"{v:.6g}" for v in _result.eigs.positive)
        _lines.append(f"| {_depth} | {_result.atom_count} | {_values} |")

    mo.md(
        """
        ## Recipe 2: Refinement Depth

        The first four positive eigenvalues of the positive-jump weight, computed on
        successively deeper refinements. Deeper levels add only small jumps, so the
        low eigenvalues stop moving after a few levels.

        | Depth | Atoms | λ1 | λ2 | λ3 | λ4 |
        |---|---|---|---|---|---|
        """
        + "\n".join(_lines)
    )
    return


@app.cell
def _(
    PRESETS: Mapping[int, TablePreset],
    estimate_tau: Callable[..., object],
    mo: types.ModuleType,
    solve_at_depth: Callable[..., SolveResult],
):
    # --- Recipe: Asymptotic coefficients ---
    _preset = PRESETS[3]
    _result = solve_at_depth(_preset.config.params(), 14, 6, 7, 1e-10)
    _report = estimate_tau(_result.eigs, _result.descriptor)
    _rows = [
        f"| {side.law.side} | {l} | {tau:.2f} | {side.residuals[l - 1][-1]:.1e} |"
        for side in _report.sides  # pyright: ignore[reportAttributeAccessIssue]
        for l, tau in enumerate(side.tau, start=1)  # noqa: E741
    ]

    mo.md(
        """
        ## Recipe 3: Coefficients of the Alternating Weight

        With a negative scaling term both sides share period 2 and grow by 54² per
        period; the negative side starts one eigenvalue later. `estimate_tau()`
        normalizes each residue class and reports its deepest value.

        | Side | Class | τ | Last residual |
        |---|---|---|---|
        """
        + "\n".join(_rows)
    )
    return


@app.cell
def _(
    AtomicMeasure: type[AtomicMeasure],
    green_spectrum: Callable[..., object],
    mo: types.ModuleType,
):
    # --- Recipe: Cross-check with the Green kernel ---
    from selfspec import SymmetricPencil as _SymmetricPencil
    from selfspec import build_space as _build_space
    from selfspec import spectrum as _spectrum

    _mu = AtomicMeasure.of([0.2, 0.45, 0.7], [1.0, -2.0, 0.5])
    _pencil = _SymmetricPencil.from_measure(_build_space(2, _mu.positions), _mu)
    _eigs = _spectrum(_pencil, _mu.positive_count, _mu.negative_count, 1e-12)
    _spline = sorted(_eigs.negative) + list(_eigs.positive)
    _green = green_spectrum(2, _mu).tolist()  # pyright: ignore[reportAttributeAccessIssue]
    _rows = "\n".join(f"| {s:.10g} | {g:.10g} | {abs(s - g) / abs(g):.1e} |" for s, g in zip(_spline, _green))

    mo.md(
        f"""
        ## Recipe 4: Spline Path against Green Collocation

        For an atomic weight the spline Galerkin pencil is exact, so its
        eigenvalues agree with the collocation spectrum of the Green kernel.

        | Spline | Green | Relative deviation |
        |---|---|---|
        {_rows}
        """
    )
    return


if __name__ == "__main__":
    app.run()
