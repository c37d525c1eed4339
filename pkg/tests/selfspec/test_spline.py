"""Tests for the clamped spline space, basis evaluation and pencil assembly."""

from __future__ import annotations

import numpy as np
import pytest

from selfspec import (
    AtomicMeasure,
    assemble_stiffness,
    assemble_weight,
    build_space,
    eval_basis,
    quadrature_points,
)
from selfspec.spline import SplineSpace

from .conftest import assert_selfspec_error


class TestBuildSpace:
    @pytest.mark.parametrize(("n", "degree"), [(1, 1), (2, 3), (3, 5)])
    def test_degree_and_knot_vector(self, n: int, degree: int):
        space = build_space(n, [0.25, 0.5, 0.75])
        assert space.degree == degree
        assert space.knot_vector[: degree + 1] == (0.0,) * (degree + 1)
        assert space.knot_vector[-(degree + 1) :] == (1.0,) * (degree + 1)
        assert space.full_dim == space.dim + 2 * n

    def test_dim_equals_interior_knots(self):
        assert build_space(2, [0.1, 0.2, 0.3, 0.9]).dim == 4

    @pytest.mark.parametrize(("n", "knots", "bandwidth"), [(1, 5, 1), (2, 5, 3), (3, 3, 2), (2, 1, 0)])
    def test_bandwidth(self, n: int, knots: int, bandwidth: int):
        space = build_space(n, np.linspace(0, 1, knots + 2)[1:-1].tolist())
        assert space.bandwidth == bandwidth

    def test_empty(self):
        assert_selfspec_error(build_space, 2, [], kind="EmptySpace")

    @pytest.mark.parametrize("knots", [[0.5, 0.5], [0.6, 0.4], [0.0, 0.5], [0.5, 1.0], [0.5, 0.5 + 1e-14]])
    def test_knot_collision(self, knots: list[float]):
        assert_selfspec_error(build_space, 1, knots, kind="KnotCollision")

    def test_bad_n(self):
        with pytest.raises(ValueError, match="positive"):
            build_space(0, [0.5])


class TestEvalBasis:
    def test_hat_function(self):
        space = build_space(1, [0.5])
        assert eval_basis(space, 0.5).values.tolist() == [1.0]
        assert eval_basis(space, 0.25).to_dense(1) == pytest.approx([0.5])
        assert eval_basis(space, 0.75, 1).to_dense(1) == pytest.approx([-2.0])

    def test_clamped_at_ends(self):
        space = build_space(2, [0.2, 0.5, 0.7])
        for r in range(2):
            assert np.allclose(eval_basis(space, 0.0, r).to_dense(space.dim), 0.0)
            assert np.allclose(eval_basis(space, 1.0, r).to_dense(space.dim), 0.0)

    def test_at_most_degree_plus_one_nonzeros(self):
        space = build_space(3, np.linspace(0, 1, 12)[1:-1].tolist())
        for x in np.linspace(0, 1, 37):
            assert len(eval_basis(space, float(x)).values) <= space.degree + 1

    def test_derivative_matches_finite_difference(self):
        space = build_space(2, [0.3, 0.45, 0.6])
        x, h = 0.52, 1e-6
        fd = (eval_basis(space, x + h).to_dense(3) - eval_basis(space, x - h).to_dense(3)) / (2 * h)
        assert eval_basis(space, x, 1).to_dense(3) == pytest.approx(fd, abs=1e-6)

    def test_cubic_values_nonnegative(self):
        space = build_space(2, [0.25, 0.5, 0.75])
        for x in np.linspace(0, 1, 41):
            assert (eval_basis(space, float(x)).values >= -1e-15).all()

    def test_derivative_too_high(self):
        assert_selfspec_error(eval_basis, build_space(2, [0.5]), 0.5, 4, kind="DerivativeOrderTooHigh")

    def test_highest_derivative_allowed(self):
        eval_basis(build_space(2, [0.5]), 0.3, 3)

    def test_outside_interval(self):
        with pytest.raises(ValueError, match="outside"):
            eval_basis(build_space(1, [0.5]), 1.5)


class TestStiffness:
    def test_n1_uniform(self):
        k = assemble_stiffness(build_space(1, [1 / 3, 2 / 3])).to_dense()
        assert k == pytest.approx(np.array([[6.0, -3.0], [-3.0, 6.0]]))

    def test_n1_single_knot(self):
        assert assemble_stiffness(build_space(1, [0.25])).to_dense() == pytest.approx(np.array([[16 / 3]]))

    def test_n2_single_midpoint_knot(self):
        # The single reduced cubic is 2x^2(3 - 4x) on [0, 1/2], mirrored: value 1/2 at the knot, energy 192/4.
        space = build_space(2, [0.5])
        assert eval_basis(space, 0.5).values.tolist() == pytest.approx([0.5])
        assert assemble_stiffness(space).to_dense() == pytest.approx(np.array([[48.0]]))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_positive_definite(self, n: int):
        rng = np.random.default_rng(n)
        knots = np.sort(rng.uniform(0.05, 0.95, size=9)).tolist()
        assert assemble_stiffness(build_space(n, knots)).is_positive_definite()

    def test_quadrature_is_exact(self):
        space = build_space(3, [0.1, 0.35, 0.4, 0.8])
        default = assemble_stiffness(space).to_dense()
        more = assemble_stiffness(space, points=quadrature_points(3) + 3).to_dense()
        assert default == pytest.approx(more, rel=1e-12, abs=1e-9)

    def test_quadrature_points(self):
        assert [quadrature_points(n) for n in (1, 2, 3)] == [2, 3, 4]


class TestWeight:
    def test_diagonal_for_hats(self):
        space = build_space(1, [1 / 3, 2 / 3])
        m = assemble_weight(space, AtomicMeasure.of([1 / 3, 2 / 3], [2 / 3, 1 / 3])).to_dense()
        assert m == pytest.approx(np.diag([2 / 3, 1 / 3]))

    def test_rank_and_inertia(self):
        space = build_space(2, [0.2, 0.4, 0.6, 0.8])
        mu = AtomicMeasure.of([0.2, 0.6], [1.5, -0.5])
        eig = np.linalg.eigvalsh(assemble_weight(space, mu).to_dense())
        assert int(np.sum(eig > 1e-12)) == 1
        assert int(np.sum(eig < -1e-12)) == 1

    def test_atom_off_knot(self):
        space = build_space(1, [0.5])
        assert_selfspec_error(assemble_weight, space, AtomicMeasure.of([0.3], [1.0]), kind="AtomOffKnot")

    def test_quadratic_form(self):
        space: SplineSpace = build_space(2, [0.25, 0.5, 0.75])
        mu = AtomicMeasure.of([0.25, 0.75], [2.0, -1.0])
        c = np.array([0.3, -1.2, 0.7])
        expected = sum(w * float(eval_basis(space, x).to_dense(3) @ c) ** 2 for x, w in zip(mu.positions, mu.weights))
        m = assemble_weight(space, mu).to_dense()
        assert float(c @ m @ c) == pytest.approx(expected)
