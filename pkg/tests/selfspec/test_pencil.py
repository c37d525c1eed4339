"""Tests for inertia counting, interval counts and bisection on the pencil ``K - λM``."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from selfspec import (
    DEFAULT_SETTINGS,
    AtomicMeasure,
    BandedSymmetricMatrix,
    SingularShiftError,
    SpectrumExhaustedError,
    SymmetricPencil,
    build_space,
    count_interval,
    eig_by_index,
    inertia,
    spectrum,
)

from selfspec.oracle import green_value

from .conftest import assert_rel, assert_selfspec_error, diagonal_pencil, spline_eigenvalues


@pytest.fixture
def four_values() -> SymmetricPencil:
    """Eigenvalues 1, 2 (positive) and -1, -4 (negative)."""
    return diagonal_pencil([1, 1, 1, 1], [1, 0.5, -1, -0.25])


class TestCreate:
    def test_counts_from_inertia_of_m(self, four_values: SymmetricPencil):
        assert (four_values.available_positive, four_values.available_negative) == (2, 2)

    def test_counts_ignore_kernel(self):
        p = diagonal_pencil([1, 1, 1], [1, 0, 0])
        assert (p.available_positive, p.available_negative) == (1, 0)

    def test_scale(self):
        p = diagonal_pencil([4, 9], [1, 1])
        assert p.scale == pytest.approx([0.5, 1 / 3])
        ks, _ = p.scaled()
        assert ks.diagonal() == pytest.approx([1.0, 1.0])

    def test_k_not_positive_definite(self):
        with pytest.raises(ValueError, match="positive definite"):
            diagonal_pencil([1, -1], [1, 1])

    def test_order_mismatch(self):
        with pytest.raises(ValueError, match="order"):
            SymmetricPencil.create(
                BandedSymmetricMatrix.from_dense(np.eye(2)), BandedSymmetricMatrix.from_dense(np.eye(3))
            )

    def test_from_measure_uses_weight_signs(self):
        mu = AtomicMeasure.of([0.2, 0.4, 0.6, 0.8], [1.0, -2.0, -0.1, 3.0])
        p = SymmetricPencil.from_measure(build_space(1, mu.positions), mu)
        assert (p.available_positive, p.available_negative) == (2, 2)
        assert p.dim == 4


class TestInertia:
    def test_counts_below_shift(self, four_values: SymmetricPencil):
        assert inertia(four_values, 0.5).neg_count == 0
        assert inertia(four_values, 1.5).neg_count == 1
        assert inertia(four_values, 3.0).neg_count == 2
        assert inertia(four_values, -2.0).neg_count == 1
        assert inertia(four_values, -5.0).neg_count == 2

    def test_singular_shift(self, four_values: SymmetricPencil):
        err = assert_selfspec_error(inertia, four_values, 1.0, kind="SingularShift")
        assert isinstance(err, SingularShiftError)
        assert err.shift == 1.0

    def test_perturbed_shift(self, four_values: SymmetricPencil):
        result = inertia(four_values, 2.0, perturb=True)
        assert result.zero_flag
        assert result.lambda_ != 2.0
        assert abs(result.lambda_ - 2.0) < 1e-9
        assert result.neg_count in (1, 2)

    def test_regular_shift_not_flagged(self, four_values: SymmetricPencil):
        result = inertia(four_values, 1.5, perturb=True)
        assert result == (1.5, 1, False)


class TestCountInterval:
    @pytest.mark.parametrize(
        ("lo", "hi", "expected"),
        [
            (0.5, 1.5, 1),
            (0.5, 2.5, 2),
            (0.0, 0.5, 0),
            (-5.0, 3.0, 4),
            (-2.0, -0.5, 1),
            (-4.5, -2.0, 1),
            (-0.5, 0.5, 0),
            (-1.5, 1.5, 2),
        ],
    )
    def test_counts(self, four_values: SymmetricPencil, lo: float, hi: float, expected: int):
        assert count_interval(four_values, lo, hi) == expected

    def test_empty_interval(self, four_values: SymmetricPencil):
        with pytest.raises(ValueError, match="lo < hi"):
            count_interval(four_values, 1.0, 1.0)

    def test_additive(self, four_values: SymmetricPencil):
        total = count_interval(four_values, -3.0, 3.0)
        assert total == count_interval(four_values, -3.0, 0.7) + count_interval(four_values, 0.7, 3.0)


class TestBisection:
    def test_diagonal_values(self, four_values: SymmetricPencil):
        eigs = spectrum(four_values, 2, 2, 1e-12)
        assert eigs.positive == pytest.approx((1.0, 2.0), rel=1e-11)
        assert eigs.negative == pytest.approx((-1.0, -4.0), rel=1e-11)
        assert eigs.certified

    def test_by_index(self, four_values: SymmetricPencil):
        eigs = spectrum(four_values, 2, 2)
        assert eigs.by_index(2) == pytest.approx(2.0)
        assert eigs.by_index(-2) == pytest.approx(-4.0)
        with pytest.raises(ValueError, match="nonzero"):
            eigs.by_index(0)

    def test_eig_by_index(self, four_values: SymmetricPencil):
        assert eig_by_index(four_values, -2) == pytest.approx(-4.0)
        assert eig_by_index(four_values, 1) == pytest.approx(1.0)

    def test_large_eigenvalues_bracketed(self):
        p = diagonal_pencil([1e6, 1.0], [1e-6, 1.0])
        assert spectrum(p, 2, 0).positive == pytest.approx((1.0, 1e12))

    def test_multiplicity(self):
        p = diagonal_pencil([2, 2, 2], [1, 1, 1])
        assert spectrum(p, 3, 0).positive == pytest.approx((2.0, 2.0, 2.0))

    def test_exhausted(self, four_values: SymmetricPencil):
        err = assert_selfspec_error(spectrum, four_values, 3, 0, kind="IndexBeyondSpectrum")
        assert isinstance(err, SpectrumExhaustedError)
        assert (err.available_positive, err.available_negative) == (2, 2)

    def test_eig_by_index_exhausted(self, four_values: SymmetricPencil):
        with pytest.raises(SpectrumExhaustedError):
            eig_by_index(four_values, -3)

    def test_zero_index(self, four_values: SymmetricPencil):
        with pytest.raises(ValueError, match="nonzero"):
            eig_by_index(four_values, 0)

    def test_tolerance_floor(self, four_values: SymmetricPencil):
        with pytest.raises(ValueError, match="rel_tol"):
            spectrum(four_values, 1, 0, 1e-16)

    def test_negative_counts(self, four_values: SymmetricPencil):
        with pytest.raises(ValueError, match="nonnegative"):
            spectrum(four_values, -1, 0)

    def test_tolerance_respected(self, four_values: SymmetricPencil):
        value = spectrum(four_values, 1, 0, 1e-4).positive[0]
        assert abs(value - 1.0) <= 1e-4

    @pytest.mark.parametrize("rel_tol", [1e-12, 1e-13])
    @pytest.mark.parametrize("w", [1.0, -2.0])
    def test_narrow_bracket_around_single_atom(self, w: float, rel_tol: float):
        mu = AtomicMeasure.of([0.5], [w])
        p = SymmetricPencil.from_measure(build_space(1, mu.positions), mu)
        eigs = spectrum(p, mu.positive_count, mu.negative_count, rel_tol)
        (value,) = eigs.positive + eigs.negative
        assert eigs.certified
        assert_rel(value, 4.0 / w, 2 * rel_tol)

    def test_singular_band_leaves_value_uncertified(self, four_values: SymmetricPencil):
        coarse = dataclasses.replace(DEFAULT_SETTINGS, pivot_rel_tol=1e-3)
        eigs = spectrum(four_values, 1, 0, 1e-10, settings=coarse)
        assert not eigs.certified
        assert abs(eigs.positive[0] - 1.0) < 5e-3


class TestSingleAtomOracles:
    @pytest.mark.parametrize("c", [0.1, 0.3, 0.5, 0.85])
    @pytest.mark.parametrize("w", [1.0, -2.5, 0.25])
    def test_second_order(self, c: float, w: float):
        (value,) = spline_eigenvalues(1, [c], [w])
        assert_rel(value, 1.0 / (w * c * (1.0 - c)), 1e-10)

    @pytest.mark.parametrize("w", [1.0, -1.0, 4.0])
    def test_fourth_order_midpoint(self, w: float):
        (value,) = spline_eigenvalues(2, [0.5], [w])
        assert_rel(value, 192.0 / w, 1e-10)

    @pytest.mark.parametrize("c", [0.25, 0.5, 0.6])
    def test_sixth_order_matches_green_diagonal(self, c: float):
        (value,) = spline_eigenvalues(3, [c], [1.0])
        assert_rel(value, 1.0 / green_value(3, c, c), 1e-8)

    def test_scaling_weights_scales_spectrum(self):
        base = spline_eigenvalues(2, [0.2, 0.5, 0.7], [1.0, -0.5, 2.0])
        scaled = spline_eigenvalues(2, [0.2, 0.5, 0.7], [3.0, -1.5, 6.0])
        assert scaled == pytest.approx([v / 3.0 for v in base])

    def test_extra_knots_do_not_change_spectrum(self):
        mu = AtomicMeasure.of([0.3, 0.6], [1.0, -1.0])
        coarse = spectrum(SymmetricPencil.from_measure(build_space(2, mu.positions), mu), 1, 1, 1e-12)
        fine = spectrum(SymmetricPencil.from_measure(build_space(2, [0.1, 0.3, 0.45, 0.6, 0.9]), mu), 1, 1, 1e-12)
        assert fine.positive == pytest.approx(coarse.positive, rel=1e-9)
        assert fine.negative == pytest.approx(coarse.negative, rel=1e-9)
