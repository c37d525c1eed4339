"""Property-based tests for the solver core.

All tests in this module are marked ``@pytest.mark.fuzz`` so they are
excluded with ``pytest -m "not fuzz"`` and run on their own with ``pytest -m fuzz``.
"""

from __future__ import annotations

import os

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from selfspec import (
    AtomicMeasure,
    BandedSymmetricMatrix,
    SelfSpecError,
    SymmetricPencil,
    atoms,
    build_space,
    count_interval,
    ldlt_pivots,
    refine,
    spectrum,
    validate,
)
from selfspec.oracle import green_spectrum

from .conftest import spline_eigenvalues

pytestmark = pytest.mark.fuzz

# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

MAX_EXAMPLES = int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "200"))

# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------

_weight = st.floats(0.2, 5.0).flatmap(lambda m: st.sampled_from([m, -m]))


@st.composite
def atomic_measures(draw: st.DrawFn, max_atoms: int = 6) -> AtomicMeasure:
    count = draw(st.integers(1, max_atoms))
    positions = draw(
        st.lists(st.floats(0.05, 0.95), min_size=count, max_size=count, unique=True).filter(
            lambda xs: min(np.diff(sorted(xs)), default=1.0) > 0.02
        )
    )
    weights = draw(st.lists(_weight, min_size=count, max_size=count))
    return AtomicMeasure.of(positions, weights)


@st.composite
def similarity_params(draw: st.DrawFn):
    big_n = draw(st.integers(2, 4))
    raw = draw(st.lists(st.floats(0.1, 1.0), min_size=big_n, max_size=big_n))
    a = [x / sum(raw) for x in raw]
    beta = draw(st.lists(st.integers(-2, 2).map(float), min_size=big_n, max_size=big_n).filter(any))
    m = draw(st.integers(0, big_n - 1))
    d = [0.0] * big_n
    d[m] = draw(st.sampled_from([0.5, -0.5, 0.25]))
    return validate(n=draw(st.integers(1, 2)), a=a, beta=beta, d=d)


@st.composite
def symmetric_bands(draw: st.DrawFn) -> BandedSymmetricMatrix:
    dim = draw(st.integers(1, 12))
    bw = draw(st.integers(0, min(3, dim - 1)))
    entries = draw(st.lists(st.floats(-2.0, 2.0), min_size=(bw + 1) * dim, max_size=(bw + 1) * dim))
    upper = np.array(entries).reshape(bw + 1, dim)
    for off in range(1, bw + 1):
        upper[bw - off, :off] = 0.0
    return BandedSymmetricMatrix(dim, bw, upper)


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------


class TestFuzz:
    @settings(max_examples=MAX_EXAMPLES, deadline=None)
    @given(a=symmetric_bands())
    def test_negative_pivots_match_eigenvalues(self, a: BandedSymmetricMatrix):
        try:
            pivots = ldlt_pivots(a, pivot_rel_tol=1e-10)
        except SelfSpecError:
            return
        eigs = np.linalg.eigvalsh(a.to_dense())
        assume(float(np.min(np.abs(eigs))) > 1e-6 * max(a.max_abs(), 1e-300))
        assert int(np.count_nonzero(pivots < 0)) == int(np.count_nonzero(eigs < 0))

    @settings(max_examples=MAX_EXAMPLES, deadline=None)
    @given(mu=atomic_measures(), n=st.integers(1, 2))
    def test_spline_matches_green(self, mu: AtomicMeasure, n: int):
        spline = spline_eigenvalues(n, mu.positions, mu.weights)
        np.testing.assert_allclose(spline, green_spectrum(n, mu), rtol=1e-6)

    @settings(max_examples=MAX_EXAMPLES, deadline=None)
    @given(mu=atomic_measures(), lo=st.floats(-1e4, 1e4), width=st.floats(1.0, 1e4))
    def test_interval_counts_match_values(self, mu: AtomicMeasure, lo: float, width: float):
        values = np.array(spline_eigenvalues(1, mu.positions, mu.weights))
        hi = lo + width
        assume(float(np.min(np.abs(np.concatenate([values - lo, values - hi])))) > 1e-6 * max(abs(lo), abs(hi), 1.0))
        pencil = SymmetricPencil.from_measure(build_space(1, mu.positions), mu)
        assert count_interval(pencil, lo, hi) == int(np.count_nonzero((values > lo) & (values <= hi)))

    @settings(max_examples=MAX_EXAMPLES, deadline=None)
    @given(mu=atomic_measures(), factor=st.floats(0.1, 10.0))
    def test_scaling_weights_scales_eigenvalues(self, mu: AtomicMeasure, factor: float):
        base = spline_eigenvalues(1, mu.positions, mu.weights)
        scaled = spline_eigenvalues(1, mu.positions, [w * factor for w in mu.weights])
        np.testing.assert_allclose(scaled, [v / factor for v in base], rtol=1e-8)

    @settings(max_examples=MAX_EXAMPLES, deadline=None)
    @given(params=similarity_params(), depth=st.integers(1, 5))
    def test_atoms_grow_linearly(self, params, depth: int):
        w = refine(params, depth)
        mu = atoms(w)
        assert len(w.values) <= depth * (params.N - 1) + 1
        assert mu.size <= depth * (params.N - 1)
        assert all(weight != 0.0 for weight in mu.weights)
        assert all(b > a for a, b in zip(mu.positions, mu.positions[1:]))

    @settings(max_examples=MAX_EXAMPLES, deadline=None)
    @given(params=similarity_params(), depth=st.integers(2, 5))
    def test_spectrum_sizes_match_atom_signs(self, params, depth: int):
        mu = atoms(refine(params, depth))
        assume(0 < mu.size <= 40)
        pencil = SymmetricPencil.from_measure(build_space(params.n, mu.positions), mu)
        eigs = spectrum(pencil, mu.positive_count, mu.negative_count, 1e-8)
        assert all(v > 0 for v in eigs.positive)
        assert all(v < 0 for v in eigs.negative)
        assert list(eigs.positive) == sorted(eigs.positive)
        assert list(eigs.negative) == sorted(eigs.negative, reverse=True)
