"""Tests for regime classification, side laws and the coefficient estimates."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import pytest

from selfspec import (
    EigenList,
    InsufficientDataError,
    Regime,
    SideLaw,
    SimilarityParams,
    classify,
    estimate_tau,
    geometric_check,
    structure,
    validate,
)
from selfspec.cli.config import parse_number

from .conftest import assert_selfspec_error, load_yaml_cases

_CASES_DIR = Path(__file__).parent / "table_cases"
STRUCTURE_CASES = [c for c in load_yaml_cases(_CASES_DIR) if "laws" in c]

TABLE1_TAU = (271.32, 1264.04)


def _geometric(tau: tuple[float, ...], ratio: float, periods: int, *, shift: float = 1.0) -> tuple[float, ...]:
    """Values ``tau_l * shift * ratio**k`` laid out class by class."""
    return tuple(t * shift * ratio**k for k in range(periods) for t in tau)


def _eigs(positive: tuple[float, ...] = (), negative: tuple[float, ...] = ()) -> EigenList:
    return EigenList(positive, negative, 1e-10, True)


@pytest.mark.parametrize("case", STRUCTURE_CASES, ids=[c["label"] for c in STRUCTURE_CASES])
def test_classify_cases(case: dict[str, Any]):
    params = validate(
        n=case["n"],
        a=[parse_number(v, "a") for v in case["a"]],
        beta=[parse_number(v, "beta") for v in case["beta"]],
        d=[parse_number(v, "d") for v in case["d"]],
    )
    desc = classify(structure(params))
    assert desc.regime.value == case["regime"]
    assert [{"side": law.side, "period": law.period, "offset": law.offset} for law in desc.laws] == case["laws"]
    for law in desc.laws:
        assert law.ratio == pytest.approx(case["ratio"], rel=1e-12)


class TestClassify:
    def test_positive_only(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        assert desc.regime is Regime.POSITIVE_GEOMETRIC
        assert desc.law("negative") is None
        law = desc.law("positive")
        assert law is not None
        assert (law.period, law.power, law.shift) == (2, 1, 0)

    def test_alternating(self, alternating_params: SimilarityParams):
        desc = classify(structure(alternating_params))
        assert desc.regime is Regime.ALTERNATING
        assert desc.q < 0
        negative = desc.law("negative")
        assert negative is not None
        assert (negative.offset, negative.power, negative.shift) == (1, 2, 1)

    def test_sign_override(self, mixed_params: SimilarityParams):
        assert classify(structure(mixed_params), d_m_sign=-1).regime is Regime.ALTERNATING

    def test_degenerate(self):
        params = validate(n=1, a=(0.5, 0.25, 0.25), beta=(0, 1, 2), d=(0.5, 0, 0))
        desc = classify(structure(params))
        assert desc.regime is Regime.UNSUPPORTED
        assert desc.laws == ()


class TestSideLaw:
    def test_index_and_normalize(self):
        law = SideLaw("positive", Regime.POSITIVE_GEOMETRIC, 2, 0, 1, 0, 1 / 54)
        assert [law.index(l, k) for k in range(2) for l in (1, 2)] == [1, 2, 3, 4]  # noqa: E741
        assert law.normalize(54.0**3 * 271.32, 3) == pytest.approx(271.32)

    def test_alternating_negative_positions(self):
        law = SideLaw("negative", Regime.ALTERNATING, 2, 1, 2, 1, 1 / 54)
        assert law.position(1) is None
        assert [law.position(i) for i in (2, 3, 4, 5)] == [(1, 0), (2, 0), (1, 1), (2, 1)]
        assert law.index(1, 1) == -4
        assert law.normalize(-299.0 * 54.0**5, 2) == pytest.approx(299.0)

    def test_position_inverts_index(self):
        law = SideLaw("negative", Regime.NEGATIVE_GEOMETRIC, 3, 2, 1, 0, 0.1)
        for k in range(4):
            for l in range(1, 4):  # noqa: E741
                assert law.position(-law.index(l, k)) == (l, k)

    def test_complete_periods(self):
        law = SideLaw("negative", Regime.ALTERNATING, 2, 1, 2, 1, 0.1)
        assert [law.complete_periods(c) for c in (0, 1, 2, 3, 4, 7)] == [0, 0, 0, 1, 1, 3]


class TestEstimateTau:
    def test_recovers_exact_geometric_coefficients(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        report = estimate_tau(_eigs(_geometric(TABLE1_TAU, 54.0, 4)), desc)
        side = report.side("positive")
        assert side is not None
        assert side.tau == pytest.approx(TABLE1_TAU)
        assert all(r == pytest.approx(0.0, abs=1e-12) for res in side.residuals for r in res)
        assert report.converged

    def test_uses_deepest_period(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        values = list(_geometric(TABLE1_TAU, 54.0, 4))
        values[0] *= 1.1
        side = estimate_tau(_eigs(tuple(values)), desc).side("positive")
        assert side is not None
        assert side.tau == pytest.approx(TABLE1_TAU)
        assert side.normalized[0][0] == pytest.approx(1.1 * TABLE1_TAU[0])

    def test_not_converged(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        values = list(_geometric(TABLE1_TAU, 54.0, 3))
        values[-1] *= 1.05
        report = estimate_tau(_eigs(tuple(values)), desc)
        assert not report.converged

    def test_alternating_sides(self, alternating_params: SimilarityParams):
        desc = classify(structure(alternating_params))
        q2 = 54.0**2
        positive = _geometric((304.08, 299.0), q2, 3)
        negative = (-50.0, *(-v for v in _geometric((299.0, 13764.02), q2, 3, shift=54.0)))
        report = estimate_tau(_eigs(positive, negative), desc)
        neg = report.side("negative")
        assert neg is not None
        assert neg.tau == pytest.approx((299.0, 13764.02))

    def test_too_few_periods(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        err = assert_selfspec_error(
            estimate_tau, _eigs(_geometric(TABLE1_TAU, 54.0, 2)), desc, kind="InsufficientData"
        )
        assert err.details["periods"] == 2

    def test_no_eigenvalues(self, positive_params: SimilarityParams):
        with pytest.raises(InsufficientDataError):
            estimate_tau(_eigs(), classify(structure(positive_params)))

    def test_unsupported_keeps_raw_spectrum(self):
        params = validate(n=1, a=(0.5, 0.25, 0.25), beta=(0, 1, 2), d=(0.5, 0, 0))
        eigs = _eigs((1.0, 2.0))
        report = estimate_tau(eigs, classify(structure(params)))
        assert report.regime is Regime.UNSUPPORTED
        assert report.sides == ()
        assert report.eigenvalues is eigs
        assert not report.converged


class TestGeometricCheck:
    def test_exact_ratio(self, mixed_params: SimilarityParams):
        desc = classify(structure(mixed_params))
        eigs = _eigs(_geometric((369.75,), 54.0, 3), tuple(-v for v in _geometric((157.2,), 54.0, 3)))
        diagnostics = geometric_check(eigs, desc)
        assert [(g.side, g.l) for g in diagnostics] == [("positive", 1), ("negative", 1)]
        for g in diagnostics:
            assert g.ratios == pytest.approx((54.0, 54.0))
            assert max(g.deviations) < 1e-12

    def test_needs_two_periods(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        with pytest.raises(InsufficientDataError):
            geometric_check(_eigs(_geometric(TABLE1_TAU, 54.0, 1)), desc)

    def test_deviation_reported(self, positive_params: SimilarityParams):
        desc = classify(structure(positive_params))
        values = list(_geometric(TABLE1_TAU, 54.0, 2))
        values[2] *= 1.02
        (first, _) = geometric_check(_eigs(tuple(values)), desc)
        assert first.deviations[0] == pytest.approx(0.02)
