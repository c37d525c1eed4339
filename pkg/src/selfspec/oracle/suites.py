"""Seeded property suites behind ``selfspec verify``.

Each suite draws its inputs from ``numpy.random.default_rng(seed)`` so that a run is reproducible, and returns a
:class:`SuiteReport` with the number of checks, the failures and the worst observed deviation.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import Final, NamedTuple

import numpy as np
from numpy.typing import NDArray

from selfspec.banded import BandedSymmetricMatrix
from selfspec.oracle.green import green_spectrum, green_value
from selfspec.oracle.lemmas import LemmaInstance, determinant_bound_check, make_lemma_instance, partial_products
from selfspec.pencil import SymmetricPencil, count_interval, dense_eigs, spectrum
from selfspec.selfsim import AtomicMeasure
from selfspec.settings import DEFAULT_SETTINGS, Settings
from selfspec.spline import build_space

logger = logging.getLogger(__name__)

ORACLE_TOL: Final = 1e-10
EQUIVALENCE_TOL: Final = 1e-8
DENSE_TOL: Final = 1e-8
MAX_ATOMS: Final[dict[int, int]] = {1: 30, 2: 16, 3: 8}


class SuiteReport(NamedTuple):
    """Result of one verification suite.

    Attributes:
        name: Suite name.
        checks: Number of individual comparisons made.
        failures: Descriptions of the failed comparisons.
        worst_deviation: Largest relative deviation observed (0 for purely logical checks).
    """

    name: str
    checks: int
    failures: tuple[str, ...]
    worst_deviation: float

    @property
    def passed(self) -> bool:
        """Whether no check failed."""
        return not self.failures


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def random_pencil(rng: np.random.Generator, dim: int, bandwidth: int) -> SymmetricPencil:
    """Diagonally dominant banded ``K`` and a random symmetric banded ``M``."""
    bw = min(bandwidth, dim - 1)
    k_upper = rng.uniform(-1.0, 1.0, size=(bw + 1, dim))
    m_upper = rng.uniform(-1.0, 1.0, size=(bw + 1, dim))
    for off in range(1, bw + 1):
        k_upper[bw - off, :off] = 0.0
        m_upper[bw - off, :off] = 0.0
    k = BandedSymmetricMatrix(dim, bw, k_upper)
    row_sums = np.sum(np.abs(k.to_dense()), axis=1) - np.abs(k.diagonal())
    k.upper[bw] = row_sums + rng.uniform(0.5, 1.5, size=dim)
    return SymmetricPencil.create(k, BandedSymmetricMatrix(dim, bw, m_upper))


def random_atomic_measure(rng: np.random.Generator, count: int) -> AtomicMeasure:
    """*count* atoms in ``(0.05, 0.95)`` with gaps of at least ``0.45 / count`` and mixed-sign weights."""
    gap = 0.45 / count
    slack = 0.9 - gap * (count - 1)
    offsets = np.sort(rng.uniform(0.0, slack, size=count))
    positions = 0.05 + offsets + gap * np.arange(count)
    magnitudes = np.exp(rng.uniform(np.log(0.2), np.log(5.0), size=count))
    signs = rng.choice([-1.0, 1.0], size=count)
    return AtomicMeasure.of(positions.tolist(), (signs * magnitudes).tolist())


def random_lemma_instance(
    rng: np.random.Generator, dim: int, *, settings: Settings = DEFAULT_SETTINGS
) -> LemmaInstance:
    """``D = A Aᵀ`` of random rank and ``F = U diag(f) Uᵀ`` with ``|f|`` in ``[0.1, 2]`` and random rank."""
    a = rng.normal(size=(dim, int(rng.integers(0, dim + 1))))
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    rank = int(rng.integers(1, dim + 1))
    f_vals = np.zeros(dim)
    f_vals[:rank] = rng.choice([-1.0, 1.0], size=rank) * rng.uniform(0.1, 2.0, size=rank)
    return make_lemma_instance(a @ a.T, (q * f_vals) @ q.T, settings=settings)


def _spline_spectrum(n: int, mu: AtomicMeasure, settings: Settings) -> NDArray[np.float64]:
    pencil = SymmetricPencil.from_measure(build_space(n, mu.positions, settings=settings), mu, settings=settings)
    eigs = spectrum(pencil, mu.positive_count, mu.negative_count, 1e-12, settings=settings)
    return np.array(sorted(eigs.negative) + list(eigs.positive))


def compare_spectra(
    values: NDArray[np.float64], reference: NDArray[np.float64], tol: float = DENSE_TOL
) -> tuple[float, str | None]:
    """Largest relative deviation of sorted *values* from sorted *reference*, and a problem description if any.

    Example:
        >>> import numpy as np
        >>> compare_spectra(np.array([2.0, -1.0]), np.array([-1.0, 2.0]))
        (0.0, None)
        >>> compare_spectra(np.array([1.0]), np.array([1.0, 3.0]))[1]
        '1 eigenvalues against 2 in the reference'
    """
    if values.size != reference.size:
        return 0.0, f"{values.size} eigenvalues against {reference.size} in the reference"
    if not values.size:
        return 0.0, None
    ordered = np.sort(reference)
    dev = float(np.max(np.abs(np.sort(values) - ordered) / np.abs(ordered)))
    if dev > tol:
        return dev, f"relative deviation {dev:.3e} above {tol:g}"
    return dev, None


def oracle_suite(seed: int = 0, size: int | None = None, *, settings: Settings = DEFAULT_SETTINGS) -> SuiteReport:
    """Single-atom closed forms ``1 / (w G(c, c))`` through the spline and the Green paths."""
    del seed, size
    failures: list[str] = []
    worst = 0.0
    checks = 0
    cases = [(1, c, w) for c in (0.1, 0.25, 0.5, 0.7) for w in (1.0, -2.0, 0.5)]
    cases += [(2, 0.5, w) for w in (1.0, -1.0, 3.0)] + [(2, 0.3, 1.0), (3, 0.5, 1.0), (3, 0.4, -0.5)]
    for n, c, w in cases:
        exact = 4.0 / w if (n, c) == (1, 0.5) else 192.0 / w if (n, c) == (2, 0.5) else None
        if exact is None:
            exact = 1.0 / (w * c * (1.0 - c)) if n == 1 else 1.0 / (w * green_value(n, c, c, settings=settings))
        mu = AtomicMeasure.of([c], [w])
        for path, values in (
            ("spline", _spline_spectrum(n, mu, settings)),
            ("green", green_spectrum(n, mu, settings=settings)),
        ):
            checks += 1
            dev = _rel(float(values[0]), exact)
            worst = max(worst, dev)
            if len(values) != 1 or dev > ORACLE_TOL:
                failures.append(f"{path} n={n} c={c} w={w}: got {values.tolist()}, expected {exact!r}")
    return SuiteReport("oracle", checks, tuple(failures), worst)


def lemma_suite(seed: int = 0, size: int | None = None, *, settings: Settings = DEFAULT_SETTINGS) -> SuiteReport:
    """Determinant bound on ``size`` (default 1000) instances and partial products on a fifth as many."""
    rng = np.random.default_rng(seed)
    instances = 1000 if size is None else size
    failures: list[str] = []
    worst = 0.0
    for i in range(instances):
        inst = random_lemma_instance(rng, int(rng.integers(1, 11)), settings=settings)
        rec = determinant_bound_check(inst, settings=settings)
        worst = max(worst, max(0.0, rec.product / rec.det - 1.0))
        if not (rec.holds and rec.identity_holds and rec.pairwise_holds):
            failures.append(f"instance {i}: product={rec.product!r} det={rec.det!r} identity={rec.identity!r}")
    partial_runs = max(1, instances // 5)
    for i in range(partial_runs):
        dim = int(rng.integers(2, 21))
        inst = random_lemma_instance(rng, dim, settings=settings)
        positives = int(np.count_nonzero(np.linalg.eigvalsh(inst.F) > 1e-9))
        if positives == 0:
            continue
        rec = partial_products(inst.D, inst.F, positives, settings=settings)
        if not (rec.nondecreasing and rec.bounded and rec.index_monotone):
            failures.append(f"partial run {i}: partials={rec.partials} det={rec.det!r}")
    logger.info("lemma suite: %d instances, %d failures", instances + partial_runs, len(failures))
    return SuiteReport("lemmas", instances + partial_runs, tuple(failures), worst)


def inertia_suite(seed: int = 0, size: int | None = None, *, settings: Settings = DEFAULT_SETTINGS) -> SuiteReport:
    """Bisection against the dense path and interval counts against bisection on ``size`` (default 100) random pencils.

    Each pencil contributes one dense comparison and up to 20 interval counts.
    """
    rng = np.random.default_rng(seed)
    pencils = 100 if size is None else size
    failures: list[str] = []
    worst = 0.0
    checks = 0
    for i in range(pencils):
        pencil = random_pencil(rng, int(rng.integers(1, 31)), int(rng.integers(0, 4)))
        eigs = spectrum(pencil, pencil.available_positive, pencil.available_negative, settings=settings)
        values = np.array(list(eigs.negative) + list(eigs.positive))
        if pencil.dim <= settings.dense_max_dim:
            checks += 1
            dev, problem = compare_spectra(values, dense_eigs(pencil, settings=settings))
            worst = max(worst, dev)
            if problem is not None:
                failures.append(f"pencil {i}: {problem}")
        span = 1.5 * float(np.max(np.abs(values))) if values.size else 1.0
        for _ in range(20):
            lo, hi = np.sort(rng.uniform(-span, span, size=2))
            if values.size and float(np.min(np.abs(np.concatenate([values - lo, values - hi])))) < 1e-6 * span:
                continue
            checks += 1
            expected = int(np.count_nonzero((values > lo) & (values <= hi)))
            got = count_interval(pencil, float(lo), float(hi), settings=settings)
            if got != expected:
                failures.append(f"pencil {i} ({lo:.6g}, {hi:.6g}]: counted {got}, bisection found {expected}")
    return SuiteReport("inertia", checks, tuple(failures), worst)


def equivalence_suite(seed: int = 0, size: int | None = None, *, settings: Settings = DEFAULT_SETTINGS) -> SuiteReport:
    """Spline against Green spectra on ``size`` (default 50) random atomic measures."""
    rng = np.random.default_rng(seed)
    measures = 50 if size is None else size
    failures: list[str] = []
    worst = 0.0
    checks = 0
    for i in range(measures):
        n = int(rng.integers(1, 4))
        mu = random_atomic_measure(rng, int(rng.integers(1, MAX_ATOMS[n] + 1)))
        spline = _spline_spectrum(n, mu, settings)
        green = green_spectrum(n, mu, settings=settings)
        checks += 1
        dev, problem = compare_spectra(spline, green, EQUIVALENCE_TOL)
        worst = max(worst, dev)
        if problem is not None:
            failures.append(f"measure {i} (n={n}, {mu.size} atoms): {problem}")
    return SuiteReport("equivalence", checks, tuple(failures), worst)


SUITES: Final[dict[str, Callable[..., SuiteReport]]] = {
    "oracle": oracle_suite,
    "lemmas": lemma_suite,
    "inertia": inertia_suite,
    "equivalence": equivalence_suite,
}


def run_suite(
    name: str, *, seed: int = 0, size: int | None = None, settings: Settings = DEFAULT_SETTINGS
) -> SuiteReport:
    """Run the suite called *name*.

    Raises:
        ValueError: For an unknown suite name.
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"Unknown suite {name!r}; expected one of {sorted(SUITES)}") from None
    report = suite(seed, size, settings=settings)
    logger.info(
        "suite %s: %d checks, %d failures, worst %.3e",
        name,
        report.checks,
        len(report.failures),
        report.worst_deviation,
    )
    return report
