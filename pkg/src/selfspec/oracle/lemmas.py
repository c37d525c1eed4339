"""Brute-force checks of the determinant bounds behind the asymptotic argument.

For a positive semidefinite ``D`` and a symmetric ``F`` of rank ``r`` compare the pencils ``1 - λF`` (eigenvalues
``μ_k = 1/f_k``) and ``(1 + D) - λF`` (eigenvalues ``λ_k``), paired by signed index. The product ``∏ λ_k/μ_k`` equals
``det(1 + D) / det(1 + D₁₁)`` with ``D₁₁`` the compression of ``D`` to ``ker F``, hence never exceeds ``det(1 + D)``;
on the positive side ``λ_k >= μ_k`` and the partial products are nondecreasing.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from selfspec.banded import BandedSymmetricMatrix
from selfspec.errors import OracleError
from selfspec.pencil import SymmetricPencil, dense_eigs, inertia
from selfspec.settings import DEFAULT_SETTINGS, Settings

logger = logging.getLogger(__name__)


class LemmaInstance(NamedTuple):
    """A finite-dimensional pair ``(D, F)``.

    Attributes:
        D: Symmetric positive semidefinite matrix.
        F: Symmetric matrix.
        r: Numerical rank of ``F``.
    """

    D: NDArray[np.float64]
    F: NDArray[np.float64]
    r: int

    @property
    def dim(self) -> int:
        """Matrix order."""
        return self.D.shape[0]


class DeterminantBoundRecord(NamedTuple):
    """Outcome of :func:`determinant_bound_check`.

    Attributes:
        mu: Eigenvalues of ``1 - λF``, ascending.
        lam: Eigenvalues of ``(1 + D) - λF``, ascending.
        product: ``∏ λ_k/μ_k`` over signed-index pairs.
        det: ``det(1 + D)``.
        identity: ``det(1 + D) / det(1 + D₁₁)``.
        holds: Whether ``product <= det`` within the relative slack.
        identity_holds: Whether ``product`` matches ``identity`` to ``1e-6`` relative.
        pairwise_holds: Whether ``λ_k >= μ_k`` on the positive side and ``λ_-k <= μ_-k`` on the negative side.
    """

    mu: tuple[float, ...]
    lam: tuple[float, ...]
    product: float
    det: float
    identity: float
    holds: bool
    identity_holds: bool
    pairwise_holds: bool


class PartialProductRecord(NamedTuple):
    """Outcome of :func:`partial_products`.

    Attributes:
        partials: ``∏_(k <= j) λ_k/μ_k`` for ``j = 1 .. count`` over positive eigenvalues.
        det: ``det(1 + D)``.
        nondecreasing: Whether the partial products never decrease (within slack).
        bounded: Whether every partial product stays below ``det`` (within slack).
        index_monotone: Whether ``ind((1 + D) - λF) <= ind(1 - λF)`` at every probed ``λ``.
    """

    partials: tuple[float, ...]
    det: float
    nondecreasing: bool
    bounded: bool
    index_monotone: bool


def _eigvalsh(a: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.linalg.eigvalsh(0.5 * (a + a.T))


def make_lemma_instance(
    d: NDArray[np.float64], f: NDArray[np.float64], *, settings: Settings = DEFAULT_SETTINGS
) -> LemmaInstance:
    """Validate ``(D, F)`` and record the rank of ``F``.

    Raises:
        ValueError: On shape mismatch, asymmetric input, or ``D`` with an eigenvalue below ``-1e-12``.
    """
    d = np.asarray(d, dtype=float)
    f = np.asarray(f, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape != f.shape:
        raise ValueError(f"Expected square matrices of equal shape, got {d.shape} and {f.shape}")
    for name, a in (("D", d), ("F", f)):
        if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.max(np.abs(a), initial=0.0)))):
            raise ValueError(f"{name} is not symmetric")
    if d.size and float(np.min(_eigvalsh(d))) < -1e-12:
        raise ValueError("D is not positive semidefinite")
    spectrum = _eigvalsh(f) if f.size else np.zeros(0)
    cutoff = settings.rank_tol * max(1.0, float(np.max(np.abs(spectrum), initial=0.0)))
    rank = int(np.count_nonzero(np.abs(spectrum) > cutoff))
    return LemmaInstance(0.5 * (d + d.T), 0.5 * (f + f.T), rank)


def _pencil_eigs(k: NDArray[np.float64], f: NDArray[np.float64], settings: Settings) -> NDArray[np.float64]:
    pencil = SymmetricPencil.create(
        BandedSymmetricMatrix.from_dense(k), BandedSymmetricMatrix.from_dense(f), settings=settings
    )
    return dense_eigs(pencil, settings=settings)


def _split(values: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Positive values ascending and negative values descending (signed-index order)."""
    return np.sort(values[values > 0.0]), np.sort(values[values < 0.0])[::-1]


def _kernel_compression(inst: LemmaInstance, settings: Settings) -> float:
    """``det(1 + D₁₁)`` with ``D₁₁`` the compression of ``D`` to ``ker F``."""
    f_vals, f_vecs = np.linalg.eigh(inst.F)
    cutoff = settings.rank_tol * max(1.0, float(np.max(np.abs(f_vals), initial=0.0)))
    kernel = f_vecs[:, np.abs(f_vals) <= cutoff]
    if kernel.shape[1] == 0:
        return 1.0
    return float(np.linalg.det(np.eye(kernel.shape[1]) + kernel.T @ inst.D @ kernel))


def determinant_bound_check(inst: LemmaInstance, *, settings: Settings = DEFAULT_SETTINGS) -> DeterminantBoundRecord:
    """Check ``∏ λ_k/μ_k <= det(1 + D)`` together with the exact identity and the pairwise bounds.

    Raises:
        OracleError: ``RankMismatch`` when a pencil does not have exactly ``r`` finite eigenvalues or the sides do not
            pair up.

    Example:
        >>> import numpy as np
        >>> inst = make_lemma_instance(np.zeros((2, 2)), np.diag([2.0, -0.5]))
        >>> rec = determinant_bound_check(inst)
        >>> round(rec.product, 12), rec.det, rec.holds
        (1.0, 1.0, True)
    """
    eye = np.eye(inst.dim)
    mu = _pencil_eigs(eye, inst.F, settings)
    lam = _pencil_eigs(eye + inst.D, inst.F, settings)
    if len(mu) != inst.r or len(lam) != inst.r:
        raise OracleError(
            f"Expected {inst.r} finite eigenvalues, got {len(mu)} and {len(lam)}",
            kind="RankMismatch",
            details={"rank": inst.r, "mu": len(mu), "lambda": len(lam)},
        )
    mu_pos, mu_neg = _split(mu)
    lam_pos, lam_neg = _split(lam)
    if len(mu_pos) != len(lam_pos) or len(mu_neg) != len(lam_neg):
        raise OracleError("Positive and negative spectra do not pair up", kind="RankMismatch")
    product = float(np.prod(lam_pos / mu_pos) * np.prod(lam_neg / mu_neg))
    det = float(np.linalg.det(eye + inst.D))
    identity = det / _kernel_compression(inst, settings)
    slack = settings.lemma_slack
    pairwise = bool(np.all(lam_pos >= mu_pos * (1.0 - slack)) and np.all(lam_neg <= mu_neg * (1.0 - slack)))
    return DeterminantBoundRecord(
        tuple(mu.tolist()),
        tuple(lam.tolist()),
        product,
        det,
        identity,
        product <= det * (1.0 + slack),
        abs(product - identity) <= 1e-6 * identity,
        pairwise,
    )


def _negative_index(k: NDArray[np.float64], f: NDArray[np.float64], lam: float, settings: Settings) -> int:
    pencil = SymmetricPencil.create(
        BandedSymmetricMatrix.from_dense(k), BandedSymmetricMatrix.from_dense(f), counts=(0, 0), settings=settings
    )
    return inertia(pencil, lam, perturb=True, settings=settings).neg_count


def _probes(values: NDArray[np.float64]) -> list[float]:
    """Shifts between and beyond the sorted nonzero *values* on both sides of zero."""
    probes: list[float] = []
    for sign in (1.0, -1.0):
        grid = np.unique(sign * values[sign * values > 0.0])
        if grid.size == 0:
            continue
        edges = np.concatenate(([0.5 * grid[0]], 0.5 * (grid[1:] + grid[:-1]), [2.0 * grid[-1]]))
        probes.extend((sign * edges).tolist())
    return probes


def partial_products(
    d: NDArray[np.float64], f: NDArray[np.float64], count: int, *, settings: Settings = DEFAULT_SETTINGS
) -> PartialProductRecord:
    """Partial products of ``λ_k/μ_k`` over the first *count* positive eigenvalues.

    Raises:
        OracleError: ``InsufficientPositiveSpectrum`` when either pencil has fewer than *count* positive eigenvalues.

    Example:
        >>> import numpy as np
        >>> rec = partial_products(np.zeros((3, 3)), np.diag([1.0, 0.5, -1.0]), 2)
        >>> [round(p, 12) for p in rec.partials], rec.nondecreasing, rec.bounded
        ([1.0, 1.0], True, True)
    """
    inst = make_lemma_instance(d, f, settings=settings)
    eye = np.eye(inst.dim)
    mu = _pencil_eigs(eye, inst.F, settings)
    lam = _pencil_eigs(eye + inst.D, inst.F, settings)
    mu_pos = np.sort(mu[mu > 0.0])
    lam_pos = np.sort(lam[lam > 0.0])
    if len(mu_pos) < count or len(lam_pos) < count:
        raise OracleError(
            f"Need {count} positive eigenvalues, pencils have {len(mu_pos)} and {len(lam_pos)}",
            kind="InsufficientPositiveSpectrum",
            details={"count": count, "mu": len(mu_pos), "lambda": len(lam_pos)},
        )
    partials = np.cumprod(lam_pos[:count] / mu_pos[:count])
    det = float(np.linalg.det(eye + inst.D))
    slack = settings.lemma_slack
    nondecreasing = bool(np.all(partials[1:] >= partials[:-1] * (1.0 - slack)) and partials[0] >= 1.0 - slack)
    bounded = bool(np.all(partials <= det * (1.0 + slack)))
    index_monotone = all(
        _negative_index(eye + inst.D, inst.F, shift, settings) <= _negative_index(eye, inst.F, shift, settings)
        for shift in _probes(np.concatenate((mu, lam)))
    )
    if not (nondecreasing and bounded and index_monotone):
        logger.info("partial products violated: %s", partials.tolist())
    return PartialProductRecord(tuple(partials.tolist()), det, nondecreasing, bounded, index_monotone)
