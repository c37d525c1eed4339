"""Reference eigenvalue tables for the three benchmark weights (n = 2, three branches of length 1/3)."""

from __future__ import annotations

from typing import TYPE_CHECKING, Final, NamedTuple

from selfspec.cli.config import JobConfig

if TYPE_CHECKING:
    from collections.abc import Mapping

    from selfspec.asympt import Side


class ReferenceRow(NamedTuple):
    """One published eigenvalue.

    Attributes:
        side: Side of the spectrum.
        l: Residue class.
        k: Period counter.
        raw: Published ``|λ|`` (three significant digits).
        normalized: Published normalized value.
    """

    side: Side
    l: int
    k: int
    raw: float
    normalized: float


class TablePreset(NamedTuple):
    """A reference table and the job that reproduces it.

    Attributes:
        table_id: Table number accepted by ``reproduce-table``.
        title: One-line description.
        config: Job that computes the table's eigenvalues.
        rows: Published rows in print order.
    """

    table_id: int
    title: str
    config: JobConfig
    rows: tuple[ReferenceRow, ...]


RAW_TOL: Final = 1e-2
NORMALIZED_TOL: Final = 5e-3
PRESET_DEPTH: Final = 14

_THIRDS: Final = (1 / 3, 1 / 3, 1 / 3)

# ── Positive jumps only, d_3 = 1/2 ──────

POSITIVE_GEOMETRIC: Final = TablePreset(
    1,
    "beta=(0, 2/3, 1), d=(0, 0, 1/2): positive side, period 2, ratio 54",
    JobConfig(n=2, N=3, a=_THIRDS, beta=(0.0, 2 / 3, 1.0), d=(0.0, 0.0, 0.5), depth=PRESET_DEPTH, pos_count=8),
    (
        ReferenceRow("positive", 1, 0, 2.86e2, 286.10),
        ReferenceRow("positive", 2, 0, 1.38e3, 1377.99),
        ReferenceRow("positive", 1, 1, 1.48e4, 273.71),
        ReferenceRow("positive", 2, 1, 6.83e4, 1265.31),
        ReferenceRow("positive", 1, 2, 7.91e5, 271.33),
        ReferenceRow("positive", 2, 2, 3.69e6, 1264.04),
        ReferenceRow("positive", 1, 3, 4.27e7, 271.32),
        ReferenceRow("positive", 2, 3, 1.99e8, 1264.04),
    ),
)

# ── Mixed jumps, d_3 = 1/2 ──────

MIXED_GEOMETRIC: Final = TablePreset(
    2,
    "beta=(0, -1, 0), d=(0, 0, 1/2): negative side, period 1, ratio 54",
    JobConfig(n=2, N=3, a=_THIRDS, beta=(0.0, -1.0, 0.0), d=(0.0, 0.0, 0.5), depth=PRESET_DEPTH, neg_count=4),
    (
        ReferenceRow("negative", 1, 0, 3.70e2, 369.75),
        ReferenceRow("negative", 1, 1, 8.51e3, 157.53),
        ReferenceRow("negative", 1, 2, 4.58e5, 157.20),
        ReferenceRow("negative", 1, 3, 2.48e7, 157.20),
    ),
)

# ── Mixed jumps, d_3 = -1/2 ──────

ALTERNATING: Final = TablePreset(
    3,
    "beta=(0, -1, 0), d=(0, 0, -1/2): alternating sides, period 2, ratio 54^2",
    JobConfig(
        n=2, N=3, a=_THIRDS, beta=(0.0, -1.0, 0.0), d=(0.0, 0.0, -0.5), depth=PRESET_DEPTH, pos_count=6, neg_count=7
    ),
    (
        ReferenceRow("positive", 1, 0, 3.04e2, 304.08),
        ReferenceRow("positive", 2, 0, 1.38e4, 13820.11),
        ReferenceRow("positive", 1, 1, 8.72e5, 299.00),
        ReferenceRow("positive", 2, 1, 4.01e7, 13764.02),
        ReferenceRow("positive", 1, 2, 2.54e9, 299.00),
        ReferenceRow("positive", 2, 2, 1.17e11, 13764.02),
        ReferenceRow("negative", 1, 0, 1.61e4, 299.04),
        ReferenceRow("negative", 2, 0, 7.43e5, 13764.22),
        ReferenceRow("negative", 1, 1, 4.71e7, 299.00),
        ReferenceRow("negative", 2, 1, 2.17e9, 13764.02),
        ReferenceRow("negative", 1, 2, 1.37e11, 299.00),
        ReferenceRow("negative", 2, 2, 6.32e12, 13764.02),
    ),
)

PRESETS: Final[Mapping[int, TablePreset]] = {p.table_id: p for p in (POSITIVE_GEOMETRIC, MIXED_GEOMETRIC, ALTERNATING)}
