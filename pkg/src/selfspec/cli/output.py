"""Eigenvalue rows and their CSV and text renderings."""

from __future__ import annotations

import csv
import io
from typing import TYPE_CHECKING, Final, NamedTuple

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from selfspec.asympt import RegimeDescriptor, Side
    from selfspec.cli.config import OutputFormat
    from selfspec.pencil import EigenList

CSV_HEADER: Final = ("side", "index", "l", "k", "lambda", "normalized")


class EigenRow(NamedTuple):
    """One output row.

    Attributes:
        side: Side of the spectrum.
        index: Signed eigenvalue index.
        l: Residue class, ``None`` before the asymptotic classes start or without a law.
        k: Period counter, ``None`` likewise.
        value: The eigenvalue.
        normalized: ``|λ|`` scaled by the side law, ``None`` likewise.
    """

    side: Side
    index: int
    l: int | None
    k: int | None
    value: float
    normalized: float | None


def eigen_rows(eigs: EigenList, descriptor: RegimeDescriptor) -> list[EigenRow]:
    """Rows for every computed eigenvalue, positive side first, each side in signed-index order."""
    rows: list[EigenRow] = []
    for side, values, sign in (("positive", eigs.positive, 1), ("negative", eigs.negative, -1)):
        law = descriptor.law(side)
        for i, value in enumerate(values, start=1):
            position = law.position(i) if law is not None else None
            if position is None or law is None:
                rows.append(EigenRow(side, sign * i, None, None, value, None))
                continue
            l, k = position  # noqa: E741
            rows.append(EigenRow(side, sign * i, l, k, value, law.normalize(value, k)))
    return rows


def format_number(value: float | None) -> str:
    """Shortest stable rendering: ``%.15g`` with a decimal point, empty for ``None``.

    Example:
        >>> format_number(286.1), format_number(None), format_number(-4.0)
        ('286.1', '', '-4')
    """
    return "" if value is None else f"{value:.15g}"


def _cells(row: EigenRow) -> list[str]:
    return [
        row.side,
        str(row.index),
        "" if row.l is None else str(row.l),
        "" if row.k is None else str(row.k),
        format_number(row.value),
        format_number(row.normalized),
    ]


def render_csv(rows: Iterable[EigenRow]) -> str:
    """CSV with the header ``side,index,l,k,lambda,normalized`` and ``\\n`` line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(_cells(row) for row in rows)
    return buf.getvalue()


def render_table(header: Sequence[str], body: Iterable[Sequence[str]]) -> str:
    """Left-aligned text columns separated by two spaces."""
    lines = [list(header), *(list(r) for r in body)]
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "".join("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() + "\n" for line in lines)


def render_rows(rows: Sequence[EigenRow], fmt: OutputFormat) -> str:
    """Render eigenvalue rows as CSV or as an aligned table."""
    if fmt == "csv":
        return render_csv(rows)
    return render_table(CSV_HEADER, (_cells(row) for row in rows))
