# weakrank/ingest/matrix_csv.py
import csv
import io
from fractions import Fraction
from typing import Optional

from weakrank.core.errors import DimensionError, MatrixError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.rational import format_decimal, format_fraction, is_terminating, to_fraction


def load_matrix_csv(text: str, source: Optional[str] = None) -> PairOrderMatrix:
    """Square CSV of exact decimals or `p/q` entries, with an optional label header row."""
    rows = [row for row in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in row)]
    if not rows:
        raise DimensionError("empty matrix file", source=source)

    labels = None
    if not _is_numeric_row(rows[0]):
        labels = tuple(cell.strip() for cell in rows[0])
        rows = rows[1:]

    n = len(rows)
    entries = []
    for r, row in enumerate(rows):
        if len(row) != n:
            raise DimensionError(f"row {r + 1} has {len(row)} entries, expected {n}", source=source)
        parsed = []
        for s, cell in enumerate(row):
            try:
                parsed.append(to_fraction(cell))
            except ValueError:
                raise MatrixError(f"unreadable entry {cell.strip()!r}", index=(r + 1, s + 1), source=source) from None
        entries.append(tuple(parsed))
    return PairOrderMatrix(entries=tuple(entries), labels=labels)


def save_matrix_csv(matrix: PairOrderMatrix) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if matrix.labels:
        writer.writerow(matrix.labels)
    for row in matrix.entries:
        writer.writerow([_format_entry(value) for value in row])
    return buffer.getvalue()


def _format_entry(value: Fraction) -> str:
    return format_decimal(value) if is_terminating(value) else format_fraction(value)


def _is_numeric_row(row: list[str]) -> bool:
    try:
        for cell in row:
            to_fraction(cell)
    except ValueError:
        return False
    return True
