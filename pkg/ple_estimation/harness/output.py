from __future__ import annotations

import csv
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from ..base import CsvRow, DetectionEvent


def _write(rows: Sequence[CsvRow], stream: TextIO, columns: Sequence[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row.to_csv_row())


def write_csv(
    rows: Sequence[CsvRow],
    path: Optional[Union[str, Path]] = None,
    columns: Optional[Sequence[str]] = None,
) -> Optional[Path]:
    """
    Write result rows with a header line.

    Args:
        rows: Rows of a single type
        path: Output file; standard output when None
        columns: Header, defaults to the column order of the first row

    Returns:
        The written path, or None for standard output
    """
    if columns is None:
        if not rows:
            raise ValueError("columns are required when there are no rows")
        columns = type(rows[0]).columns
    if path is None:
        _write(rows, sys.stdout, columns)
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as stream:
        _write(rows, stream, columns)
    return path


def write_event_log(events: Iterable[DetectionEvent], path: Union[str, Path]) -> Path:
    """Write detection events as CSV: time, detector id, suspect id, ρ, threshold, decision."""
    return write_csv(list(events), path, columns=DetectionEvent.columns)
