"""Sweep output rows and their CSV round-trip.

One record per (coordinate, method, metric). Files carry a fixed header,
UTF-8 text, LF line endings, and floats in shortest round-trip form, so
re-reading an emitted file recovers every record exactly and repeated
runs diff clean.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

COLUMNS = ("sweep_name", "coordinate", "method", "metric_name",
           "value", "trials", "seed")


@dataclass(frozen=True)
class SweepRecord:
    """One experiment output row."""

    sweep_name: str
    coordinate: float
    method: str
    metric_name: str
    value: float
    trials: int
    seed: int


def _format_float(x: float) -> str:
    return repr(float(x))


def records_to_csv(records) -> str:
    """Render records as CSV text (header included)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow([
            r.sweep_name,
            _format_float(r.coordinate),
            str(r.method),
            r.metric_name,
            _format_float(r.value),
            str(int(r.trials)),
            str(int(r.seed)),
        ])
    return buf.getvalue()


def write_records(path: str, records) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


def read_records(path: str) -> list[SweepRecord]:
    """Parse a CSV written by :func:`write_records`."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected CSV header {header!r}")
        out = []
        for row in reader:
            if len(row) != len(COLUMNS):
                raise ValueError(f"malformed CSV row {row!r}")
            out.append(SweepRecord(
                sweep_name=row[0],
                coordinate=float(row[1]),
                method=row[2],
                metric_name=row[3],
                value=float(row[4]),
                trials=int(row[5]),
                seed=int(row[6]),
            ))
    return out
