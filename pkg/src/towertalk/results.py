"""Deterministic CSV/JSON result emission.

One row per (condition, repetition, metric). Numeric values are fixed at six
decimal places, lines end with LF, and files are written atomically so a rerun
with the same seed is byte-identical.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass

from .errors import EmptyInputError

CSV_HEADER = ("experiment", "condition", "repetition", "metric", "value", "n", "sd")


@dataclass(frozen=True)
class OutputRow:
    experiment: str
    condition: str
    repetition: int
    metric: str
    value: float
    n: int
    sd: float = 0.0


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(rows) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.experiment, r.condition, r.repetition, r.metric,
            f"{r.value:.6f}", r.n, f"{r.sd:.6f}",
        ])
    return buf.getvalue()


def render_json(rows) -> str:
    payload = [
        {
            "experiment": r.experiment, "condition": r.condition,
            "repetition": r.repetition, "metric": r.metric,
            "value": round(r.value, 6), "n": r.n, "sd": round(r.sd, 6),
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def write_results(rows, path: str, fmt: str = "csv") -> None:
    """Write rows to `path` as CSV or JSON (atomic: temp file then rename)."""
    rows = list(rows)
    if not rows:
        raise EmptyInputError("no rows to write")
    if fmt == "csv":
        text = render_csv(rows)
    elif fmt == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    _atomic_write(path, text)


def read_results(path: str) -> list[OutputRow]:
    """Parse a results file back into rows (either format)."""
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        records = json.loads(text)
    else:
        reader = csv.DictReader(text.splitlines())
        records = list(reader)
    return [
        OutputRow(
            experiment=r["experiment"], condition=r["condition"],
            repetition=int(r["repetition"]), metric=r["metric"],
            value=float(r["value"]), n=int(r["n"]), sd=float(r["sd"]),
        )
        for r in records
    ]
