from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable

from ...exceptions import ConfigError
from .grid import EvalRecord

CSV_HEADER = ("method", "depth", "length", "count", "exact_match", "mean_time_s", "p95_time_s", "errors")


def format_errors(errors: dict[str, int]) -> str:
    return ";".join(f"{k}:{v}" for k, v in sorted(errors.items()))


def parse_errors(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in filter(None, text.split(";")):
        kind, sep, n = item.partition(":")
        if not sep:
            raise ConfigError(f"bad error histogram entry {item!r}")
        out[kind] = int(n)
    return out


def _fmt_time(t: float | None, timing: bool) -> str:
    if t is None or not timing:
        return ""
    return f"{t:.6f}"


def write_csv(records: Iterable[EvalRecord], path: str | Path, *, timing: bool = True) -> None:
    """Rows in (method, depth, length) order; `timing=False` blanks the two wall-time columns."""
    rows = sorted(records, key=EvalRecord.sort_key)
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(
                [
                    r.method,
                    r.depth,
                    r.length,
                    r.count,
                    f"{r.exact_match:.4f}",
                    _fmt_time(r.mean_time_s, timing),
                    _fmt_time(r.p95_time_s, timing),
                    format_errors(r.errors),
                ]
            )


def read_csv(path: str | Path) -> list[EvalRecord]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ConfigError(f"{path}: expected header {','.join(CSV_HEADER)}")
        return [
            EvalRecord(
                method=row["method"],
                depth=int(row["depth"]),
                length=int(row["length"]),
                count=int(row["count"]),
                exact_match=float(row["exact_match"]),
                errors=parse_errors(row["errors"]),
                mean_time_s=float(row["mean_time_s"]) if row["mean_time_s"] else None,
                p95_time_s=float(row["p95_time_s"]) if row["p95_time_s"] else None,
            )
            for row in reader
        ]
