"""Deterministic trace serialization.

The per-run CSV schema is stable and ordered:

    t,t_local,k,beta,x0..x{d-1},y,best_y,r_b,expanded,d_eps,
    lo0..lo{d-1},hi0..hi{d-1},lambda_max,M,flags

Floats are written with ``repr`` (shortest round-trip form), empty cells
encode nulls, and ``expanded`` is 0/1 — so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile

from .engine import RunTrace


def columns(dim: int) -> list[str]:
    cols = ["t", "t_local", "k", "beta"]
    cols += [f"x{j}" for j in range(dim)]
    cols += ["y", "best_y", "r_b", "expanded", "d_eps"]
    cols += [f"lo{j}" for j in range(dim)]
    cols += [f"hi{j}" for j in range(dim)]
    cols += ["lambda_max", "M", "flags"]
    return cols


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def trace_rows(trace: RunTrace) -> list[list]:
    rows = []
    for r in trace.records:
        row = [r.t, r.t_local, r.k, r.beta]
        row += [float(v) for v in r.x]
        row += [r.y, r.best_y, r.r_b, r.expanded, r.d_eps]
        row += [float(v) for v in r.lo]
        row += [float(v) for v in r.hi]
        row += [r.lambda_max, r.m_bound, ";".join(r.flags)]
        rows.append(row)
    return rows


def write_trace_csv(path: str, dim: int, rows: list[list]) -> None:
    """Write the trace CSV atomically (temp file + rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns(dim))
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def write_summary_json(path: str, summary: dict) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def write_compare_csv(path: str, rows: list[dict]) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["benchmark", "strategy", "iteration", "mean_best", "stderr"])
            for r in rows:
                writer.writerow(
                    [
                        r["benchmark"],
                        r["strategy"],
                        r["iteration"],
                        repr(float(r["mean_best"])),
                        repr(float(r["stderr"])),
                    ]
                )
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
