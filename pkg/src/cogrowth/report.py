"""CSV writers for run results, block means and exact overlay curves."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .stats import RunReport

VERSION_PREFIX = "# cogrowth-version:"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


def header_lines(meta: dict) -> list[str]:
    lines = [f"{VERSION_PREFIX} {__version__}"]
    lines += [f"# {k}: {v}" for k, v in meta.items()]
    return lines


def write_results_csv(reports: Sequence[RunReport], path: str | Path, meta: dict) -> None:
    lines = header_lines(meta)
    for r in reports:
        if not r.tau_ok:
            lines.append(f"# warning: beta={_fmt(r.beta)} tau_int={_fmt(r.tau_int)} "
                         f"is not small against block size {r.block_size}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RunReport.COLUMNS)
        for r in reports:
            w.writerow([_fmt(v) for v in r.row()])


def write_blocks_csv(reports: Sequence[RunReport], path: str | Path, meta: dict) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(header_lines(meta)) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["beta", "block", "block_mean"])
        for r in reports:
            for i, m in enumerate(r.block_means):
                w.writerow([_fmt(r.beta), i, _fmt(m)])


def write_exact_csv(points: Iterable[tuple[float, float]], path: str | Path, meta: dict) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(header_lines(meta)) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["beta", "expected_length"])
        for b, e in points:
            w.writerow([_fmt(b), _fmt(e)])


def read_results_csv(path: str | Path) -> tuple[dict, list[dict]]:
    """Return (metadata, rows) from a results file."""
    meta: dict = {}
    body = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition(":")
                meta[key.strip()] = val.strip()
            else:
                body.append(line)
    rows = list(csv.DictReader(body))
    return meta, rows


def strip_version(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.startswith(VERSION_PREFIX))
