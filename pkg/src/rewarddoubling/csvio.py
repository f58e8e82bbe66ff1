"""CSV writers for traces, bound reports, lemma sweeps and witnesses.

Files are UTF-8 with LF line endings; floats use ``%.17g``.  Every file
starts with a ``#`` comment line naming the RNG so runs can be reproduced.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable

from .adversaries import RNG_NAME, LowerBoundWitness
from .bounds import BoundReport
from .core import Trace
from .onedim import SweepRow


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _header(seed) -> str:
    return f"# rng={RNG_NAME} seed={seed}\n"


def _write(path, seed, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(_header(seed))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def trace_rows(trace: Trace):
    if trace.plays.ndim == 1:
        cols = ["round", "x", "g", "reward_cum"]
        rows = [(t + 1, x, g, c) for t, (x, g, c) in enumerate(
            zip(trace.plays.tolist(), trace.gradients.tolist(), trace.reward_cum.tolist()))]
        return cols, rows
    cols = ["round", "coord", "x", "g"]
    rows = []
    for t in range(trace.T):
        for i, (x, g) in enumerate(zip(trace.plays[t].tolist(), trace.gradients[t].tolist())):
            rows.append((t + 1, i, x, g))
    rows.append(("summary", "reward_cum", trace.cumulative_reward, ""))
    return cols, rows


def write_trace(trace: Trace, path=None, seed=None) -> str:
    """1-D: ``round,x,g,reward_cum``.  n-D: ``round,coord,x,g`` then a ``summary`` row
    whose ``x`` column carries the cumulative reward."""
    cols, rows = trace_rows(trace)
    return _write(path, seed, cols, rows)


def read_trace(path) -> Trace:
    """Inverse of :func:`write_trace` (plays and gradients; reward re-accumulated)."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    rows = list(reader)
    if reader.fieldnames == ["round", "x", "g", "reward_cum"]:
        return Trace.from_arrays([float(r["x"]) for r in rows], [float(r["g"]) for r in rows])
    body = [r for r in rows if r["round"] != "summary"]
    T = len({r["round"] for r in body})
    n = len(body) // T if T else 0
    xs = [[0.0] * n for _ in range(T)]
    gs = [[0.0] * n for _ in range(T)]
    for r in body:
        t, i = int(r["round"]) - 1, int(r["coord"])
        xs[t][i] = float(r["x"])
        gs[t][i] = float(r["g"])
    return Trace.from_arrays(xs, gs)


def write_bounds(reports: Iterable[BoundReport], path=None, seed=None) -> str:
    cols = ["algorithm", "sequence", "comparator", "measured", "bound_name", "bound", "slack"]
    rows = [(r.algorithm, r.sequence, r.comparator, r.measured, r.name, r.bound, r.slack)
            for r in reports]
    return _write(path, seed, cols, rows)


def write_sweep(rows: Iterable[SweepRow], path=None) -> str:
    cols = ["lemma", "tau", "G", "g", "lhs", "rhs", "margin"]
    data = [(r.lemma, r.tau, r.G, r.g, r.lhs, r.rhs, r.margin) for r in rows]
    return _write(path, None, cols, data)


def write_witness(w: LowerBoundWitness, csv_path=None, summary_path=None, seed=None) -> tuple[str, str]:
    text = _write(csv_path, seed, ["index", "g"],
                  [(t + 1, g) for t, g in enumerate(w.sequence.tolist())])
    summary = (f"G={fmt(w.G)}, Q={fmt(w.Q)}, k={w.k}, regret={fmt(w.regret_achieved)}\n"
               f"T={w.sequence.shape[0]}, R={fmt(w.R)}, sample_index={w.index}\n")
    if summary_path is not None:
        Path(summary_path).write_text(summary, encoding="utf-8", newline="\n")
    return text, summary


def read_gradients(path) -> list:
    """Gradient column of a CSV (``g`` header) or one value per line / comma-separated."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and "g" in [c.strip() for c in lines[0].split(",")]:
        return [float(r["g"]) for r in csv.DictReader(lines)]
    out = []
    for ln in lines:
        out.extend(float(v) for v in ln.split(",") if v.strip())
    return out
