"""Flop-rate benchmark harness for the kernel set.

Methodology: sizes are swept in ascending order; inputs for each size
come from a fixed per-size seed; the smallest size of every sweep is
verified against the naive oracles before any timing; each timed point
is one warm-up call followed by best-of-r repetitions on the monotonic
clock (time.perf_counter).  Scratch copies for destructive calls are
made outside the timed region.

Absolute rates are hardware-bound and are not asserted anywhere; the
harness exists to measure, not to hit numbers.
"""

from __future__ import annotations

import csv
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import testkit
from .mpblas import (Matrix, Vector, Raxpy, Raxpy_par, Rdot, Rdot_par,
                     Rgemm, Rgemm_par, Rgemv, Rsyrk)
from .mplapack import Rgetrf, Rpotrf

ROUTINES = ("Raxpy", "Rdot", "Rgemv", "Rgemm", "Rsyrk", "Rgetrf", "Rpotrf")
PARALLEL_ROUTINES = ("Raxpy", "Rdot", "Rgemm")
BENCH_SEED = 7
DEFAULT_REPS = 3
ALPHA = 0.75
BETA = -0.5


@dataclass(frozen=True)
class BenchRecord:
    """One timed point.  mflops == flops/elapsed_s/1e6 by construction;
    k is None for routines whose flop formula has no k term."""
    routine: str
    precision: str
    n: int
    k: Optional[int]
    threads: int
    elapsed_s: float
    mflops: float


def flop_count(routine, n, k=None, m=None):
    """Leading-term flop totals (m and k default to n):
    Rgemm 2mnk; Rsyrk n^2*k + n*k; Rgemv 2mn; Raxpy/Rdot 2n;
    Rgetrf (2/3)n^3; Rpotrf (1/3)n^3.
    """
    m = n if m is None else m
    k = n if k is None else k
    if routine == "Rgemm":
        return 2.0 * m * n * k
    if routine == "Rsyrk":
        return float(n * n * k + n * k)
    if routine == "Rgemv":
        return 2.0 * m * n
    if routine in ("Raxpy", "Rdot"):
        return 2.0 * n
    if routine == "Rgetrf":
        return 2.0 * n ** 3 / 3.0
    if routine == "Rpotrf":
        return n ** 3 / 3.0
    raise ValueError(f"unknown routine {routine!r}")


def _vec(draws, precision):
    v = Vector(len(draws), precision)
    for i, val in enumerate(draws):
        v.set(i, float(val))
    return v


def _make_inputs(routine, precision, n):
    """Draws for one size; binary64 shadows kept for the oracle."""
    g = np.random.default_rng(np.random.SeedSequence([BENCH_SEED, n]))
    d = {"n": n}
    if routine in ("Raxpy", "Rdot"):
        d["xv"] = g.uniform(-1.0, 1.0, n)
        d["yv"] = g.uniform(-1.0, 1.0, n)
        d["x"] = _vec(d["xv"], precision)
        d["y"] = _vec(d["yv"], precision)
    elif routine == "Rgemv":
        d["am"] = g.uniform(-1.0, 1.0, (n, n))
        d["xv"] = g.uniform(-1.0, 1.0, n)
        d["yv"] = g.uniform(-1.0, 1.0, n)
        d["a"] = Matrix.from_rows(d["am"].tolist(), precision)
        d["x"] = _vec(d["xv"], precision)
        d["y"] = _vec(d["yv"], precision)
    elif routine == "Rgemm":
        d["am"] = g.uniform(-1.0, 1.0, (n, n))
        d["bm"] = g.uniform(-1.0, 1.0, (n, n))
        d["cm"] = g.uniform(-1.0, 1.0, (n, n))
        d["a"] = Matrix.from_rows(d["am"].tolist(), precision)
        d["b"] = Matrix.from_rows(d["bm"].tolist(), precision)
        d["c"] = Matrix.from_rows(d["cm"].tolist(), precision)
    elif routine == "Rsyrk":
        d["am"] = g.uniform(-1.0, 1.0, (n, n))
        d["cm"] = g.uniform(-1.0, 1.0, (n, n))
        d["a"] = Matrix.from_rows(d["am"].tolist(), precision)
        d["c"] = Matrix.from_rows(d["cm"].tolist(), precision)
    elif routine == "Rgetrf":
        d["am"] = g.uniform(-1.0, 1.0, (n, n))
        d["a"] = Matrix.from_rows(d["am"].tolist(), precision)
    elif routine == "Rpotrf":
        raw = g.uniform(-1.0, 1.0, (n, n))
        spd = raw.T @ raw + n * np.eye(n)
        d["am"] = spd
        d["a"] = Matrix.from_rows(spd.tolist(), precision)
    else:
        raise ValueError(f"unknown routine {routine!r}")
    return d


def _scratch(routine, d):
    """Fresh destination object for one call (None when read-only)."""
    if routine == "Raxpy" or routine == "Rgemv":
        return d["y"].copy()
    if routine in ("Rgemm", "Rsyrk"):
        return d["c"].copy()
    if routine in ("Rgetrf", "Rpotrf"):
        return d["a"].copy()
    return None


def _call(routine, n, d, threads, scr):
    if routine == "Raxpy":
        if threads > 1:
            Raxpy_par(n, ALPHA, d["x"], 1, scr, 1, t=threads)
        else:
            Raxpy(n, ALPHA, d["x"], 1, scr, 1)
        return None
    if routine == "Rdot":
        if threads > 1:
            return Rdot_par(n, d["x"], 1, d["y"], 1, t=threads)
        return Rdot(n, d["x"], 1, d["y"], 1)
    if routine == "Rgemv":
        Rgemv("N", n, n, ALPHA, d["a"], d["a"].ld, d["x"], 1, BETA, scr, 1)
        return None
    if routine == "Rgemm":
        if threads > 1:
            Rgemm_par("N", "N", n, n, n, ALPHA, d["a"], d["a"].ld,
                      d["b"], d["b"].ld, BETA, scr, scr.ld, t=threads)
        else:
            Rgemm("N", "N", n, n, n, ALPHA, d["a"], d["a"].ld,
                  d["b"], d["b"].ld, BETA, scr, scr.ld)
        return None
    if routine == "Rsyrk":
        Rsyrk("U", "N", n, n, ALPHA, d["a"], d["a"].ld, BETA, scr, scr.ld)
        return None
    if routine == "Rgetrf":
        ipiv, info = Rgetrf(n, n, scr)
        return info
    if routine == "Rpotrf":
        return Rpotrf("L", n, scr)
    raise ValueError(f"unknown routine {routine!r}")


def _as_float(v):
    return float(v)


def _spot_check(routine, precision, n, d, threads):
    """Verify the exact call being timed against an independent check:
    naive binary64 oracle for the BLAS kernels (bitwise at f64, ratio
    bound at dd), residual ratio for the factorizations."""
    eps64 = 2.0 ** -52
    scr = _scratch(routine, d)
    if routine == "Rgetrf":
        a0 = d["a"].copy()
        ipiv, info = Rgetrf(n, n, scr)
        if info != 0:
            raise RuntimeError(f"bench spot check: Rgetrf info={info}")
        rep = testkit.residual_lu(a0, scr, ipiv)
        if not rep.passed:
            raise RuntimeError(f"bench spot check failed: {rep.line()}")
        return
    if routine == "Rpotrf":
        a0 = d["a"].copy()
        info = Rpotrf("L", n, scr)
        if info != 0:
            raise RuntimeError(f"bench spot check: Rpotrf info={info}")
        rep = testkit.residual_chol("L", a0, scr)
        if not rep.passed:
            raise RuntimeError(f"bench spot check failed: {rep.line()}")
        return
    out = _call(routine, n, d, threads, scr)
    if routine == "Raxpy":
        ref = testkit.oracle_axpy(n, ALPHA, list(d["xv"]), 1,
                                  list(d["yv"]), 1)
        got = [_as_float(scr.get(i)) for i in range(n)]
    elif routine == "Rdot":
        ref = [testkit.oracle_dot(n, list(d["xv"]), 1, list(d["yv"]), 1)]
        got = [_as_float(out)]
    elif routine == "Rgemv":
        ref = testkit.oracle_gemv("N", n, n, ALPHA, d["am"].tolist(),
                                  list(d["xv"]), 1, BETA, list(d["yv"]), 1)
        got = [_as_float(scr.get(i)) for i in range(n)]
    elif routine == "Rgemm":
        rc = testkit.oracle_gemm("N", "N", n, n, n, ALPHA, d["am"].tolist(),
                                 d["bm"].tolist(), BETA, d["cm"].tolist())
        ref = [rc[i][j] for j in range(n) for i in range(n)]
        got = [_as_float(scr.get(i, j)) for j in range(n) for i in range(n)]
    elif routine == "Rsyrk":
        rc = testkit.oracle_syrk("U", "N", n, n, ALPHA, d["am"].tolist(),
                                 BETA, d["cm"].tolist())
        ref = [rc[i][j] for j in range(n) for i in range(j + 1)]
        got = [_as_float(scr.get(i, j)) for j in range(n)
               for i in range(j + 1)]
    else:
        raise ValueError(f"unknown routine {routine!r}")
    diff = max((abs(a - b) for a, b in zip(got, ref)), default=0.0)
    if precision == "f64":
        if diff != 0.0:
            raise RuntimeError(
                f"bench spot check: {routine} f64 deviates from oracle "
                f"by {diff:.3e} at n={n}")
    else:
        scale = max(1.0, max((abs(r) for r in ref), default=0.0))
        ratio = diff / (max(1, n) * eps64 * scale)
        if ratio >= testkit.THRESHOLD:
            raise RuntimeError(
                f"bench spot check: {routine} {precision} ratio "
                f"{ratio:.3f} at n={n}")


def run_bench(routine, precision, sizes, threads=1, reps=DEFAULT_REPS,
              force=False):
    """Time one routine over an ascending size sweep; yields one
    BenchRecord per size in sweep order.

    threads > 1 routes to the deterministic parallel variant (Raxpy,
    Rdot, Rgemm only) and may not exceed the host core count unless
    force is set.  A size whose input allocation fails is skipped with
    a note on stderr.
    """
    if routine not in ROUTINES:
        raise ValueError(f"unknown routine {routine!r}")
    if precision not in ("f64", "dd"):
        raise ValueError(f"unknown precision {precision!r}")
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes):
        raise ValueError("sizes must be >= 1")
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    threads = int(threads)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if threads > 1 and routine not in PARALLEL_ROUTINES:
        raise ValueError(f"{routine} has no parallel variant")
    cores = os.cpu_count() or 1
    if threads > cores and not force:
        raise ValueError(
            f"threads={threads} oversubscribes {cores} core(s); "
            "pass force=True to override")
    reps = max(1, int(reps))

    def sweep():
        checked = False
        for n in sizes:
            try:
                d = _make_inputs(routine, precision, n)
            except MemoryError:
                print(f"bench: skipped {routine} {precision} n={n}: "
                      "allocation failed", file=sys.stderr)
                continue
            if not checked:
                _spot_check(routine, precision, n, d, threads)
                checked = True
            info = _call(routine, n, d, threads, _scratch(routine, d))
            if routine in ("Rgetrf", "Rpotrf") and info != 0:
                raise RuntimeError(
                    f"bench: {routine} info={info} at n={n}")
            best = None
            for _ in range(reps):
                scr = _scratch(routine, d)
                t0 = time.perf_counter()
                _call(routine, n, d, threads, scr)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            best = max(best, 1e-9)
            k = n if routine in ("Rgemm", "Rsyrk") else None
            flops = flop_count(routine, n, k=k)
            yield BenchRecord(routine, precision, n, k, threads, best,
                              flops / best / 1e6)

    return sweep()


def emit_csv(records, path):
    """Write the records as CSV and render an mflops chart PNG next to
    it (same name, .png suffix).  Returns the list written."""
    records = list(records)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["routine", "precision", "n", "k", "threads",
                     "elapsed_s", "mflops"])
        for r in records:
            wr.writerow([r.routine, r.precision, r.n,
                         "" if r.k is None else r.k, r.threads,
                         repr(r.elapsed_s), repr(r.mflops)])
    render_bench_png(records, _png_sibling(path))
    return records


def read_csv(path):
    """Parse a file written by emit_csv back into BenchRecord objects."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(BenchRecord(
                row["routine"], row["precision"], int(row["n"]),
                int(row["k"]) if row["k"] else None, int(row["threads"]),
                float(row["elapsed_s"]), float(row["mflops"])))
    return out


def _png_sibling(csv_path):
    root, _ = os.path.splitext(csv_path)
    return root + ".png"


def render_bench_png(records, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    series = {}
    for r in records:
        series.setdefault((r.routine, r.precision, r.threads),
                          []).append((r.n, r.mflops))
    for key in sorted(series):
        pts = sorted(series[key])
        label = "%s %s t=%d" % key
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                marker="o", markersize=3, linewidth=1, label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("MFlops")
    ax.set_title("kernel flop rates")
    if series:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
