"""Timing harness: Kd-tree backends against the linear scan on simplex data."""

import statistics
import time

from .data import sample_simplex
from .hausdorff import BACKENDS, hausdorff


def _warm_up(divergence, backends, variant):
    # First call in a process loads compiled kernels from the numba cache.
    P = sample_simplex(3, 8, seed=0)
    for b in backends:
        hausdorff(P, P, divergence, variant, b)


def time_backend(P, Q, divergence, backend, variant="primal", repeats=3, n_threads=1):
    """Wall time per repeat (tree build included) and the last result."""
    times = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = hausdorff(P, Q, divergence, variant, backend, n_threads=n_threads)
        times.append(time.perf_counter() - t0)
    return times, result


def run_benchmark(dims=(10, 50), sizes=(50_000, 5_000), divergences=("kl",),
                  backends=BACKENDS, repeats=3, seed=0, variant="primal", n_threads=1):
    """Time every (dim, divergence, backend) cell.

    ``sizes`` is (|P|, |Q|): |P| queries against an index over Q.  Returns
    a dict with one record per cell (median of ``repeats`` runs) and one
    speed-up record per (dim, divergence) comparing shell with linear.
    """
    n_p, n_q = sizes
    records = []
    speedups = []
    for divergence in divergences:
        _warm_up(divergence, backends, variant)
        for dim in dims:
            P = sample_simplex(dim, n_p, seed=seed)
            Q = sample_simplex(dim, n_q, seed=seed + 1)
            medians = {}
            for backend in backends:
                times, res = time_backend(P, Q, divergence, backend, variant, repeats, n_threads)
                medians[backend] = statistics.median(times)
                records.append({
                    "dim": dim,
                    "divergence": divergence,
                    "backend": backend,
                    "n_p": n_p,
                    "n_q": n_q,
                    "median_seconds": medians[backend],
                    "times": times,
                    "value": res.value,
                    "early_terminations": res.stats.early_terminations,
                    "points_visited": res.stats.points_visited,
                })
            if "shell" in medians and "linear" in medians:
                speedups.append({
                    "dim": dim,
                    "divergence": divergence,
                    "speedup": medians["linear"] / medians["shell"],
                })
    return {"records": records, "speedups": speedups}
