"""
Kd-tree shell search against the linear scan
============================================

Small by default; pass sizes on the command line, e.g.
``python 05_benchmark.py 50000 5000``.
"""

import sys

from bregman_hausdorff.benchmark import run_benchmark

n_p, n_q = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (20_000, 2_000)

out = run_benchmark(dims=(10, 50), sizes=(n_p, n_q), divergences=("kl", "is"),
                    backends=("linear", "kdtree", "shell"), repeats=3)

for r in out["records"]:
    print("%-3s d=%-3d %-7s %9.4f s  value %.6f" % (r["divergence"], r["dim"], r["backend"],
                                                   r["median_seconds"], r["value"]))
for s in out["speedups"]:
    print("%-3s d=%-3d shell is %.1fx faster than linear" % (s["divergence"], s["dim"], s["speedup"]))
