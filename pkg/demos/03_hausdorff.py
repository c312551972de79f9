"""
One-sided Bregman-Hausdorff divergences
=======================================

How far is the worst point of P from its best match in Q?  The answer
depends on the direction, and the two sides are never symmetrised.
"""

import numpy as np
import bregman_hausdorff as bh

rng = np.random.default_rng(0)
P = rng.dirichlet(np.full(3, 20.0), size=2000)
Q = np.vstack([rng.dirichlet(np.full(3, 20.0), size=2000), [[0.98, 0.01, 0.01]]])

pq, qp = bh.hausdorff_both_directions(P, Q, "kl")
print("H(P || Q) = %.4f bits, witness %s" % (pq.value, pq.witness))
print("H(Q || P) = %.4f bits, witness %s" % (qp.value, qp.witness))
# the outlier in Q only shows up on one side
print("outlier is Q[%d]" % qp.witness[0])

# the dual variant measures D(q || p) instead
print("dual H'(P || Q) = %.4f" % bh.hausdorff(P, Q, "kl", "dual").value)

# all backends give the same number; the shell skips most of the work
for backend in ("linear", "kdtree", "shell"):
    r = bh.hausdorff(P, Q, "kl", backend=backend)
    print("%-7s %.12f  points visited %8d  early stops %d"
          % (backend, r.value, r.stats.points_visited, r.stats.early_terminations))
