"""
Chernoff points and the Chernoff-Bregman-Hausdorff distance
===========================================================

A Chernoff point sits on the segment between p and q, equally far from
both.  Under squared Euclidean distance it is the midpoint.
"""

import numpy as np
import bregman_hausdorff as bh

print(bh.chernoff_point("se", [0.0, 0.0], [2.0, 4.0]))

p, q = np.array([0.7, 0.3]), np.array([0.2, 0.8])
c = bh.chernoff_point("kl", p, q)
print("c =", c, " D(p||c) =", bh.divergence("kl", p, c), " D(q||c) =", bh.divergence("kl", q, c))

# one Chernoff point per pair: |P| x |Q| of them
P = bh.sample_simplex(4, 60, seed=0)
Q = bh.sample_simplex(4, 40, seed=1)
cs = bh.chernoff_set("kl", P, Q)
print(len(cs), "points, worst residual %.1e, at most %d bisection steps"
      % (cs.residual.max(), cs.iterations.max()))

# the resulting distances are symmetric in P and Q
for variant in ("primal", "dual"):
    a = bh.chernoff_hausdorff("kl", P, Q, variant).value
    b = bh.chernoff_hausdorff("kl", Q, P, variant).value
    print(variant, a, b, a == b)
