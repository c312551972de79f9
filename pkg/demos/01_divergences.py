"""
Bregman divergences on the simplex
==================================

KL is asymmetric and can be infinite; entropy and cross-entropy add up.
"""

import numpy as np
import bregman_hausdorff as bh

p = np.array([1 / 2, 1 / 4, 1 / 8, 1 / 8])
q = np.array([1 / 3, 1 / 3, 1 / 3, 0.0])

# q gives zero mass to an event p can emit: coding p with q fails
print("D(p || q) =", bh.divergence("kl", p, q))
print("D(q || p) =", round(bh.divergence("kl", q, p), 4), "bits")
print("H(p)      =", bh.shannon_entropy(p), "bits")

# relative entropy is cross-entropy minus entropy
r = np.array([0.4, 0.3, 0.2, 0.1])
print("H(p, r) - H(p) =", bh.cross_entropy(p, r) - bh.shannon_entropy(p))
print("D(p || r)      =", bh.divergence("kl", p, r))

# every generator decomposes into per-coordinate terms
for name in ("se", "gkl", "is"):
    x, y = np.array([1.0, 2.0, 0.5]), np.array([1.5, 1.0, 0.5])
    print(name, bh.coord_divergence(name, x, y), "->", bh.divergence(name, x, y))

# the gradient map sends D(x || y) to the conjugate divergence with swapped arguments
xs, ys = bh.conjugate_map("is", x), bh.conjugate_map("is", y)
print("D_is(y || x) =", bh.divergence("is", y, x), " via conjugates:", bh.conjugate_divergence("is", xs, ys))
