"""
Exact nearest neighbours under a Bregman divergence
===================================================

The tree is built once and answers queries in either direction.
"""

import numpy as np
import bregman_hausdorff as bh
from bregman_hausdorff.kdtree import linear_query_batch, query_batch

stored = bh.sample_simplex(10, 20_000, seed=0)
queries = bh.sample_simplex(10, 500, seed=1)

tree = bh.build(stored, leaf_capacity=16)
print(tree.n, "points,", tree.n_nodes, "nodes, depth", tree.depth)

# D(q || x): the query sits in the first argument
ans = bh.nn_query(tree, queries[0], "kl", bh.Direction.QUERY_TO_STORED)
print("nearest to query 0:", ans)

# D(x || q) is a different neighbour in general
rev = bh.nn_query(tree, queries[0], "kl", bh.Direction.STORED_TO_QUERY)
print("reverse direction: ", rev)

# a batch agrees with the brute-force scan, index for index
idx, div, _, counters = query_batch(tree, queries, "kl")
lidx, ldiv = linear_query_batch(stored, queries, "kl")
print("matches linear scan:", np.array_equal(idx, lidx) and np.array_equal(div, ldiv))
print("points touched per query: %.0f of %d" % (counters[1] / len(queries), tree.n))

# a shell query gives up as soon as something within the threshold shows up
print(bh.shell_query(tree, queries[0], "kl", "query_to_stored", threshold=0.5))
print(bh.shell_query(tree, queries[0], "kl", "query_to_stored", threshold=0.0))
