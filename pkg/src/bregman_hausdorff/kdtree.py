"""Exact Bregman nearest-neighbour search with a Kd-tree.

The tree itself knows nothing about divergences: it is a median split on
the widest coordinate with tight bounding boxes per node.  A query picks
the generator and the direction.  Pruning uses the fact that every
coordinate summand of a decomposable divergence is unimodal with its
minimum at equality, in either argument, so the smallest divergence from a
query to a box is obtained by clamping the query into the box.
"""

from dataclasses import dataclass
import enum

import numpy as np

from . import _kernels as K
from .data import as_cloud
from .divergences import get_generator
from .errors import DomainError, UsageError

DEFAULT_LEAF_CAPACITY = 16


class Direction(enum.Enum):
    """Which argument the stored point occupies.

    ``QUERY_TO_STORED`` minimises D(q || s); ``STORED_TO_QUERY`` minimises
    D(s || q).
    """

    QUERY_TO_STORED = "query_to_stored"
    STORED_TO_QUERY = "stored_to_query"

    @property
    def reverse(self):
        return self is Direction.STORED_TO_QUERY


@dataclass(frozen=True)
class NnAnswer:
    index: int
    div: float


class BregmanKdTree:
    """Binary space partition over a fixed set of stored points.

    Node arrays are indexed by node id, root is node 0.  ``left[i] == -1``
    marks a leaf holding tree-order positions ``start[i]:end[i]``;
    ``order[pos]`` maps a position back to the input row.
    """

    def __init__(self, points, leaf_capacity=DEFAULT_LEAF_CAPACITY):
        pts = np.asarray(as_cloud(points), dtype=np.float64)
        if pts.shape[0] == 0:
            raise UsageError("cannot build a tree over an empty point set")
        if int(leaf_capacity) < 1:
            raise UsageError("leaf_capacity must be a positive integer")
        self.leaf_capacity = int(leaf_capacity)
        self._build(pts)
        self._log_cache = {}

    def _build(self, pts):
        n, d = pts.shape
        order = np.arange(n)
        left, right, start, end, sdim, sval, lo, hi = ([] for _ in range(8))
        depth = 0
        # Explicit stack of (node_id, lo, hi, level); pre-order ids.
        stack = [(self._new_node(left, right, start, end, sdim, sval, lo, hi), 0, n, 0)]
        while stack:
            node, a, b, level = stack.pop()
            depth = max(depth, level)
            block = pts[order[a:b]]
            lo[node] = block.min(axis=0)
            hi[node] = block.max(axis=0)
            start[node], end[node] = a, b
            if b - a <= self.leaf_capacity:
                continue
            k = int(np.argmax(hi[node] - lo[node]))
            if hi[node][k] == lo[node][k]:
                continue  # all points identical
            perm = np.argsort(block[:, k], kind="stable")
            order[a:b] = order[a:b][perm]
            mid = a + (b - a) // 2
            sdim[node] = k
            sval[node] = pts[order[mid - 1], k]
            lchild = self._new_node(left, right, start, end, sdim, sval, lo, hi)
            rchild = self._new_node(left, right, start, end, sdim, sval, lo, hi)
            left[node], right[node] = lchild, rchild
            stack.append((rchild, mid, b, level + 1))
            stack.append((lchild, a, mid, level + 1))

        self.n, self.dim = n, d
        self.depth = depth
        self.order = order
        self.points = np.ascontiguousarray(pts[order])
        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.start = np.array(start, dtype=np.int64)
        self.end = np.array(end, dtype=np.int64)
        self.split_dim = np.array(sdim, dtype=np.int64)
        self.split_val = np.array(sval, dtype=np.float64)
        self.lo = np.ascontiguousarray(np.array(lo))
        self.hi = np.ascontiguousarray(np.array(hi))
        for a in (self.order, self.points, self.left, self.right, self.start, self.end,
                  self.split_dim, self.split_val, self.lo, self.hi):
            a.setflags(write=False)

    @staticmethod
    def _new_node(left, right, start, end, sdim, sval, lo, hi):
        left.append(-1)
        right.append(-1)
        start.append(0)
        end.append(0)
        sdim.append(-1)
        sval.append(0.0)
        lo.append(None)
        hi.append(None)
        return len(left) - 1

    @property
    def n_nodes(self):
        return self.left.shape[0]

    def is_leaf(self, node):
        return self.left[node] < 0

    def leaf_indices(self, node):
        """Input-row indices stored below ``node``."""
        return self.order[self.start[node]:self.end[node]]

    def structure(self):
        """Tuple of node arrays; equal tuples mean identical trees."""
        return (self.order, self.left, self.right, self.start, self.end,
                self.split_dim, self.split_val, self.lo, self.hi)

    def same_structure(self, other):
        return all(np.array_equal(a, b) for a, b in zip(self.structure(), other.structure()))

    def _logs(self, code):
        # Logs of stored points and box corners, per generator family.
        key = code == K.SE
        if key not in self._log_cache:
            self._log_cache[key] = (K.log_cache(code, self.points), K.log_cache(code, self.lo),
                                    K.log_cache(code, self.hi))
        return self._log_cache[key]

    def kernel_args(self, code):
        lpts, llo, lhi = self._logs(code)
        return (self.points, lpts, self.order, self.left, self.right, self.start, self.end,
                self.split_dim, self.split_val, self.lo, self.hi, llo, lhi, self.depth)

    def query(self, q, g, direction=Direction.QUERY_TO_STORED, incremental=True):
        return nn_query(self, q, g, direction, incremental=incremental)

    def shell_query(self, q, g, direction, threshold):
        return shell_query(self, q, g, direction, threshold)

    def __repr__(self):
        return (f"BregmanKdTree(n={self.n}, dim={self.dim}, nodes={self.n_nodes}, "
                f"depth={self.depth}, leaf_capacity={self.leaf_capacity})")


def build(points, leaf_capacity=DEFAULT_LEAF_CAPACITY):
    return BregmanKdTree(points, leaf_capacity)


def _direction(direction):
    return direction if isinstance(direction, Direction) else Direction(direction)


def check_queries(g, Q, dim):
    """Queries as a C-contiguous 2-d array, checked against the generator domain."""
    Q = np.ascontiguousarray(np.atleast_2d(np.asarray(Q, dtype=np.float64)))
    if Q.shape[1] != dim:
        raise UsageError(f"dimension mismatch: queries have {Q.shape[1]}, stored points {dim}")
    if not np.all(np.isfinite(Q)):
        raise DomainError("query has non-finite coordinates")
    if g.code != K.SE and np.any(Q < 0):
        raise DomainError(f"query has negative coordinates, outside the {g.name} domain")
    return Q


def query_batch(tree, Q, g, direction=Direction.QUERY_TO_STORED, thresholds=None,
                incremental=True):
    """Vectorised :func:`nn_query` / :func:`shell_query`.

    Returns (indices, divergences, terminated, counters) where counters is
    [nodes_visited, points_visited].  With ``thresholds`` given, rows with
    ``terminated`` set stopped early and carry index -1.
    """
    g = get_generator(g)
    direction = _direction(direction)
    Q = check_queries(g, Q, tree.dim)
    m = Q.shape[0]
    use_thr = thresholds is not None
    thr = np.broadcast_to(np.asarray(thresholds if use_thr else 0.0, dtype=np.float64), (m,))
    thr = np.ascontiguousarray(thr)
    if use_thr and np.any(thr < 0):
        raise UsageError("threshold must be non-negative")
    idx = np.empty(m, np.int64)
    div = np.empty(m)
    term = np.zeros(m, np.bool_)
    counters = np.zeros(2, np.int64)
    K.tree_nn_batch(g.code, direction.reverse, Q, K.log_cache(g.code, Q), *tree.kernel_args(g.code),
                    thr, use_thr, not incremental, idx, div, term, counters)
    return idx, div, term, counters


def nn_query(tree, q, g, direction=Direction.QUERY_TO_STORED, incremental=True):
    """Exact nearest stored point; ties go to the lowest input index.

    ``incremental=False`` recomputes the full box bound at every node
    instead of updating one coordinate per level (same answers, slower).
    """
    idx, div, _, _ = query_batch(tree, np.asarray(q, dtype=np.float64)[None, :], g, direction,
                                 incremental=incremental)
    return NnAnswer(int(idx[0]), float(div[0]))


def shell_query(tree, q, g, direction, threshold):
    """Nearest neighbour unless some stored point is within ``threshold``.

    Returns ``None`` as soon as a visited candidate has divergence
    ``<= threshold``; otherwise the exact :class:`NnAnswer`, whose
    divergence then exceeds the threshold.
    """
    idx, div, term, _ = query_batch(tree, np.asarray(q, dtype=np.float64)[None, :], g, direction,
                                    thresholds=float(threshold))
    if term[0]:
        return None
    return NnAnswer(int(idx[0]), float(div[0]))


def box_min_divergence(g, q, box, direction=Direction.QUERY_TO_STORED):
    """Smallest divergence between ``q`` and any point of an axis-aligned box.

    ``box`` is a pair of arrays (lo, hi).  The value is attained at the
    query clamped into the box.
    """
    g = get_generator(g)
    direction = _direction(direction)
    q = np.asarray(q, dtype=np.float64)
    lo, hi = (np.asarray(b, dtype=np.float64) for b in box)
    return float(K.box_bound(g.code, direction.reverse, q, K.log_cache(g.code, q), lo, hi,
                             K.log_cache(g.code, lo), K.log_cache(g.code, hi)))


def linear_query_batch(points, Q, g, direction=Direction.QUERY_TO_STORED):
    """Brute-force reference for :func:`query_batch` (indices, divergences)."""
    g = get_generator(g)
    direction = _direction(direction)
    S = np.ascontiguousarray(np.asarray(points, dtype=np.float64))
    Q = check_queries(g, Q, S.shape[1])
    idx = np.empty(Q.shape[0], np.int64)
    div = np.empty(Q.shape[0])
    K.linear_nn_batch(g.code, direction.reverse, Q, K.log_cache(g.code, Q), S,
                      K.log_cache(g.code, S), idx, div)
    return idx, div
