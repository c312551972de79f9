"""One-sided Bregman-Hausdorff divergences between finite point sets.

For point sets P and Q and a generator F:

    primal  H (P || Q) = max_{p in P} min_{q in Q} D_F(p || q)
    dual    H'(P || Q) = max_{p in P} min_{q in Q} D_F(q || p)

The argument order always reads "max over the first set, min over the
second".  The nearest-neighbour index is therefore built on Q and every
point of P is a query.

Three backends compute the same number:

``linear``  double loop, the reference.
``kdtree``  one exact Kd-tree query per point of P.
``shell``   Kd-tree queries that stop as soon as some candidate lies
            within the running maximum; such a query cannot raise the
            maximum, so the result is unchanged.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import enum
import math
import time

import numpy as np

from . import _kernels as K
from .data import as_cloud
from .divergences import get_generator
from .errors import UsageError
from .kdtree import DEFAULT_LEAF_CAPACITY, BregmanKdTree, Direction, check_queries

BACKENDS = ("linear", "kdtree", "shell")


class Variant(enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"

    @property
    def direction(self):
        return Direction.QUERY_TO_STORED if self is Variant.PRIMAL else Direction.STORED_TO_QUERY


@dataclass
class HausdorffStats:
    queries: int = 0
    early_terminations: int = 0
    points_visited: int = 0
    nodes_visited: int = 0
    build_seconds: float = 0.0
    query_seconds: float = 0.0
    infinite: bool = False

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class HausdorffResult:
    """Value plus witness pair (index into the max-side set, index into the
    min-side set) with ``D(witness)`` equal to ``value`` in the variant's
    direction."""

    value: float
    witness: tuple
    stats: HausdorffStats = field(default_factory=HausdorffStats)


def _variant(v):
    return v if isinstance(v, Variant) else Variant(str(v).lower())


def _prepare(P, Q, g):
    g = get_generator(g)
    P = np.asarray(as_cloud(P), dtype=np.float64)
    Q = np.asarray(as_cloud(Q), dtype=np.float64)
    if P.shape[0] == 0 or Q.shape[0] == 0:
        raise UsageError("point sets must be non-empty")
    if P.shape[1] != Q.shape[1]:
        raise UsageError(f"dimension mismatch: {P.shape[1]} vs {Q.shape[1]}")
    check_queries(g, Q, Q.shape[1])
    return g, check_queries(g, P, Q.shape[1]), np.ascontiguousarray(Q)


def _chunks(m, n_threads):
    n_threads = max(1, min(int(n_threads), m))
    edges = np.linspace(0, m, n_threads + 1).astype(int)
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _reduce(parts):
    """Combine per-chunk (value, wq, ws) in input order, first maximum wins."""
    best = None
    for value, wq, ws in parts:
        if best is None or value > best[0]:
            best = (value, wq, ws)
    return best


def sup_inf(queries, stored, g, direction, backend="shell", leaf_capacity=DEFAULT_LEAF_CAPACITY,
            n_threads=1, tree=None, incremental=True):
    """max over ``queries`` of the min over ``stored`` of the divergence.

    Engine behind every Hausdorff-type quantity in the package.  ``tree``
    may be a prebuilt :class:`BregmanKdTree` over ``stored``.
    """
    if backend not in BACKENDS:
        raise UsageError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    g, A, S = _prepare(queries, stored, g)
    reverse = Direction(direction).reverse
    stats = HausdorffStats()
    LA = K.log_cache(g.code, A)
    chunks = _chunks(A.shape[0], n_threads)

    if backend == "linear":
        t0 = time.perf_counter()
        LS = K.log_cache(g.code, S)

        def run(ab):
            a, b = ab
            v, wq, ws, done, evals = K.linear_sup_inf(g.code, reverse, A[a:b], LA[a:b], S, LS)
            return (v, wq + a, ws), done, evals

        outs = _map(run, chunks)
        stats.query_seconds = time.perf_counter() - t0
        stats.queries = sum(o[1] for o in outs)
        stats.points_visited = sum(o[2] for o in outs)
        value, wq, ws = _reduce([o[0] for o in outs])
    else:
        t0 = time.perf_counter()
        if tree is None:
            tree = BregmanKdTree(S, leaf_capacity)
        targs = tree.kernel_args(g.code)
        t1 = time.perf_counter()
        shell = backend == "shell"

        def run(ab):
            a, b = ab
            c = np.zeros(4, np.int64)
            v, wq, ws = K.tree_sup_inf(g.code, reverse, A[a:b], LA[a:b], *targs, shell,
                                       not incremental, c)
            if wq < 0:
                # Every query stopped at threshold 0: the value is 0 and the
                # first query in the chunk is the witness.
                idx = np.empty(1, np.int64)
                div = np.empty(1)
                K.tree_nn_batch(g.code, reverse, A[a:a + 1], LA[a:a + 1], *targs,
                                np.zeros(1), False, False, idx, div, np.zeros(1, np.bool_), c)
                v, wq, ws = div[0], 0, idx[0]
            return (v, wq + a, ws), c

        outs = _map(run, chunks)
        stats.build_seconds = t1 - t0
        stats.query_seconds = time.perf_counter() - t1
        c = sum(o[1] for o in outs)
        stats.nodes_visited, stats.points_visited = int(c[0]), int(c[1])
        stats.queries, stats.early_terminations = int(c[2]), int(c[3])
        value, wq, ws = _reduce([o[0] for o in outs])

    value = float(value)
    stats.infinite = math.isinf(value)
    return HausdorffResult(value, (int(wq), int(ws)), stats)


def _map(fn, chunks):
    if len(chunks) == 1:
        return [fn(chunks[0])]
    with ThreadPoolExecutor(max_workers=len(chunks)) as ex:
        return list(ex.map(fn, chunks))


def hausdorff(P, Q, g, variant=Variant.PRIMAL, backend="shell", **kw):
    """Primal or dual one-sided Bregman-Hausdorff divergence from P to Q.

    Extra keywords go to :func:`sup_inf` (``leaf_capacity``, ``n_threads``,
    ``tree``, ``incremental``).

    >>> hausdorff([[0.0], [3.0]], [[1.0]], 'se').value
    4.0
    """
    return sup_inf(P, Q, g, _variant(variant).direction, backend, **kw)


def hausdorff_linear(P, Q, g, variant=Variant.PRIMAL, **kw):
    return hausdorff(P, Q, g, variant, "linear", **kw)


def hausdorff_kdtree(P, Q, g, variant=Variant.PRIMAL, **kw):
    return hausdorff(P, Q, g, variant, "kdtree", **kw)


def hausdorff_shell(P, Q, g, variant=Variant.PRIMAL, **kw):
    return hausdorff(P, Q, g, variant, "shell", **kw)


def hausdorff_both_directions(P, Q, g, variant=Variant.PRIMAL, backend="shell", **kw):
    """(H(P || Q), H(Q || P)) under one variant.  No symmetrisation is done."""
    return (hausdorff(P, Q, g, variant, backend, **kw),
            hausdorff(Q, P, g, variant, backend, **kw))
