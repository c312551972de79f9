"""Chernoff points and Chernoff-Bregman-Hausdorff distances.

The Chernoff point of a pair {p, q} is sought on the segment
c(alpha) = alpha p + (1 - alpha) q as the root of the gap
D(p || c) - D(q || c), which decreases strictly from D(p || q) at alpha = 0
to -D(q || p) at alpha = 1; plain bisection therefore always brackets it.

Naming follows the ball that grows about the *pair*, not about the
Chernoff points:

* primal distance  CH (P, Q) = max_{a in P u Q} min_{c in C} D(a || c)
  (dual balls centred at the Chernoff points C)
* dual distance    CH'(P, Q) = max_{a in P u Q} min_{c in C} D(c || a)
  (primal balls centred at C)

Both are symmetric in (P, Q).  The set C has |P| |Q| points.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .data import as_cloud
from .divergences import get_generator
from .errors import ConvergenceError, DomainError, UsageError
from .hausdorff import Variant, _prepare, _variant, sup_inf


@dataclass(frozen=True)
class ChernoffConfig:
    """Bisection settings; ``tolerance`` bounds |D(p || c) - D(q || c)|."""

    tolerance: float = 1e-10
    max_iterations: int = 200

    def __post_init__(self):
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        if int(self.max_iterations) < 1:
            raise UsageError("max_iterations must be positive")


@dataclass
class ChernoffSet:
    """Chernoff points of every pair, rows ordered q-outer, p-inner.

    Row ``r`` comes from ``P[pair_index[r, 0]]`` and ``Q[pair_index[r, 1]]``.
    ``alpha`` is the weight on the P point, ``residual`` the final |gap|
    and ``bracket`` the gap at the last bracket ends (lo >= 0 >= hi).
    """

    points: np.ndarray
    pair_index: np.ndarray
    alpha: np.ndarray
    residual: np.ndarray
    iterations: np.ndarray
    bracket: np.ndarray

    def __len__(self):
        return self.points.shape[0]


def _check_pair_domain(g, X, name):
    if g.code == K.IS and np.any(X <= 0):
        raise DomainError(f"{name} must be strictly positive for Chernoff points under is")


def chernoff_set(g, P, Q, cfg=None):
    """Chernoff points for all of P x Q (see :class:`ChernoffSet`)."""
    cfg = cfg or ChernoffConfig()
    g, P, Q = _prepare(P, Q, g)
    _check_pair_domain(g, P, "P")
    _check_pair_domain(g, Q, "Q")
    n, m, d = P.shape[0], Q.shape[0], P.shape[1]
    r = n * m
    C = np.empty((r, d))
    alpha = np.empty(r)
    res = np.empty(r)
    iters = np.empty(r, np.int64)
    status = np.empty(r, np.int64)
    glo = np.empty(r)
    ghi = np.empty(r)
    K.chernoff_batch(g.code, P, K.log_cache(g.code, P), Q, K.log_cache(g.code, Q),
                     float(cfg.tolerance), int(cfg.max_iterations),
                     C, alpha, res, iters, status, glo, ghi)
    pair_index = np.stack([np.tile(np.arange(n), m), np.repeat(np.arange(m), n)], axis=1)
    bad = np.flatnonzero(status != K.CH_OK)
    if bad.size:
        r0 = bad[0]
        i, j = pair_index[r0]
        if status[r0] == K.CH_DOMAIN:
            raise DomainError(f"Chernoff point undefined for pair (P[{i}], Q[{j}]): "
                              "divergences are infinite along the segment")
        raise ConvergenceError(
            f"bisection for pair (P[{i}], Q[{j}]) stopped at gap {res[r0]:.3g} "
            f"> tolerance {cfg.tolerance:g} after {iters[r0]} iterations", gap=float(res[r0]))
    return ChernoffSet(C, pair_index, alpha, res, iters, np.stack([glo, ghi], axis=1))


def chernoff_point(g, p, q, cfg=None):
    """Point on the segment [p, q] with D(p || c) = D(q || c) within tolerance.

    >>> chernoff_point('se', [0.0, 0.0], [2.0, 0.0])
    array([1., 0.])
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim != 1 or p.shape != q.shape:
        raise UsageError("p and q must be 1-d points of equal dimension")
    return chernoff_set(g, p[None, :], q[None, :], cfg).points[0]


@dataclass
class ChernoffHausdorffResult:
    """Distance plus the Chernoff set used.

    ``witness`` is (row in the stacked [P; Q], row in ``chernoff.points``).
    """

    value: float
    witness: tuple
    chernoff: ChernoffSet
    stats: object

    @property
    def max_residual(self):
        return float(self.chernoff.residual.max())


def chernoff_hausdorff(g, P, Q, variant=Variant.PRIMAL, backend="shell", cfg=None,
                       max_pairs=None, **kw):
    """Primal or dual Chernoff-Bregman-Hausdorff distance between P and Q.

    The primal variant measures D(a || c) (dual balls about C), the dual
    variant D(c || a).  One index over C serves both.  ``max_pairs`` caps
    |P| |Q| and raises :class:`UsageError` when exceeded.
    """
    P = np.asarray(as_cloud(P), dtype=np.float64)
    Q = np.asarray(as_cloud(Q), dtype=np.float64)
    if max_pairs is not None and P.shape[0] * Q.shape[0] > max_pairs:
        raise UsageError(f"|P|*|Q| = {P.shape[0] * Q.shape[0]} Chernoff points exceed the budget "
                         f"of {max_pairs}; subsample the inputs")
    g = get_generator(g)
    cs = chernoff_set(g, P, Q, cfg)
    A = np.concatenate([P, Q], axis=0)
    r = sup_inf(A, cs.points, g, _variant(variant).direction, backend, **kw)
    return ChernoffHausdorffResult(r.value, r.witness, cs, r.stats)
