"""Decomposable Bregman generators and their divergences.

Four generators are supported:

* ``se``  -- squared Euclidean, F(x) = sum x_i^2 on R^d
* ``gkl`` -- generalized Kullback-Leibler, F(x) = sum x_i log2 x_i on the
  positive orthant (values in bits)
* ``kl``  -- the same generator restricted to the probability simplex; on
  the simplex the linear term of GKL sums to zero and the divergence is the
  relative entropy sum p_i log2(p_i / q_i)
* ``is``  -- Itakura-Saito, F(x) = -sum log x_i (natural log)

Divergences are evaluated with the per-coordinate closed forms, never with
the generic ``F(x) - F(y) - <grad F(y), x - y>`` expression; the latter is
available as :func:`affine_divergence` for cross-checking only.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import _kernels as K
from .errors import DomainError, UsageError

LN2 = math.log(2.0)


@dataclass(frozen=True)
class Generator:
    """A decomposable generator of Legendre type.

    Attributes
    ----------
    name : {'se', 'kl', 'gkl', 'is'}
    code : int
        Kernel selector shared with the compiled search routines.
    domain : str
        ``'reals'``, ``'positive'`` (open orthant) or ``'simplex'``.
    units : str
        ``'bits'`` for KL/GKL, ``'dimensionless'`` otherwise.
    """

    name: str
    code: int
    domain: str
    units: str

    def __repr__(self):
        return f"Generator({self.name!r})"


SQUARED_EUCLIDEAN = Generator("se", K.SE, "reals", "dimensionless")
KULLBACK_LEIBLER = Generator("kl", K.KL, "simplex", "bits")
GENERALIZED_KL = Generator("gkl", K.GKL, "positive", "bits")
ITAKURA_SAITO = Generator("is", K.IS, "positive", "dimensionless")

GENERATORS = {g.name: g for g in (SQUARED_EUCLIDEAN, KULLBACK_LEIBLER, GENERALIZED_KL, ITAKURA_SAITO)}


def get_generator(g):
    """Accept a :class:`Generator` or one of its names."""
    if isinstance(g, Generator):
        return g
    try:
        return GENERATORS[str(g).lower()]
    except KeyError:
        raise UsageError(f"unknown divergence {g!r}; choose from {sorted(GENERATORS)}") from None


def _as_vector(x, name="x"):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise UsageError(f"{name} must be a 1-d point, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} has non-finite coordinates")
    return x


def _check_domain(g, x, name="x", interior=False):
    if g.code == K.SE:
        return
    if g.code == K.IS or interior:
        if np.any(x <= 0):
            raise DomainError(f"{name} must be strictly positive for {g.name}")
    elif np.any(x < 0):
        raise DomainError(f"{name} has negative coordinates, not allowed for {g.name}")


def _pair_args(g, x, y):
    g = get_generator(g)
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    if x.shape != y.shape:
        raise UsageError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    if g.code != K.IS:
        _check_domain(g, x, "x")
        _check_domain(g, y, "y")
    elif np.any(x < 0) or np.any(y < 0):
        raise DomainError("negative coordinates are outside the Itakura-Saito domain")
    return g, x, y


def generator_value(g, x):
    """F(x), with 0 log 0 = 0 for KL/GKL."""
    g = get_generator(g)
    x = _as_vector(x)
    _check_domain(g, x)
    if g.code == K.SE:
        return float(np.dot(x, x))
    if g.code == K.IS:
        return float(-np.sum(np.log(x)))
    nz = x > 0
    return float(np.sum(x[nz] * np.log(x[nz])) / LN2)


def generator_gradient(g, x):
    g = get_generator(g)
    x = _as_vector(x)
    _check_domain(g, x, interior=True)
    if g.code == K.SE:
        return 2.0 * x
    if g.code == K.IS:
        return -1.0 / x
    return (1.0 + np.log(x)) / LN2


def coord_divergence(g, xi, yi):
    """One-dimensional summand of the divergence.

    Scalars give a float; equal-length arrays give the vector of summands.
    """
    scalar = np.ndim(xi) == 0 and np.ndim(yi) == 0
    g, x, y = _pair_args(g, np.atleast_1d(xi), np.atleast_1d(yi))
    out = K.coord_div_array(g.code, x, y, K.log_cache(g.code, x), K.log_cache(g.code, y))
    return float(out[0]) if scalar else out


def divergence(g, x, y):
    """D_F(x || y) as a float; ``inf`` where the closed form diverges.

    >>> divergence('se', [1.0, 2.0], [0.0, 0.0])
    5.0
    """
    g, x, y = _pair_args(g, x, y)
    return float(K.pair_div(g.code, False, x, K.log_cache(g.code, x), y, K.log_cache(g.code, y)))


def affine_divergence(g, x, y):
    """F(x) - F(y) - <grad F(y), x - y>; test oracle, prone to cancellation."""
    g = get_generator(g)
    return generator_value(g, x) - generator_value(g, y) - float(
        np.dot(generator_gradient(g, y), np.asarray(x, float) - np.asarray(y, float)))


def shannon_entropy(p):
    """Entropy in bits, with 0 log 0 = 0."""
    p = _as_vector(p, "p")
    if np.any(p < 0):
        raise DomainError("probabilities must be non-negative")
    nz = p > 0
    return float(-np.sum(p[nz] * np.log2(p[nz])))


def cross_entropy(p, q):
    """H(p, q) = sum p_i log2(1 / q_i); ``inf`` if q_i = 0 where p_i > 0."""
    p = _as_vector(p, "p")
    q = _as_vector(q, "q")
    if p.shape != q.shape:
        raise UsageError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    if np.any(p < 0) or np.any(q < 0):
        raise DomainError("probabilities must be non-negative")
    nz = p > 0
    if np.any(q[nz] == 0):
        return math.inf
    return float(-np.sum(p[nz] * np.log2(q[nz])))


# ---------------------------------------------------------------------------
# Legendre conjugate


def conjugate_map(g, x):
    """x -> x* = grad F(x)."""
    return generator_gradient(g, x)


def inverse_conjugate_map(g, xstar):
    """Analytic inverse of the gradient, i.e. grad F*(x*)."""
    g = get_generator(g)
    xstar = _as_vector(xstar, "xstar")
    if g.code == K.SE:
        return 0.5 * xstar
    if g.code == K.IS:
        if np.any(xstar >= 0):
            raise DomainError("Itakura-Saito conjugate points must be strictly negative")
        return -1.0 / xstar
    return np.exp(xstar * LN2 - 1.0)


def conjugate_value(g, xstar):
    """F*(x*) in closed form."""
    g = get_generator(g)
    xstar = _as_vector(xstar, "xstar")
    if g.code == K.SE:
        return float(np.dot(xstar, xstar) / 4.0)
    if g.code == K.IS:
        if np.any(xstar >= 0):
            raise DomainError("Itakura-Saito conjugate points must be strictly negative")
        return float(np.sum(-1.0 - np.log(-xstar)))
    return float(np.sum(np.exp(xstar * LN2 - 1.0)) / LN2)


def conjugate_divergence(g, pstar, qstar):
    """D_{F*}(p* || q*) through the conjugate generator.

    Equals ``divergence(g, q, p)`` whenever p* and q* are the images of p
    and q under :func:`conjugate_map`.
    """
    g = get_generator(g)
    pstar = _as_vector(pstar, "pstar")
    qstar = _as_vector(qstar, "qstar")
    return (conjugate_value(g, pstar) - conjugate_value(g, qstar)
            - float(np.dot(inverse_conjugate_map(g, qstar), pstar - qstar)))
