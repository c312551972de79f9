"""Compiled inner loops shared by every search backend.

All divergence evaluations in the package go through ``_cdiv`` so that the
linear scan, the Kd-tree and the public ``divergence`` function produce
bitwise identical numbers for the same pair of points.  Logarithms are
supplied by the caller (see ``log_cache``) instead of being recomputed per
pair; the KL / GKL summand then reads ``x*(log x - log y) + (y - x)`` which
is the textbook closed form multiplied through by ``ln 2``.  Coordinates
within 12.5% of each other switch to a series that avoids cancellation.
"""

import math

import numpy as np
from numba import njit

SE, KL, GKL, IS = 0, 1, 2, 3
INV_LN2 = 1.0 / math.log(2.0)
INF = np.inf

# Pruning slack, relative to the current best.  Covers summation-order and
# incremental-update rounding so that ties are never pruned away.
REL_SLACK = 1e-12

# Status codes returned by the Chernoff bisection.
CH_OK, CH_DOMAIN, CH_NOCONV = 0, 1, 2


@njit(cache=True)
def _log_flat(x, out):
    # math.log, as used inside the kernels; np.log may differ by an ulp
    for i in range(x.shape[0]):
        v = x[i]
        if v > 0.0:
            out[i] = math.log(v)
        elif v == 0.0:
            out[i] = -INF
        else:
            out[i] = np.nan


def log_cache(kind, x):
    """Natural log of ``x`` (zeros map to -inf); all zeros for SE."""
    x = np.asarray(x, dtype=np.float64)
    if kind == SE:
        return np.zeros_like(x)
    out = np.empty(x.shape)
    _log_flat(np.ascontiguousarray(x).reshape(-1), out.reshape(-1))
    return out


# For |x/y - 1| <= NEAR the closed forms cancel catastrophically.  Both
# summands are then written in w = (x - y) / (x + y) via
# log(x/y) = 2 atanh(w), leaving two short series in s = w^2:
#   A(s) = sum s^j / (2j + 1),  B(s) = sum s^j / (2j + 3),  j = 0..6
# which for s <= 1/225 are exact to float64 rounding.
NEAR = 0.125


@njit(inline="always")
def _series_a(s):
    return 1.0 + s * (1 / 3 + s * (1 / 5 + s * (1 / 7 + s * (1 / 9 + s * (1 / 11 + s * (1 / 13))))))


@njit(inline="always")
def _series_b(s):
    return 1 / 3 + s * (1 / 5 + s * (1 / 7 + s * (1 / 9 + s * (1 / 11 + s * (1 / 13 + s * (1 / 15))))))


@njit(inline="always")
def _near_gkl(x, y, t):
    # x log(x/y) - (x - y) = (x + y) w^2 (A + w B)
    xy = x + y
    w = t / xy
    s = w * w
    return xy * s * (_series_a(s) + w * _series_b(s))


@njit(inline="always")
def _near_is(x, y, t):
    # x/y - log(x/y) - 1 = w^2 ((x + y)/y - 2 w B)
    xy = x + y
    w = t / xy
    s = w * w
    return s * (xy / y - 2.0 * w * _series_b(s))


@njit(inline="always")
def _cdiv(kind, x, y, lx, ly):
    if kind == SE:
        t = x - y
        return t * t
    if kind == IS:
        if x <= 0.0 or y <= 0.0:
            return INF
        t = x - y
        if abs(t) <= NEAR * y:
            return _near_is(x, y, t)
        v = x / y - (lx - ly) - 1.0
        return v if v > 0.0 else 0.0
    # KL and GKL share the summand; KL is GKL restricted to the simplex.
    if x == 0.0:
        return y * INV_LN2
    if y == 0.0:
        return INF
    t = x - y
    if abs(t) <= NEAR * y:
        return _near_gkl(x, y, t) * INV_LN2
    v = (x * (lx - ly) + (y - x)) * INV_LN2
    return v if v > 0.0 else 0.0


@njit(inline="always")
def _dir_cdiv(kind, reverse, q, lq, s, ls):
    if reverse:
        return _cdiv(kind, s, q, ls, lq)
    return _cdiv(kind, q, s, lq, ls)


@njit(inline="always")
def _pair(kind, reverse, q, lq, s, ls):
    total = 0.0
    for i in range(q.shape[0]):
        total += _dir_cdiv(kind, reverse, q[i], lq[i], s[i], ls[i])
    return total


@njit(inline="always")
def _clamp_cdiv(kind, reverse, x, lx, a, b, la, lb):
    # Exact minimum of the one-dimensional summand over y in [a, b].
    if x < a:
        return _dir_cdiv(kind, reverse, x, lx, a, la)
    if x > b:
        return _dir_cdiv(kind, reverse, x, lx, b, lb)
    return 0.0


@njit(cache=True)
def coord_div_array(kind, x, y, lx, ly):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _cdiv(kind, x[i], y[i], lx[i], ly[i])
    return out


@njit(cache=True)
def pair_div(kind, reverse, q, lq, s, ls):
    return _pair(kind, reverse, q, lq, s, ls)


@njit(cache=True)
def box_bound(kind, reverse, q, lq, lo, hi, llo, lhi):
    total = 0.0
    for i in range(q.shape[0]):
        total += _clamp_cdiv(kind, reverse, q[i], lq[i], lo[i], hi[i], llo[i], lhi[i])
    return total


# ---------------------------------------------------------------------------
# linear scan


@njit(inline="always")
def _linear_nn(kind, reverse, q, lq, S, LS):
    best = INF
    best_idx = -1
    for j in range(S.shape[0]):
        dv = _pair(kind, reverse, q, lq, S[j], LS[j])
        if dv < best or best_idx < 0:
            best = dv
            best_idx = j
    if best == INF:
        best_idx = 0
    return best_idx, best


@njit(nogil=True, cache=True)
def linear_nn_batch(kind, reverse, Q, LQ, S, LS, out_idx, out_div):
    for i in range(Q.shape[0]):
        out_idx[i], out_div[i] = _linear_nn(kind, reverse, Q[i], LQ[i], S, LS)


@njit(nogil=True, cache=True)
def linear_sup_inf(kind, reverse, Q, LQ, S, LS):
    """Returns (value, witness_query, witness_stored, queries_done, evals)."""
    maxv = 0.0
    wq = -1
    ws = -1
    done = 0
    for i in range(Q.shape[0]):
        j, dv = _linear_nn(kind, reverse, Q[i], LQ[i], S, LS)
        done += 1
        if dv > maxv or wq < 0:
            maxv = dv
            wq = i
            ws = j
        if maxv == INF:
            break
    return maxv, wq, ws, done, done * S.shape[0]


# ---------------------------------------------------------------------------
# Kd-tree traversal


@njit(inline="always")
def _tree_query(kind, reverse, q, lq,
                pts, lpts, orig, left, right, start, end, split_dim, split_val,
                lo, hi, llo, lhi,
                threshold, use_threshold, full_bound,
                contrib, st_node, st_dim, st_h, lg_dim, lg_c, lg_f, lg_n):
    """Depth-first exact NN search with optional shell termination.

    Returns (orig_index, divergence, terminated, nodes_visited, points_visited).
    The bound of the current cell is kept as a finite sum plus a count of
    infinite coordinate terms; descending one level replaces the term of the
    split dimension only, and an undo log restores ancestors on backtrack.
    """
    d = q.shape[0]
    best = INF
    best_idx = -1
    nodes = 0
    evals = 0

    fsum = 0.0
    ninf = 0
    for i in range(d):
        c = _clamp_cdiv(kind, reverse, q[i], lq[i], lo[0, i], hi[0, i], llo[0, i], lhi[0, i])
        contrib[i] = c
        if c == INF:
            ninf += 1
        else:
            fsum += c

    node = 0
    sp = 0
    lh = 0
    while True:
        nodes += 1
        if full_bound:
            bf = 0.0
            bn = 0
            for i in range(d):
                c = _clamp_cdiv(kind, reverse, q[i], lq[i], lo[node, i], hi[node, i],
                                llo[node, i], lhi[node, i])
                if c == INF:
                    bn += 1
                else:
                    bf += c
        else:
            bf = fsum
            bn = ninf
        # Infinite bounds are always prunable.
        prune = bn > 0 or bf > best + best * REL_SLACK
        if not prune:
            if left[node] < 0:
                for j in range(start[node], end[node]):
                    dv = _pair(kind, reverse, q, lq, pts[j], lpts[j])
                    evals += 1
                    if use_threshold and dv <= threshold:
                        return -1, dv, True, nodes, evals
                    oj = orig[j]
                    if dv < best or (dv == best and (best_idx < 0 or oj < best_idx)):
                        best = dv
                        best_idx = oj
            else:
                k = split_dim[node]
                if q[k] <= split_val[node]:
                    near = left[node]
                    far = right[node]
                else:
                    near = right[node]
                    far = left[node]
                st_node[sp] = far
                st_dim[sp] = k
                st_h[sp] = lh
                sp += 1
                lg_dim[lh] = k
                lg_c[lh] = contrib[k]
                lg_f[lh] = fsum
                lg_n[lh] = ninf
                lh += 1
                c_old = contrib[k]
                c_new = _clamp_cdiv(kind, reverse, q[k], lq[k], lo[near, k], hi[near, k],
                                    llo[near, k], lhi[near, k])
                if c_old == INF:
                    ninf -= 1
                else:
                    fsum -= c_old
                if c_new == INF:
                    ninf += 1
                else:
                    fsum += c_new
                contrib[k] = c_new
                node = near
                continue
        if sp == 0:
            break
        sp -= 1
        h = st_h[sp]
        while lh > h:
            lh -= 1
            contrib[lg_dim[lh]] = lg_c[lh]
            fsum = lg_f[lh]
            ninf = lg_n[lh]
        node = st_node[sp]
        k = st_dim[sp]
        lg_dim[lh] = k
        lg_c[lh] = contrib[k]
        lg_f[lh] = fsum
        lg_n[lh] = ninf
        lh += 1
        c_old = contrib[k]
        c_new = _clamp_cdiv(kind, reverse, q[k], lq[k], lo[node, k], hi[node, k],
                            llo[node, k], lhi[node, k])
        if c_old == INF:
            ninf -= 1
        else:
            fsum -= c_old
        if c_new == INF:
            ninf += 1
        else:
            fsum += c_new
        contrib[k] = c_new

    if best == INF:
        # Every stored point is at infinite divergence; lowest index wins.
        best_idx = 0
    if use_threshold and best <= threshold:
        return -1, best, True, nodes, evals
    return best_idx, best, False, nodes, evals


@njit(nogil=True, cache=True)
def tree_nn_batch(kind, reverse, Q, LQ,
                  pts, lpts, orig, left, right, start, end, split_dim, split_val,
                  lo, hi, llo, lhi, depth,
                  thresholds, use_threshold, full_bound,
                  out_idx, out_div, out_term, counters):
    d = Q.shape[1]
    contrib = np.empty(d)
    m = depth + 2
    st_node = np.empty(m, np.int64)
    st_dim = np.empty(m, np.int64)
    st_h = np.empty(m, np.int64)
    lg_dim = np.empty(m, np.int64)
    lg_c = np.empty(m)
    lg_f = np.empty(m)
    lg_n = np.empty(m, np.int64)
    for i in range(Q.shape[0]):
        idx, dv, term, nv, ev = _tree_query(
            kind, reverse, Q[i], LQ[i],
            pts, lpts, orig, left, right, start, end, split_dim, split_val,
            lo, hi, llo, lhi, thresholds[i], use_threshold, full_bound,
            contrib, st_node, st_dim, st_h, lg_dim, lg_c, lg_f, lg_n)
        out_idx[i] = idx
        out_div[i] = dv
        out_term[i] = term
        counters[0] += nv
        counters[1] += ev


@njit(nogil=True, cache=True)
def tree_sup_inf(kind, reverse, Q, LQ,
                 pts, lpts, orig, left, right, start, end, split_dim, split_val,
                 lo, hi, llo, lhi, depth, shell, full_bound, counters):
    """Running-maximum loop over queries (basic or shell variant).

    Returns (value, witness_query, witness_stored).  ``counters`` receives
    [nodes_visited, points_visited, queries_done, early_terminations].
    """
    d = Q.shape[1]
    contrib = np.empty(d)
    m = depth + 2
    st_node = np.empty(m, np.int64)
    st_dim = np.empty(m, np.int64)
    st_h = np.empty(m, np.int64)
    lg_dim = np.empty(m, np.int64)
    lg_c = np.empty(m)
    lg_f = np.empty(m)
    lg_n = np.empty(m, np.int64)
    maxv = 0.0
    wq = -1
    ws = -1
    for i in range(Q.shape[0]):
        idx, dv, term, nv, ev = _tree_query(
            kind, reverse, Q[i], LQ[i],
            pts, lpts, orig, left, right, start, end, split_dim, split_val,
            lo, hi, llo, lhi, maxv, shell, full_bound,
            contrib, st_node, st_dim, st_h, lg_dim, lg_c, lg_f, lg_n)
        counters[0] += nv
        counters[1] += ev
        counters[2] += 1
        if term:
            counters[3] += 1
        elif dv > maxv or wq < 0:
            maxv = dv
            wq = i
            ws = idx
        if maxv == INF:
            break
    return maxv, wq, ws


# ---------------------------------------------------------------------------
# Chernoff bisection


@njit(inline="always")
def _gap(kind, p, lp, q, lq, alpha, c, lc):
    for i in range(p.shape[0]):
        c[i] = alpha * p[i] + (1.0 - alpha) * q[i]
        if kind == SE:
            lc[i] = 0.0
        elif c[i] > 0.0:
            lc[i] = math.log(c[i])
        else:
            lc[i] = -INF
    return _pair(kind, False, p, lp, c, lc) - _pair(kind, False, q, lq, c, lc)


@njit(inline="always")
def _lex_greater(p, q):
    for i in range(p.shape[0]):
        if p[i] != q[i]:
            return p[i] > q[i]
    return False


@njit(inline="always")
def _chernoff(kind, p, lp, q, lq, tol, max_iter, out_c, c, lc):
    """Bisection on alpha for c = alpha*p + (1-alpha)*q.

    The gap D(p||c) - D(q||c) is strictly decreasing in alpha, positive at
    alpha=0 and negative at alpha=1.  Pair order is canonicalised so that
    (p, q) and (q, p) yield bitwise identical points.
    Returns (status, alpha_for_original_p, |gap|, iterations, gap_lo, gap_hi).
    """
    d = p.shape[0]
    same = True
    for i in range(d):
        if p[i] != q[i]:
            same = False
            break
    if same:
        for i in range(d):
            out_c[i] = p[i]
        return CH_OK, 1.0, 0.0, 0, 0.0, 0.0
    swapped = _lex_greater(p, q)
    if swapped:
        a, la, b, lb = q, lq, p, lp
    else:
        a, la, b, lb = p, lp, q, lq

    lo = 0.0
    hi = 1.0
    g_lo = _gap(kind, a, la, b, lb, lo, c, lc)
    g_hi = _gap(kind, a, la, b, lb, hi, c, lc)
    best_alpha = 0.5
    best_gap = INF
    status = CH_NOCONV
    it = 0
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        gm = _gap(kind, a, la, b, lb, mid, c, lc)
        if gm != gm:
            status = CH_DOMAIN
            break
        if abs(gm) < best_gap:
            best_gap = abs(gm)
            best_alpha = mid
        if abs(gm) <= tol:
            status = CH_OK
            break
        if gm > 0.0:
            lo = mid
            g_lo = gm
        else:
            hi = mid
            g_hi = gm
        if hi - lo < 1e-15:
            break
    if status != CH_DOMAIN:
        _gap(kind, a, la, b, lb, best_alpha, c, lc)
        for i in range(d):
            out_c[i] = c[i]
        if best_gap <= tol:
            status = CH_OK
    alpha = 1.0 - best_alpha if swapped else best_alpha
    return status, alpha, best_gap, it, g_lo, g_hi


@njit(cache=True)
def chernoff_batch(kind, P, LP, Q, LQ, tol, max_iter,
                   out_c, out_alpha, out_res, out_iter, out_status, out_glo, out_ghi):
    """All pairs, q outer and p inner: row i*len(P) + j is c(P[j], Q[i])."""
    d = P.shape[1]
    c = np.empty(d)
    lc = np.empty(d)
    n = P.shape[0]
    for i in range(Q.shape[0]):
        for j in range(n):
            r = i * n + j
            st, al, res, it, glo, ghi = _chernoff(kind, P[j], LP[j], Q[i], LQ[i], tol,
                                                  max_iter, out_c[r], c, lc)
            out_status[r] = st
            out_alpha[r] = al
            out_res[r] = res
            out_iter[r] = it
            out_glo[r] = glo
            out_ghi[r] = ghi
