import itertools
import math

import numpy as np
import pytest

from bregman_hausdorff import (
    UsageError,
    Variant,
    build,
    divergence,
    hausdorff,
    hausdorff_both_directions,
    sample_simplex,
)
from bregman_hausdorff.hausdorff import BACKENDS

import oracles

NAMES = ["se", "kl", "gkl", "is"]
P_TABLE = np.array([[1 / 2, 1 / 4, 1 / 8, 1 / 8]])
Q_ZERO = np.array([[1 / 3, 1 / 3, 1 / 3, 0.0]])


def witness_value(name, P, Q, variant, witness):
    p, q = P[witness[0]], Q[witness[1]]
    return divergence(name, q, p) if Variant(variant) is Variant.DUAL else divergence(name, p, q)


class TestExamples:
    def test_singletons(self):
        r = hausdorff([[0.0, 1.0]], [[2.0, 1.0]], "se")
        assert r.value == 4.0 and r.witness == (0, 0)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_self_distance_is_zero(self, backend):
        X = sample_simplex(4, 300, seed=3)
        r = hausdorff(X, X, "kl", backend=backend)
        assert r.value == 0.0
        assert r.witness[0] == r.witness[1]

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_kl_asymmetry(self, backend):
        a, b = hausdorff_both_directions(P_TABLE, Q_ZERO, "kl", backend=backend)
        assert a.value == math.inf and a.stats.infinite
        assert b.value == pytest.approx(2 - math.log2(3), rel=1e-12)
        assert not b.stats.infinite

    def test_dual_differs_from_primal(self):
        # the dual reads D(q || p): the zero now sits in the first argument
        r = hausdorff(P_TABLE, Q_ZERO, "kl", "dual")
        assert r.value == pytest.approx(2 - math.log2(3), rel=1e-12)

    def test_outlier_pulls_one_side_only(self):
        rng = np.random.default_rng(0)
        P = rng.dirichlet(np.full(3, 20.0), size=200)
        Q = np.vstack([rng.dirichlet(np.full(3, 20.0), size=200), [0.98, 0.01, 0.01]])
        pq, qp = hausdorff_both_directions(P, Q, "kl")
        assert qp.value > 5 * pq.value
        assert qp.witness[0] == 200

    def test_bad_backend(self):
        with pytest.raises(UsageError):
            hausdorff([[1.0]], [[1.0]], "se", backend="ball")

    def test_empty(self):
        with pytest.raises(UsageError):
            hausdorff(np.empty((0, 2)), [[1.0, 1.0]], "se")

    def test_dimension_mismatch(self):
        with pytest.raises(UsageError):
            hausdorff([[1.0, 2.0]], [[1.0]], "se")


CASES = list(itertools.product(NAMES, list(Variant), [2, 5, 10]))


class TestAgainstOracle:
    @pytest.mark.parametrize("name,variant,dim", CASES)
    def test_backends_agree(self, name, variant, dim):
        rng = np.random.default_rng(dim * 7 + len(name))
        P = oracles.random_points(name, rng, 400, dim)
        Q = oracles.random_points(name, rng, 300, dim)
        ref = oracles.hausdorff(name, P, Q, dual=variant is Variant.DUAL)
        results = [hausdorff(P, Q, name, variant, b) for b in BACKENDS]
        for r in results:
            assert r.value == pytest.approx(ref, rel=1e-12)
            assert witness_value(name, P, Q, variant, r.witness) == r.value
        assert len({r.value for r in results}) == 1

    @pytest.mark.parametrize("name,variant", list(itertools.product(["kl", "gkl"], list(Variant))))
    def test_zeros_and_infinity(self, name, variant):
        rng = np.random.default_rng(12)
        for _ in range(10):
            P = oracles.random_points(name, rng, 60, 4, zeros=True)
            Q = oracles.random_points(name, rng, 50, 4, zeros=True)
            ref = oracles.hausdorff(name, P, Q, dual=variant is Variant.DUAL)
            for b in BACKENDS:
                r = hausdorff(P, Q, name, variant, b)
                if math.isinf(ref):
                    assert r.value == math.inf and r.stats.infinite
                else:
                    assert r.value == pytest.approx(ref, rel=1e-12)
                assert witness_value(name, P, Q, variant, r.witness) == r.value


class TestProperties:
    def test_monotone_in_min_side(self):
        rng = np.random.default_rng(2)
        P = sample_simplex(5, 300, seed=1)
        Q = sample_simplex(5, 400, seed=2)
        prev = math.inf
        for k in (25, 50, 100, 200, 400):
            v = hausdorff(P, Q[:k], "kl").value
            assert v <= prev
            prev = v

    def test_monotone_in_max_side(self):
        P = sample_simplex(5, 400, seed=1)
        Q = sample_simplex(5, 300, seed=2)
        vals = [hausdorff(P[:k], Q, "kl").value for k in (10, 100, 400)]
        assert vals == sorted(vals)

    def test_subset_gives_zero(self):
        Q = sample_simplex(3, 200, seed=5)
        assert hausdorff(Q[::3], Q, "gkl", backend="shell").value == 0.0

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_order_independent(self, backend):
        rng = np.random.default_rng(4)
        P = sample_simplex(6, 300, seed=7)
        Q = sample_simplex(6, 300, seed=8)
        a = hausdorff(P, Q, "kl", backend=backend).value
        b = hausdorff(P[rng.permutation(300)], Q[rng.permutation(300)], "kl", backend=backend).value
        assert a == b

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_threads_identical(self, backend):
        P = sample_simplex(8, 3000, seed=1)
        Q = sample_simplex(8, 1000, seed=2)
        one = hausdorff(P, Q, "kl", backend=backend)
        four = hausdorff(P, Q, "kl", backend=backend, n_threads=4)
        assert one.value == four.value and one.witness == four.witness

    def test_prebuilt_tree(self):
        P = sample_simplex(4, 500, seed=1)
        Q = sample_simplex(4, 500, seed=2)
        t = build(Q)
        assert hausdorff(P, Q, "kl", tree=t).value == hausdorff(P, Q, "kl", backend="linear").value

    def test_full_bound_mode(self):
        P = sample_simplex(4, 500, seed=1)
        Q = sample_simplex(4, 500, seed=2)
        a = hausdorff(P, Q, "is", "dual", "kdtree", incremental=False)
        b = hausdorff(P, Q, "is", "dual", "kdtree")
        assert a.value == b.value and a.witness == b.witness


class TestShellStats:
    def test_early_terminations_at_scale(self):
        P = sample_simplex(10, 50_000, seed=0)
        Q = sample_simplex(10, 5_000, seed=1)
        shell = hausdorff(P, Q, "kl", backend="shell")
        exact = hausdorff(P, Q, "kl", backend="kdtree")
        assert shell.stats.queries == 50_000
        assert shell.stats.early_terminations > 0
        assert exact.stats.early_terminations == 0
        assert shell.stats.points_visited < exact.stats.points_visited
        assert shell.value == exact.value

    def test_linear_visits_everything(self):
        P = sample_simplex(3, 40, seed=0)
        Q = sample_simplex(3, 30, seed=1)
        r = hausdorff(P, Q, "kl", backend="linear")
        assert r.stats.points_visited <= 40 * 30
        assert r.stats.build_seconds == 0.0

    def test_stats_dict(self):
        r = hausdorff([[0.5, 0.5]], [[0.5, 0.5]], "kl")
        d = r.stats.as_dict()
        assert set(d) == {"queries", "early_terminations", "points_visited", "nodes_visited",
                          "build_seconds", "query_seconds", "infinite"}
