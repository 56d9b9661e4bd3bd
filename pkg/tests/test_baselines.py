"""Interval-arithmetic baseline and the univariate cubic classifier."""

import pytest

from ccdkit import (
    Query,
    QueryKind,
    SolverConfig,
    UnivariateVerdict,
    cubic_roots,
    irf_solve,
    solve,
    univariate_solve,
)
from ccdkit.baselines import IntervalScalar

from test_solver import HOURGLASS, HOURGLASS_T, TRI


class TestIntervalScalar:
    def test_sum_encloses_the_real_result(self):
        s = IntervalScalar(0.1) + IntervalScalar(0.2)
        assert s.lo < 0.1 + 0.2 < s.hi
        assert s.width > 0.0

    def test_product_encloses_the_real_result(self):
        p = IntervalScalar(0.1) * IntervalScalar(0.2)
        assert p.lo < 0.1 * 0.2 < p.hi

    def test_one_minus_tenth_strictly_contains_nine_tenths(self):
        r = 1.0 - IntervalScalar(0.1)
        assert r.lo < 0.9 < r.hi

    def test_degenerate_interval_and_zero_test(self):
        a = IntervalScalar(0.5)
        assert a.lo == a.hi == 0.5
        assert not a.contains_zero()
        assert (a - 0.5).contains_zero()

    def test_rejects_inverted_or_nonfinite(self):
        with pytest.raises(ValueError):
            IntervalScalar(1.0, 0.0)
        with pytest.raises(ValueError):
            IntervalScalar(float("nan"))


class TestIrfSolve:
    def test_vertical_hit(self, warm, vf_vertical):
        res = irf_solve(vf_vertical)
        assert res.colliding
        assert res.toi <= 0.5 and 0.5 - res.toi < 2e-6

    def test_far_miss(self, vf_offset_miss):
        assert irf_solve(vf_offset_miss).toi is None

    def test_edge_edge_hit(self, ee_crossing):
        res = irf_solve(ee_crossing)
        assert res.colliding
        assert res.toi <= 0.5 and 0.5 - res.toi < 2e-6

    def test_hourglass(self):
        from ccdkit.oracle import to_rat

        res = irf_solve(HOURGLASS)
        assert res.colliding
        assert to_rat(res.toi) <= HOURGLASS_T

    def test_budget_exhaustion_keeps_a_lower_bound(self, vf_vertical):
        res = irf_solve(vf_vertical, max_checks=10)
        assert res.early_terminated
        assert res.toi is not None and res.toi <= 0.5

    def test_rejects_nonpositive_delta(self, vf_vertical):
        with pytest.raises(ValueError):
            irf_solve(vf_vertical, delta=0.0)

    def test_agrees_with_the_inclusion_solver(self, warm, vf_vertical):
        a = solve(vf_vertical, SolverConfig(delta=1e-6))
        b = irf_solve(vf_vertical, delta=1e-6)
        assert a.colliding == b.colliding
        assert abs(a.toi - b.toi) < 1e-5


class TestCubicRoots:
    def test_two_simple_roots(self):
        roots = cubic_roots(-72.0, 120.0, -44.0, 3.0)
        assert len(roots) == 2
        assert abs(roots[0] - 0.08833500781212367) < 1e-12
        assert abs(roots[1] - 0.40045831131170884) < 1e-12

    def test_triple_root(self):
        roots = cubic_roots(-27.0, 27.0, -9.0, 1.0)
        assert len(roots) == 1
        assert abs(roots[0] - 1.0 / 3.0) < 1e-5

    def test_degenerate_polynomials(self):
        assert cubic_roots(0.0, 0.0, 0.0, 0.0) is None
        assert cubic_roots(0.0, 0.0, 0.0, 5.0) == []
        assert cubic_roots(0.0, 0.0, -2.0, 1.0) == [0.5]


class TestUnivariate:
    def test_vertical_hit(self, vf_vertical):
        res = univariate_solve(vf_vertical)
        assert res.verdict is UnivariateVerdict.COLLISION
        assert abs(res.t - 0.5) < 1e-12

    def test_far_miss(self, vf_offset_miss):
        assert univariate_solve(vf_offset_miss).verdict is UnivariateVerdict.NO_COLLISION

    def test_edge_edge_hit(self, ee_crossing):
        res = univariate_solve(ee_crossing)
        assert res.verdict is UnivariateVerdict.COLLISION
        assert abs(res.t - 0.5) < 1e-12

    def test_in_plane_motion_is_degenerate(self):
        q = Query(
            QueryKind.VERTEX_FACE,
            ((2.0, 0.25, 0.0),) + TRI,
            ((-1.0, 0.25, 0.0),) + TRI,
        )
        assert univariate_solve(q).verdict is UnivariateVerdict.DEGENERATE

    def test_plane_crossing_outside_the_patch_is_a_miss(self):
        q = Query(
            QueryKind.VERTEX_FACE,
            ((1.02, -0.01, 1.0),) + TRI,
            ((1.02, -0.01, -1.0),) + TRI,
        )
        assert univariate_solve(q).verdict is UnivariateVerdict.NO_COLLISION

    def test_descending_edge_pair(self):
        q = Query(
            QueryKind.EDGE_EDGE,
            ((0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (0.3, -1.0, 0.0), (0.3, 1.0, 0.0)),
            ((0.0, 0.0, -1.0), (1.0, 0.0, -1.0), (0.3, -1.0, 0.0), (0.3, 1.0, 0.0)),
        )
        res = univariate_solve(q)
        assert res.verdict is UnivariateVerdict.COLLISION
        assert abs(res.t - 0.5) < 1e-12
