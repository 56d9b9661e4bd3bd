"""Core types and the reference gap-function evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccdkit import (
    CCDResult,
    DomainBox,
    Query,
    QueryKind,
    SolverConfig,
    Vec3,
    coplanarity_cubic,
    eval_F,
    eval_F_ee,
    eval_F_vf,
)
from ccdkit.oracle import rational_eval_F

from conftest import TRI


class TestVec3:
    def test_arithmetic_is_componentwise(self):
        a = Vec3(1, 2, 3)
        b = Vec3(4, -5, 6)
        assert a + b == Vec3(5, -3, 9)
        assert a - b == Vec3(-3, 7, -3)
        assert a.scaled(2.0) == Vec3(2, 4, 6)
        assert a.dot(b) == 4 - 10 + 18
        assert a.cross(b) == Vec3(2 * 6 - 3 * -5, 3 * 4 - 1 * 6, 1 * -5 - 2 * 4)

    def test_rejects_nonfinite(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(ValueError):
                Vec3(0.0, bad, 0.0)

    def test_is_a_3_tuple(self):
        v = Vec3(1, 2, 3)
        assert tuple(v) == (1.0, 2.0, 3.0)
        assert (v.x, v.y, v.z) == (1.0, 2.0, 3.0)


class TestQuery:
    def test_coerces_points_and_kind(self, vf_vertical):
        q = Query(0, (((0.3, 0.3, 1.0),) + TRI), (((0.3, 0.3, -1.0),) + TRI))
        assert q.kind is QueryKind.VERTEX_FACE
        assert all(isinstance(p, Vec3) for p in q.points0 + q.points1)
        assert q == vf_vertical

    def test_requires_four_points(self):
        with pytest.raises(ValueError):
            Query(QueryKind.VERTEX_FACE, TRI, TRI)

    def test_as_arrays_shapes(self, vf_vertical):
        s, e = vf_vertical.as_arrays()
        assert s.shape == (4, 3) and e.shape == (4, 3)
        assert s.dtype == np.float64
        assert s[0].tolist() == [0.3, 0.3, 1.0]
        all8 = vf_vertical.all_coordinates()
        assert all8.shape == (8, 3)
        np.testing.assert_array_equal(all8[:4], s)
        np.testing.assert_array_equal(all8[4:], e)


class TestDomainBox:
    def test_widths(self):
        b = DomainBox((0.25, 0.5), (0.0, 1.0), (0.5, 0.5), level=3)
        assert b.widths == (0.25, 1.0, 0.0)
        assert b.max_width == 1.0
        assert b.level == 3

    def test_rejects_bad_intervals(self):
        with pytest.raises(ValueError):
            DomainBox((0.5, 0.25), (0.0, 1.0), (0.0, 1.0))
        with pytest.raises(ValueError):
            DomainBox((0.0, 1.5), (0.0, 1.0), (0.0, 1.0))
        with pytest.raises(ValueError):
            DomainBox((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), level=-1)


class TestSolverConfig:
    def test_defaults(self):
        cfg = SolverConfig()
        assert cfg.delta == 1e-6
        assert cfg.max_checks == 1_000_000
        assert cfg.separation == 0.0
        assert cfg.t_max == 1.0
        assert cfg.filters == "auto"

    @pytest.mark.parametrize(
        "kw",
        [
            {"delta": 0.0},
            {"delta": math.inf},
            {"max_checks": 0},
            {"separation": -1e-9},
            {"t_max": 0.0},
            {"t_max": 1.5},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            SolverConfig(**kw)


def test_ccdresult_colliding():
    hit = CCDResult(0.5, DomainBox((0.5, 0.5), (0, 1), (0, 1)), 0.0, 0.0, 1, False)
    miss = CCDResult(None, None, 0.0, 0.0, 1, False)
    assert hit.colliding and not miss.colliding


class TestEvalF:
    def test_vf_at_witness_and_corner(self, vf_vertical):
        assert eval_F_vf(vf_vertical, 0.5, 0.3, 0.3) == Vec3(0.0, 0.0, 0.0)
        assert eval_F_vf(vf_vertical, 0.0, 0.0, 0.0) == Vec3(0.3, 0.3, 1.0)

    def test_ee_at_witness(self, ee_crossing):
        assert eval_F_ee(ee_crossing, 0.5, 0.5, 0.5) == Vec3(0.0, 0.0, 0.0)

    def test_eval_F_dispatches(self, vf_vertical, ee_crossing):
        assert eval_F(vf_vertical, 0.25, 0.5, 0.25) == eval_F_vf(
            vf_vertical, 0.25, 0.5, 0.25
        )
        assert eval_F(ee_crossing, 0.25, 0.5, 0.25) == eval_F_ee(
            ee_crossing, 0.25, 0.5, 0.25
        )

    @given(
        data=st.data(),
        kind=st.sampled_from([QueryKind.VERTEX_FACE, QueryKind.EDGE_EDGE]),
    )
    @settings(max_examples=60, deadline=None)
    def test_exact_on_small_integer_inputs(self, data, kind):
        """With integer coordinates and dyadic (t, u, v) of tiny depth, every
        intermediate is exact in binary64, so eval_F equals the oracle."""
        coord = st.integers(min_value=-4, max_value=4)
        pts = lambda: tuple(
            tuple(data.draw(coord) for _ in range(3)) for _ in range(4)
        )
        q = Query(kind, pts(), pts())
        dyadic = st.integers(min_value=0, max_value=4).map(lambda k: k / 4.0)
        t, u, v = (data.draw(dyadic) for _ in range(3))
        got = eval_F(q, t, u, v)
        want = rational_eval_F(q, t, u, v)
        assert tuple(got) == tuple(float(w) for w in want)


class TestCoplanarityCubic:
    def test_vertical_query(self, vf_vertical):
        # n = (0, 0, 1) constant, q_z(t) = 1 - 2t
        assert coplanarity_cubic(vf_vertical) == (0.0, 0.0, -2.0, 1.0)

    def test_inplane_motion_is_identically_zero(self):
        q = Query(
            QueryKind.VERTEX_FACE, ((2.0, 0.25, 0.0),) + TRI, ((-1.0, 0.25, 0.0),) + TRI
        )
        assert coplanarity_cubic(q) == (0.0, 0.0, 0.0, 0.0)

    def test_roots_match_exact_coplanarity(self, ee_crossing):
        c3, c2, c1, c0 = coplanarity_cubic(ee_crossing)
        # the crossing happens at t = 1/2 where the four points are coplanar
        assert c3 * 0.125 + c2 * 0.25 + c1 * 0.5 + c0 == 0.0
