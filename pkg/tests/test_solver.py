"""End-to-end conservative solver behaviour on small, exactly-understood scenes."""

import pytest

from ccdkit import (
    CCDResult,
    DomainBox,
    Query,
    QueryKind,
    SolverConfig,
    compute_filters,
    compute_gamma,
    gen_random,
    solve,
)
from ccdkit.dataset import Profile
from ccdkit.oracle import Rat, to_rat
from ccdkit.solver import queue_order, split

TRI = ((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))

# exact contact time of the hourglass flip below (binary64 inputs, not 9/10)
HOURGLASS_T = Rat(32425917317067571, 36028797018963968)
HOURGLASS = Query(
    QueryKind.VERTEX_FACE,
    ((0.1, 0.1, 0.1), (0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (0.0, 1.0, 1.0)),
    ((0.1, 0.1, 0.1), (0.0, 0.0, 0.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)),
)


def near_miss(gap):
    """Vertical descent that stops `gap` short of the plane."""
    return Query(
        QueryKind.VERTEX_FACE, ((0.3, 0.3, 1.0),) + TRI, ((0.3, 0.3, gap),) + TRI
    )


class TestSolveBasics:
    def test_vertical_hit_is_tight_lower_bound(self, warm, vf_vertical):
        res = solve(vf_vertical)
        assert res.colliding
        assert res.toi <= 0.5 and 0.5 - res.toi < 2e-6
        assert res.achieved_tol <= 1e-6
        assert res.codomain_width >= 0.0
        assert res.witness is not None and res.checks > 0
        assert not res.early_terminated

    def test_far_miss_resolves_in_one_check(self, warm, vf_offset_miss):
        res = solve(vf_offset_miss)
        assert res == CCDResult(None, None, 0.0, 0.0, 1, False)
        assert not res.colliding

    def test_edge_edge_hit(self, warm, ee_crossing):
        res = solve(ee_crossing)
        assert res.colliding
        assert res.toi <= 0.5 and 0.5 - res.toi < 2e-6

    def test_hourglass(self, warm):
        res = solve(HOURGLASS)
        assert res.colliding
        assert to_rat(res.toi) <= HOURGLASS_T
        assert HOURGLASS_T - to_rat(res.toi) < Rat(1, 10**4)

    def test_touch_at_start_is_time_zero(self, warm):
        q = Query(QueryKind.VERTEX_FACE, ((0.3, 0.3, 0.0),) + TRI, ((0.3, 0.3, -1.0),) + TRI)
        res = solve(q)
        assert res.colliding and res.toi == 0.0

    def test_deterministic(self, warm, vf_vertical):
        assert solve(vf_vertical) == solve(vf_vertical)


class TestNearMisses:
    def test_gaps_above_the_filter_floor_are_clean_misses(self, warm):
        assert solve(near_miss(1e-8)).toi is None
        assert solve(near_miss(1e-12)).toi is None

    def test_gap_below_the_filter_floor_reports_conservatively(self, warm):
        # 1e-16 sits inside the rounding-error tolerance, so the solver must
        # refuse to certify the miss; a false positive here is by design
        res = solve(near_miss(1e-16))
        assert res.colliding


class TestConfigEffects:
    def test_t_max_excludes_later_contact(self, warm, vf_vertical):
        assert solve(vf_vertical, SolverConfig(t_max=0.3)).toi is None

    def test_budget_exhaustion_keeps_a_lower_bound(self, warm, vf_vertical):
        res = solve(vf_vertical, SolverConfig(max_checks=5))
        assert res.early_terminated
        assert res.checks <= 5
        assert res.toi is not None and res.toi <= 0.5

    def test_minimum_separation_advances_contact(self, warm, vf_vertical):
        # gap reaches 0.1 when the plane distance 1 - 2t does, at t = 0.45
        res = solve(vf_vertical, SolverConfig(separation=0.1))
        assert res.colliding
        assert res.toi <= 0.45 and 0.45 - res.toi <= res.achieved_tol

    def test_precomputed_filters_match_auto(self, warm, vf_vertical):
        gamma = compute_gamma(vf_vertical.all_coordinates())
        manual = SolverConfig(filters=compute_filters(QueryKind.VERTEX_FACE, gamma))
        assert solve(vf_vertical, manual) == solve(vf_vertical)

    def test_filters_validation(self, warm, vf_vertical):
        wrong_kind = compute_filters(QueryKind.EDGE_EDGE, (1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            solve(vf_vertical, SolverConfig(filters=wrong_kind))
        mismatched = compute_filters(QueryKind.VERTEX_FACE, (1.0, 1.0, 1.0), separation=0.5)
        with pytest.raises(ValueError):
            solve(vf_vertical, SolverConfig(filters=mismatched))
        with pytest.raises(TypeError):
            solve(vf_vertical, SolverConfig(filters=(1e-15, 1e-15, 1e-15)))


class TestSplit:
    def test_halves_largest_weighted_width_exactly(self):
        root = DomainBox((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))
        kids = split(root, (6.0, 3.0, 3.0), QueryKind.VERTEX_FACE)
        assert [k.t for k in kids] == [(0.0, 0.5), (0.5, 1.0)]
        assert all(k.u == (0.0, 1.0) and k.v == (0.0, 1.0) and k.level == 1 for k in kids)

    def test_tie_breaks_prefer_earlier_dimension(self):
        box = DomainBox((0.0, 0.25), (0.5, 1.0), (0.5, 1.0), level=3)
        kids = split(box, (1.0, 1.0, 1.0), QueryKind.EDGE_EDGE)
        assert [k.u for k in kids] == [(0.5, 0.75), (0.75, 1.0)]

    def test_face_children_outside_the_triangle_are_dropped(self):
        box = DomainBox((0.0, 0.25), (0.5, 1.0), (0.5, 1.0), level=3)
        kids = split(box, (1.0, 1.0, 1.0), QueryKind.VERTEX_FACE)
        assert len(kids) == 1 and kids[0].u == (0.5, 0.75) and kids[0].level == 4

    def test_rejects_bad_weights_and_point_boxes(self):
        root = DomainBox((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))
        with pytest.raises(ValueError):
            split(root, (-1.0, 1.0, 1.0), QueryKind.VERTEX_FACE)
        with pytest.raises(ValueError):
            split(
                DomainBox((0.5, 0.5), (0.25, 0.25), (0.0, 0.0)),
                (1.0, 1.0, 1.0),
                QueryKind.VERTEX_FACE,
            )


def test_queue_order_is_level_then_start_time():
    root = DomainBox((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))
    deep = DomainBox((0.0, 0.25), (0.5, 1.0), (0.5, 1.0), level=3)
    late = DomainBox((0.5, 1.0), (0.0, 1.0), (0.0, 1.0), level=1)
    early = DomainBox((0.0, 0.5), (0.0, 1.0), (0.0, 1.0), level=1)
    assert queue_order(root, deep) == -1
    assert queue_order(deep, root) == 1
    assert queue_order(root, root) == 0
    assert queue_order(late, early) == 1
    assert queue_order(early, late) == -1


def test_no_false_negatives_on_a_labeled_sample(warm):
    """Every query the oracle labels positive must be reported, with the
    returned time at or before the certified contact time."""
    queries, dropped = gen_random(
        40, seed=11, profile=Profile.SIMULATION_LIKE, positive_fraction=0.5
    )
    assert not dropped
    hits = 0
    for lq in queries:
        res = solve(lq.query)
        if lq.truth:
            hits += 1
            assert res.toi is not None
            assert to_rat(res.toi) <= lq.witness[0]
    assert hits >= 10
