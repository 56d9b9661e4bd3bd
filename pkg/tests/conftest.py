"""Shared fixtures: a warmed kernel, the handcrafted battery, common queries."""

import pytest

from ccdkit import Query, QueryKind, gen_handcrafted, warm_up

TRI = ((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))


@pytest.fixture(scope="session")
def warm():
    """Compile the solver kernel once per session."""
    warm_up()


@pytest.fixture(scope="session")
def handcrafted():
    return gen_handcrafted()


@pytest.fixture(scope="session")
def by_tag(handcrafted):
    out = {lq.tag: lq for lq in handcrafted}
    assert len(out) == len(handcrafted)
    return out


@pytest.fixture(scope="session")
def vf_vertical():
    """Vertex descends through the unit triangle; contact at t = 1/2."""
    return Query(
        QueryKind.VERTEX_FACE, ((0.3, 0.3, 1.0),) + TRI, ((0.3, 0.3, -1.0),) + TRI
    )


@pytest.fixture(scope="session")
def vf_offset_miss():
    """Stationary vertex 10 above the triangle; never anywhere near contact."""
    return Query(
        QueryKind.VERTEX_FACE, ((0.0, 0.0, 10.0),) + TRI, ((0.0, 0.0, 10.0),) + TRI
    )


@pytest.fixture(scope="session")
def ee_crossing():
    """A diagonal edge descends through a stationary one; contact at t = 1/2."""
    return Query(
        QueryKind.EDGE_EDGE,
        ((0.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)),
        ((0.0, 0.0, -1.0), (1.0, 1.0, -1.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)),
    )
