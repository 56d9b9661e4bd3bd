"""Core types and trajectory evaluation for continuous collision detection.

A CCD query asks whether a vertex-face or edge-edge pair, with every point
moving on a straight line from its start to its end position over the time
step, passes through contact.  Both cases reduce to finding roots of a
vector-valued gap function

    F(t, u, v) in R^3,   (t, u, v) in [0, 1]^3

where t is normalized time and (u, v) parameterize the face or the two
edges.  For vertex-face, (u, v) are barycentric coordinates restricted to
u >= 0, v >= 0, u + v <= 1; for edge-edge, u and v each range over [0, 1]
independently.

F is multilinear in (t, u, v) with no u*v cross term, which the inclusion
and oracle modules rely on: on any axis-aligned sub-box of the domain,
each component of F attains its extrema at the corners of the box.

The scalar evaluation here fixes the reference operation order (lerp each
point to time t, then combine).  The floating-point error bounds used by
the filter constants are derived for exactly this order, so every other
evaluation path in the package (batched, compiled) mirrors it term for
term.  Keep them in sync.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

import numpy as np


class _Vec3Base(NamedTuple):
    x: float
    y: float
    z: float


class Vec3(_Vec3Base):
    """A 3-vector of binary64 components.  Construction rejects NaN/inf."""

    __slots__ = ()

    def __new__(cls, x, y, z):
        x = float(x)
        y = float(y)
        z = float(z)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise ValueError(f"Vec3 components must be finite, got ({x}, {y}, {z})")
        return super().__new__(cls, x, y, z)

    def __add__(self, other):
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other) -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )


class QueryKind(IntEnum):
    """Vertex-face or edge-edge.  Values are stable (used by the compiled kernel)."""

    VERTEX_FACE = 0
    EDGE_EDGE = 1


@dataclass(frozen=True)
class Query:
    """One CCD query: four points, each with a start and an end position.

    Point order for VERTEX_FACE: (p, v1, v2, v3) where p is the moving
    vertex and (v1, v2, v3) the triangle.  For EDGE_EDGE: (p1, p2, p3, p4)
    where (p1, p2) is the first edge and (p3, p4) the second.
    """

    kind: QueryKind
    points0: tuple[Vec3, Vec3, Vec3, Vec3]
    points1: tuple[Vec3, Vec3, Vec3, Vec3]

    def __post_init__(self):
        if len(self.points0) != 4 or len(self.points1) != 4:
            raise ValueError("Query needs exactly 4 start and 4 end points")
        object.__setattr__(
            self, "points0", tuple(Vec3(*p) for p in self.points0)
        )
        object.__setattr__(
            self, "points1", tuple(Vec3(*p) for p in self.points1)
        )
        if not isinstance(self.kind, QueryKind):
            object.__setattr__(self, "kind", QueryKind(self.kind))

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end positions as (4, 3) float64 arrays."""
        return (
            np.array(self.points0, dtype=np.float64),
            np.array(self.points1, dtype=np.float64),
        )

    def all_coordinates(self) -> np.ndarray:
        """All 8 points stacked as an (8, 3) array (start block, then end block)."""
        return np.array(self.points0 + self.points1, dtype=np.float64)


@dataclass(frozen=True)
class DomainBox:
    """An axis-aligned sub-box of the (t, u, v) domain, plus its refinement level.

    Each interval is a (low, high) pair with 0 <= low <= high <= 1.
    level counts how many bisections produced this box (the root box of a
    solve has level 0).
    """

    t: tuple[float, float]
    u: tuple[float, float]
    v: tuple[float, float]
    level: int = 0

    def __post_init__(self):
        for name, (lo, hi) in (("t", self.t), ("u", self.u), ("v", self.v)):
            if not (0.0 <= lo <= hi <= 1.0):
                raise ValueError(f"DomainBox.{name} = ({lo}, {hi}) not nested in [0, 1]")
        if self.level < 0:
            raise ValueError("DomainBox.level must be >= 0")

    @property
    def widths(self) -> tuple[float, float, float]:
        return (
            self.t[1] - self.t[0],
            self.u[1] - self.u[0],
            self.v[1] - self.v[0],
        )

    @property
    def max_width(self) -> float:
        return max(self.widths)


@dataclass(frozen=True)
class SolverConfig:
    """Termination and conservativeness knobs for the bisection solver.

    delta       -- codomain tolerance: a box whose gap-function range hull is
                   narrower than delta (on every axis) is accepted as a hit.
    max_checks  -- budget on box classifications; on exhaustion the solver
                   returns its current earliest candidate (never skips it).
    separation  -- minimum separation distance d >= 0; d > 0 switches the
                   filter constants to the minimum-separation set.
    t_max       -- restrict the time interval to [0, t_max] (partial-step
                   queries during line search).
    filters     -- "auto" computes filters from the query's own coordinates;
                   pass a FilterEps (see inclusion module) to reuse
                   scene-wide filters across many queries.
    """

    delta: float = 1e-6
    max_checks: int = 1_000_000
    separation: float = 0.0
    t_max: float = 1.0
    filters: object = "auto"

    def __post_init__(self):
        if not (self.delta > 0.0 and math.isfinite(self.delta)):
            raise ValueError("delta must be positive and finite")
        if int(self.max_checks) < 1:
            raise ValueError("max_checks must be >= 1")
        if not (self.separation >= 0.0 and math.isfinite(self.separation)):
            raise ValueError("separation must be >= 0 and finite")
        if not (0.0 < self.t_max <= 1.0):
            raise ValueError("t_max must lie in (0, 1]")


@dataclass(frozen=True)
class CCDResult:
    """Outcome of one conservative solve.

    toi is None iff the solver certified every part of the domain collision
    free; otherwise toi is a time of impact no later than any true root.
    witness is the domain box that produced toi.  achieved_tol is the width
    of the witness's time interval, codomain_width the width of its gap
    range hull (both 0.0 for a no-collision result).  checks counts box
    classifications; early_terminated is True when the check budget, not the
    tolerance, ended the solve.
    """

    toi: float | None
    witness: DomainBox | None
    achieved_tol: float
    codomain_width: float
    checks: int
    early_terminated: bool

    @property
    def colliding(self) -> bool:
        return self.toi is not None


# ---------------------------------------------------------------------------
# Gap-function evaluation (reference scalar form).
#
# Each point is interpolated to time t as (1 - t) * start + t * end, then the
# four time-t positions are combined.  The combination orders below are the
# ones the filter error analysis assumes; see inclusion.compute_filters.
# ---------------------------------------------------------------------------


def _lerp(a: float, b: float, t: float) -> float:
    return (1.0 - t) * a + t * b


def eval_F_vf(q: Query, t: float, u: float, v: float) -> Vec3:
    """Gap between the moving vertex and the barycentric point of the moving face.

    F(t, u, v) = p(t) - ((1 - u - v) * v1(t) + u * v2(t) + v * v3(t))
    """
    p0, a0, b0, c0 = q.points0
    p1, a1, b1, c1 = q.points1
    out = []
    for i in range(3):
        p = _lerp(p0[i], p1[i], t)
        a = _lerp(a0[i], a1[i], t)
        b = _lerp(b0[i], b1[i], t)
        c = _lerp(c0[i], c1[i], t)
        out.append(p - ((1.0 - u - v) * a + u * b + v * c))
    return Vec3(*out)


def eval_F_ee(q: Query, t: float, u: float, v: float) -> Vec3:
    """Gap between the u-point of the first moving edge and the v-point of the second.

    F(t, u, v) = ((1 - u) * p1(t) + u * p2(t)) - ((1 - v) * p3(t) + v * p4(t))
    """
    a0, b0, c0, d0 = q.points0
    a1, b1, c1, d1 = q.points1
    out = []
    for i in range(3):
        a = _lerp(a0[i], a1[i], t)
        b = _lerp(b0[i], b1[i], t)
        c = _lerp(c0[i], c1[i], t)
        d = _lerp(d0[i], d1[i], t)
        out.append(((1.0 - u) * a + u * b) - ((1.0 - v) * c + v * d))
    return Vec3(*out)


def eval_F(q: Query, t: float, u: float, v: float) -> Vec3:
    if q.kind == QueryKind.VERTEX_FACE:
        return eval_F_vf(q, t, u, v)
    return eval_F_ee(q, t, u, v)


def coplanarity_cubic(q: Query) -> tuple[float, float, float, float]:
    """Coefficients (c3, c2, c1, c0) of the scalar coplanarity polynomial.

    The four points are coplanar at time t iff f(t) = 0 where

        f(t) = <n(t), q(t)>,
        VF:  n = (v2 - v1) x (v3 - v1),  q = p - v1
        EE:  n = (p2 - p1) x (p4 - p3),  q = p3 - p1.

    With linear trajectories both factors of the cross product are linear in
    t, so f is a cubic.  Returned as (c3, c2, c1, c0) meaning
    f(t) = c3*t^3 + c2*t^2 + c1*t + c0.
    """
    s, e = q.points0, q.points1
    if q.kind == QueryKind.VERTEX_FACE:
        e1_0, e1_1 = s[2] - s[1], e[2] - e[1]
        e2_0, e2_1 = s[3] - s[1], e[3] - e[1]
        q_0, q_1 = s[0] - s[1], e[0] - e[1]
    else:
        e1_0, e1_1 = s[1] - s[0], e[1] - e[0]
        e2_0, e2_1 = s[3] - s[2], e[3] - e[2]
        q_0, q_1 = s[2] - s[0], e[2] - e[0]
    # Write each factor as X(t) = X0 + t * Xd with Xd = X1 - X0; then
    # n(t) = C0 + t*C1 + t^2*C2 with the three cross-product combinations.
    e1_d = e1_1 - e1_0
    e2_d = e2_1 - e2_0
    q_d = q_1 - q_0
    C0 = e1_0.cross(e2_0)
    C1 = e1_0.cross(e2_d) + e1_d.cross(e2_0)
    C2 = e1_d.cross(e2_d)
    c0 = C0.dot(q_0)
    c1 = C0.dot(q_d) + C1.dot(q_0)
    c2 = C1.dot(q_d) + C2.dot(q_0)
    c3 = C2.dot(q_d)
    return (c3, c2, c1, c0)
