"""Reference baselines the conservative solver is benchmarked against.

Two deliberately different trade-offs:

  * irf_solve: generic interval-arithmetic bisection.  Sound (every float
    operation's rounding is enclosed outward), conservative, and slow;
    termination is by domain width, not by the gap function's range, so it
    refines far deeper than the filtered corner-hull solver needs to.

  * univariate_solve: the classical reduction to the scalar coplanarity
    cubic: find times where the four points are coplanar, then test
    overlap at those times.  Fast, but floating-point root finding plus an
    exact-arithmetic-free overlap test make it unsound in both directions;
    its characteristic failure is the identically zero cubic (motion stays
    coplanar throughout: parallel/collinear sliding contacts), reported
    here as Degenerate because the cubic carries no information at all.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    CCDResult,
    DomainBox,
    Query,
    QueryKind,
    coplanarity_cubic,
)


class IntervalScalar:
    """A closed interval with outward-rounded arithmetic.

    Every operation widens its raw float result by one representable step
    on each side (math.nextafter), so the exact real result of composing
    the same operations is always inside.  Slightly looser than tracking
    per-operation error bounds, and much simpler to audit.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ValueError(f"bad interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def _outward(lo: float, hi: float) -> "IntervalScalar":
        out = IntervalScalar.__new__(IntervalScalar)
        out.lo = math.nextafter(lo, -math.inf)
        out.hi = math.nextafter(hi, math.inf)
        return out

    @staticmethod
    def _coerce(x) -> "IntervalScalar":
        if isinstance(x, IntervalScalar):
            return x
        return IntervalScalar(float(x))

    def __add__(self, other):
        o = self._coerce(other)
        return self._outward(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self._outward(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        p1 = self.lo * o.lo
        p2 = self.lo * o.hi
        p3 = self.hi * o.lo
        p4 = self.hi * o.hi
        return self._outward(min(p1, p2, p3, p4), max(p1, p2, p3, p4))

    __rmul__ = __mul__

    def __neg__(self):
        out = IntervalScalar.__new__(IntervalScalar)
        out.lo = -self.hi
        out.hi = -self.lo
        return out

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def __repr__(self):
        return f"IntervalScalar({self.lo!r}, {self.hi!r})"


def _interval_F(q: Query, t: IntervalScalar, u: IntervalScalar, v: IntervalScalar):
    """Interval enclosure of F over a box, same formula shape as the scalar path."""
    s, e = q.points0, q.points1
    out = []
    for ax in range(3):
        pts = [(1.0 - t) * s[j][ax] + t * e[j][ax] for j in range(4)]
        a, b, c, d = pts
        if q.kind == QueryKind.VERTEX_FACE:
            out.append(a - ((1.0 - u - v) * b + u * c + v * d))
        else:
            out.append(((1.0 - u) * a + u * b) - ((1.0 - v) * c + v * d))
    return out


def irf_solve(
    q: Query,
    delta: float = 1e-6,
    max_checks: int | None = None,
    t_max: float = 1.0,
) -> CCDResult:
    """Earliest-first interval bisection over the (t, u, v) domain.

    Boxes live in a min-heap keyed by the start of their time interval, so
    the first box accepted (interval of F contains zero on all axes, and
    every domain side narrower than delta) has the earliest possible time:
    the result is conservative for the same reason the main solver's is.
    max_checks optionally caps interval evaluations; hitting the cap
    returns the earliest pending box as a conservative hit.
    """
    if not (delta > 0.0):
        raise ValueError("delta must be positive")
    heap = []
    seq = 0
    heapq.heappush(heap, (0.0, 0, 0, (0.0, float(t_max), 0.0, 1.0, 0.0, 1.0)))
    checks = 0
    while heap:
        tl, level, _, box = heapq.heappop(heap)
        tl, th, ul, uh, vl, vh = box
        if max_checks is not None and checks >= max_checks:
            wit = DomainBox((tl, th), (ul, uh), (vl, vh), level)
            F = _interval_F(
                q,
                IntervalScalar(tl, th),
                IntervalScalar(ul, uh),
                IntervalScalar(vl, vh),
            )
            return CCDResult(
                toi=tl,
                witness=wit,
                achieved_tol=th - tl,
                codomain_width=max(ax.width for ax in F),
                checks=checks,
                early_terminated=True,
            )
        F = _interval_F(
            q,
            IntervalScalar(tl, th),
            IntervalScalar(ul, uh),
            IntervalScalar(vl, vh),
        )
        checks += 1
        if not all(ax.contains_zero() for ax in F):
            continue
        widths = (th - tl, uh - ul, vh - vl)
        if max(widths) < delta:
            wit = DomainBox((tl, th), (ul, uh), (vl, vh), level)
            return CCDResult(
                toi=tl,
                witness=wit,
                achieved_tol=th - tl,
                codomain_width=max(ax.width for ax in F),
                checks=checks,
                early_terminated=False,
            )
        dim = int(np.argmax(widths))  # ties resolve to t, then u, then v
        kids = []
        if dim == 0:
            m = 0.5 * (tl + th)
            kids = [(tl, m, ul, uh, vl, vh), (m, th, ul, uh, vl, vh)]
        elif dim == 1:
            m = 0.5 * (ul + uh)
            kids = [(tl, th, ul, m, vl, vh), (tl, th, m, uh, vl, vh)]
        else:
            m = 0.5 * (vl + vh)
            kids = [(tl, th, ul, uh, vl, m), (tl, th, ul, uh, m, vh)]
        for kid in kids:
            if q.kind == QueryKind.VERTEX_FACE and kid[2] + kid[4] > 1.0:
                continue
            seq += 1
            heapq.heappush(heap, (kid[0], level + 1, seq, kid))
    return CCDResult(
        toi=None,
        witness=None,
        achieved_tol=0.0,
        codomain_width=0.0,
        checks=checks,
        early_terminated=False,
    )


# ---------------------------------------------------------------------------
# Univariate coplanarity baseline
# ---------------------------------------------------------------------------


class UnivariateVerdict(Enum):
    NO_COLLISION = "no_collision"
    COLLISION = "collision"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class UnivariateResult:
    verdict: UnivariateVerdict
    t: float | None = None


def cubic_roots(c3: float, c2: float, c1: float, c0: float) -> list[float] | None:
    """Real roots of c3 t^3 + c2 t^2 + c1 t + c0 in [0, 1], ascending.

    Floating point: companion-matrix roots polished with a few Newton
    steps.  Simple well-separated roots come out near machine precision;
    multiple roots are inherently ill-conditioned here (a triple root is
    good to ~1e-6 at best) and their clusters merge to one value (roots
    within 1e-7 of each other dedupe).  Roots a hair outside [0, 1] clamp
    onto the boundary.  Returns None for the identically zero polynomial,
    whose every t is a root.
    """
    coeffs = [float(c3), float(c2), float(c1), float(c0)]
    while coeffs and coeffs[0] == 0.0:
        coeffs.pop(0)
    if not coeffs:
        return None
    if len(coeffs) == 1:
        return []
    raw = np.roots(coeffs)
    out = []
    for r in raw:
        if abs(r.imag) > 1e-9 * max(1.0, abs(r.real)):
            continue
        x = float(r.real)
        for _ in range(3):
            f = ((c3 * x + c2) * x + c1) * x + c0
            df = (3.0 * c3 * x + 2.0 * c2) * x + c1
            if df == 0.0:
                break
            step = f / df
            x -= step
            if abs(step) < 1e-18:
                break
        if -1e-10 <= x <= 1.0 + 1e-10:
            out.append(min(1.0, max(0.0, x)))
    out.sort()
    dedup = []
    for x in out:
        if not dedup or x - dedup[-1] > 1e-7:
            dedup.append(x)
    return dedup


def _vf_overlap_params(q: Query, t: float):
    """Barycentric coordinates of the vertex in the face's plane at time t,
    or None when the triangle is degenerate there."""
    s, e = q.as_arrays()
    P = (1.0 - t) * s + t * e
    e1 = P[2] - P[1]
    e2 = P[3] - P[1]
    w = P[0] - P[1]
    a = float(e1 @ e1)
    b = float(e1 @ e2)
    c = float(e2 @ e2)
    g = float(e1 @ w)
    h = float(e2 @ w)
    det = a * c - b * b
    if abs(det) < 1e-30:
        return None
    return ((c * g - b * h) / det, (a * h - b * g) / det)


def _ee_overlap_params(q: Query, t: float):
    """Line parameters of the closest approach of the two edges' carrier
    lines at time t, or None when the edges are parallel there."""
    s, e = q.as_arrays()
    P = (1.0 - t) * s + t * e
    d1 = P[1] - P[0]
    d2 = P[3] - P[2]
    r = P[2] - P[0]
    a = float(d1 @ d1)
    b = float(d1 @ d2)
    c = float(d2 @ d2)
    g = float(d1 @ r)
    h = float(d2 @ r)
    # Minimize |u*d1 - v*d2 - r|^2: stationarity gives a*u - b*v = g and
    # b*u - c*v = h; at a coplanarity root the minimum is the crossing.
    det = a * c - b * b
    if abs(det) < 1e-30:
        return None
    return ((c * g - b * h) / det, (b * g - a * h) / det)


_BOUNDARY_GRACE = 1e-12  # overlap tests forgive this much outside [0, 1]


def univariate_solve(q: Query) -> UnivariateResult:
    """Coplanarity-cubic baseline: earliest cubic root whose configuration
    actually overlaps.

    Failure modes (documented, by design of the method): an identically
    zero cubic returns Degenerate (no time information; persistent-plane
    sliding contacts are invisible); degenerate configurations at a root
    (zero-area triangle, parallel edges) skip that root; roots or overlap
    parameters off by rounding can flip an answer near boundaries.
    """
    c3, c2, c1, c0 = coplanarity_cubic(q)
    if c3 == 0.0 and c2 == 0.0 and c1 == 0.0 and c0 == 0.0:
        return UnivariateResult(UnivariateVerdict.DEGENERATE)
    roots = cubic_roots(c3, c2, c1, c0)
    for t in roots:
        if q.kind == QueryKind.VERTEX_FACE:
            params = _vf_overlap_params(q, t)
            if params is None:
                continue
            u, v = params
            if (
                u >= -_BOUNDARY_GRACE
                and v >= -_BOUNDARY_GRACE
                and u + v <= 1.0 + _BOUNDARY_GRACE
            ):
                return UnivariateResult(UnivariateVerdict.COLLISION, t)
        else:
            params = _ee_overlap_params(q, t)
            if params is None:
                continue
            u, v = params
            if (
                -_BOUNDARY_GRACE <= u <= 1.0 + _BOUNDARY_GRACE
                and -_BOUNDARY_GRACE <= v <= 1.0 + _BOUNDARY_GRACE
            ):
                return UnivariateResult(UnivariateVerdict.COLLISION, t)
    return UnivariateResult(UnivariateVerdict.NO_COLLISION)
