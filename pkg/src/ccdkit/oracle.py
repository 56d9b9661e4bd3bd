"""Exact rational arithmetic ground truth for CCD queries.

Everything in this module computes with exact rationals (gmpy2.mpq, falling
back to fractions.Fraction), so its answers carry no rounding error.  It
serves three roles:

  * certify that a query has no root (no contact) over its whole domain,
    with a provable margin, via exact bisection of the (t, u, v) box;
  * evaluate the gap function F exactly at rational parameter values
    (used to plant roots in generated datasets and to audit the
    floating-point filters);
  * isolate all real roots of a rational cubic in an interval, including
    exact extraction of multiple (double/triple) rational roots.

The pruning step relies on F being multilinear in (t, u, v): on any
axis-aligned box each component attains its extrema at the 8 corners, so
the corner min/max per axis is the exact range hull, and a box whose hull
stays strictly outside [-d, d] on some axis provably contains no root.

Exact arithmetic is slow (tens of microseconds per box); keep this off any
hot path.  It exists to be trusted, not to be fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Query, QueryKind

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    Rat = Fraction

_ZERO = Rat(0)
_ONE = Rat(1)
_HALF = Rat(1, 2)


def to_rat(x) -> Rat:
    """Exact conversion to a rational.  Floats convert with zero error."""
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot convert non-finite float {x}")
        return Rat(x)
    return Rat(x)


def is_exact_binary64(r) -> bool:
    """True iff the rational r is exactly representable as a binary64 float."""
    try:
        f = float(r)
    except OverflowError:
        return False
    if not math.isfinite(f):
        return False
    return Rat(f) == r


# ---------------------------------------------------------------------------
# Exact gap-function evaluation
# ---------------------------------------------------------------------------


def rational_points(q: Query):
    """The 8 query points as exact rational triples (start block, end block)."""
    return tuple(
        tuple(to_rat(c) for c in p) for p in (q.points0 + q.points1)
    )


def _eval_axes(kind: QueryKind, pts, t, u, v):
    """Exact F(t, u, v) given 8 rational point triples; returns a 3-tuple."""
    omt = _ONE - t
    at = tuple(omt * pts[0][i] + t * pts[4][i] for i in range(3))
    bt = tuple(omt * pts[1][i] + t * pts[5][i] for i in range(3))
    ct = tuple(omt * pts[2][i] + t * pts[6][i] for i in range(3))
    dt = tuple(omt * pts[3][i] + t * pts[7][i] for i in range(3))
    if kind == QueryKind.VERTEX_FACE:
        w = _ONE - u - v
        return tuple(at[i] - (w * bt[i] + u * ct[i] + v * dt[i]) for i in range(3))
    omu = _ONE - u
    omv = _ONE - v
    return tuple(
        (omu * at[i] + u * bt[i]) - (omv * ct[i] + v * dt[i]) for i in range(3)
    )


def rational_eval_F(q: Query, t, u, v):
    """Exact gap function of a query at rational (t, u, v)."""
    return _eval_axes(q.kind, rational_points(q), to_rat(t), to_rat(u), to_rat(v))


def rational_eval_F_points(kind: QueryKind, points, t, u, v):
    """Exact gap function from 8 explicit rational point triples."""
    pts = tuple(tuple(to_rat(c) for c in p) for p in points)
    return _eval_axes(kind, pts, to_rat(t), to_rat(u), to_rat(v))


def rational_kappas(kind: QueryKind, points, t_range=(_ZERO, _ONE)):
    """Exact per-dimension variation weights used to balance bisection.

    kappa_dim = 3 * max over the 4 corner pairs differing only in that
    dimension (at the domain's extreme values) of the inf-norm of the
    difference of F.  Multilinearity makes these global bounds valid on
    every sub-box: the range-hull width of a box is at most
    (sum of kappa_dim * width_dim) / 3.
    """
    pts = tuple(tuple(to_rat(c) for c in p) for p in points)
    t0, t1 = to_rat(t_range[0]), to_rat(t_range[1])
    ends = {"t": (t0, t1), "u": (_ZERO, _ONE), "v": (_ZERO, _ONE)}
    out = []
    for dim in ("t", "u", "v"):
        best = _ZERO
        others = [d for d in ("t", "u", "v") if d != dim]
        for c0 in (0, 1):
            for c1 in (0, 1):
                coords = {others[0]: ends[others[0]][c0], others[1]: ends[others[1]][c1]}
                coords[dim] = ends[dim][0]
                lo = _eval_axes(kind, pts, coords["t"], coords["u"], coords["v"])
                coords[dim] = ends[dim][1]
                hi = _eval_axes(kind, pts, coords["t"], coords["u"], coords["v"])
                diff = max(abs(hi[i] - lo[i]) for i in range(3))
                if diff > best:
                    best = diff
        out.append(3 * best)
    return tuple(out)


# ---------------------------------------------------------------------------
# No-root certification by exact bisection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoRoot:
    """The whole domain is root free; min over the domain of ||F||_inf is
    at least separation + margin (margin > 0, exact)."""

    margin: object


@dataclass(frozen=True)
class Root:
    """An exact rational point of the domain where every |F| component is
    <= separation (== 0 for separation 0)."""

    witness: tuple


@dataclass(frozen=True)
class Undetermined:
    """Bisection hit its depth (or box budget) cap before deciding."""


def _as_kind_points(q):
    if isinstance(q, Query):
        return q.kind, rational_points(q)
    kind, points = q
    return QueryKind(kind), tuple(tuple(to_rat(c) for c in p) for p in points)


def certify_no_root(
    q,
    *,
    separation=0,
    depth_cap: int = 64,
    t_range=None,
    max_boxes: int | None = None,
):
    """Exact verdict on whether F has a root (contact) anywhere in the domain.

    q is a Query, or a (kind, points) pair with 8 rational point triples.
    separation d >= 0 turns the root condition into ||F||_inf <= d.
    t_range restricts time to a sub-interval of [0, 1] (default all of it).
    depth_cap limits the number of bisections per dimension; max_boxes
    optionally limits total boxes examined.  Either cap ends the search
    with Undetermined.

    Returns NoRoot(margin), Root(witness), or Undetermined().
    """
    kind, pts = _as_kind_points(q)
    d = to_rat(separation)
    if d < 0:
        raise ValueError("separation must be >= 0")
    if t_range is None:
        t_lo, t_hi = _ZERO, _ONE
    else:
        t_lo, t_hi = to_rat(t_range[0]), to_rat(t_range[1])
        if not (_ZERO <= t_lo <= t_hi <= _ONE):
            raise ValueError(f"t_range ({t_lo}, {t_hi}) not nested in [0, 1]")
    if t_lo == t_hi and t_range is not None:
        pass  # zero-width time slices are legal; the hull is still exact

    kt, ku, kv = rational_kappas(kind, pts, (t_lo, t_hi))
    vf = kind == QueryKind.VERTEX_FACE

    # Box: (tl, th, ul, uh, vl, vh, nt, nu, nv) with n* = splits taken so far.
    stack = [(t_lo, t_hi, _ZERO, _ONE, _ZERO, _ONE, 0, 0, 0)]
    margin = None
    examined = 0

    # The 8 corners enumerate as (t, u, v) bit triples, t outermost; the
    # weights per corner depend only on (u, v), so precompute them per box.
    corner_uv = ((0, 0), (0, 1), (1, 0), (1, 1))
    # Axis to try first: neighbouring boxes in the DFS almost always separate
    # on the same axis, so remember the last one that worked.
    pref = 0

    while stack:
        tl, th, ul, uh, vl, vh, nt, nu, nv = stack.pop()
        if vf and ul + vl > _ONE:
            continue  # entirely outside u + v <= 1
        examined += 1
        if max_boxes is not None and examined > max_boxes:
            return Undetermined()

        omtl, omth = _ONE - tl, _ONE - th
        us = (ul, uh)
        vs = (vl, vh)
        if vf:
            wts = tuple(
                (_ONE - us[ub] - vs[vb], us[ub], vs[vb]) for ub, vb in corner_uv
            )
        else:
            wts = tuple(
                (_ONE - us[ub], us[ub], _ONE - vs[vb], vs[vb])
                for ub, vb in corner_uv
            )

        # Evaluate axis by axis so a separating axis is found without
        # touching the remaining ones (a box is Disjoint from the first
        # axis whose corner range clears the separation band).
        gap = None
        alive = [True] * 8  # corners still within |F_i| <= d on every axis seen
        order = (pref, *(i for i in (0, 1, 2) if i != pref))
        for i in order:
            alo = tuple(omtl * pts[j][i] + tl * pts[j + 4][i] for j in range(4))
            ahi = tuple(omth * pts[j][i] + th * pts[j + 4][i] for j in range(4))
            vals = []
            for a, b, c, e in (alo, ahi):
                if vf:
                    for w0, w1, w2 in wts:
                        vals.append(a - (w0 * b + w1 * c + w2 * e))
                else:
                    for w0, w1, w2, w3 in wts:
                        vals.append((w0 * a + w1 * b) - (w2 * c + w3 * e))
            mn = min(vals)
            if mn > d:
                gap = mn - d
                pref = i
                break
            mx = max(vals)
            if mx < -d:
                gap = -d - mx
                pref = i
                break
            for k in range(8):
                if alive[k] and abs(vals[k]) > d:
                    alive[k] = False
        if gap is not None:
            if margin is None or gap < margin:
                margin = gap
            continue

        for k in range(8):
            if alive[k]:
                uu, vv = us[(k >> 1) & 1], vs[k & 1]
                if vf and uu + vv > _ONE:
                    continue
                root_at = ((tl, th)[k >> 2], uu, vv)
                return Root(root_at)

        # Undecided box: refine along the dimension with the largest
        # kappa-weighted width, or give up at the depth cap.
        cands = []
        if nt < depth_cap:
            cands.append(((th - tl) * kt, 0))
        if nu < depth_cap:
            cands.append(((uh - ul) * ku, 1))
        if nv < depth_cap:
            cands.append(((vh - vl) * kv, 2))
        cands = [c for c in cands if c[0] > _ZERO]
        if not cands:
            return Undetermined()
        best = max(cands, key=lambda c: c[0])
        # ties prefer t, then u, then v (lowest dim index among maxima)
        dim = min(i for w, i in cands if w == best[0])
        if dim == 0:
            tm = (tl + th) * _HALF
            stack.append((tm, th, ul, uh, vl, vh, nt + 1, nu, nv))
            stack.append((tl, tm, ul, uh, vl, vh, nt + 1, nu, nv))
        elif dim == 1:
            um = (ul + uh) * _HALF
            stack.append((tl, th, um, uh, vl, vh, nt, nu + 1, nv))
            stack.append((tl, th, ul, um, vl, vh, nt, nu + 1, nv))
        else:
            vm = (vl + vh) * _HALF
            stack.append((tl, th, ul, uh, vm, vh, nt, nu, nv + 1))
            stack.append((tl, th, ul, uh, vl, vm, nt, nu, nv + 1))

    if margin is None:
        # Only possible for VF when the whole domain sat outside the
        # barycentric triangle, which [0,1]^2 never does; defensive.
        margin = _ZERO
    return NoRoot(margin)


# ---------------------------------------------------------------------------
# Exact cubic root isolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InfinitelyMany:
    """The cubic is identically zero: every t is a root."""


def _poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == _ZERO:
        cs.pop()
    return cs


def _poly_eval(cs, x):
    acc = _ZERO
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _poly_deriv(cs):
    return [i * cs[i] for i in range(1, len(cs))]


def _poly_divmod(num, den):
    """Polynomial division over the rationals (coefficients lowest first)."""
    num = list(num)
    q = [_ZERO] * max(0, len(num) - len(den) + 1)
    inv = _ONE / den[-1]
    for k in range(len(num) - len(den), -1, -1):
        coef = num[k + len(den) - 1] * inv
        q[k] = coef
        for i, dc in enumerate(den):
            num[k + i] -= coef * dc
    return q, _poly_trim(num)


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        inv = _ONE / a[-1]
        a = [c * inv for c in a]
    return a


def _range_bound(cs, lo, hi):
    """Exact interval-arithmetic enclosure of the polynomial's range on [lo, hi]."""
    blo = bhi = _ZERO
    for c in reversed(cs):
        p1, p2 = blo * lo, blo * hi
        p3, p4 = bhi * lo, bhi * hi
        blo = min(p1, p2, p3, p4) + c
        bhi = max(p1, p2, p3, p4) + c
    return blo, bhi


def _strictly_monotone(deriv, lo, hi):
    """True iff the derivative keeps one strict sign on [lo, hi]."""
    probes = [_poly_eval(deriv, lo), _poly_eval(deriv, hi)]
    if len(deriv) == 3 and deriv[2] != _ZERO:
        vertex = -deriv[1] / (2 * deriv[2])
        if lo < vertex < hi:
            probes.append(_poly_eval(deriv, vertex))
    if any(p == _ZERO for p in probes):
        return False
    return all(p > _ZERO for p in probes) or all(p < _ZERO for p in probes)


def isolate_cubic_roots(a, b, c, d, interval=(0, 1)):
    """Isolate every real root of a*t^3 + b*t^2 + c*t + d in the interval.

    Returns a sorted list of disjoint (lo, hi) rational pairs, each
    containing exactly one root; an exact rational root r appears as the
    degenerate pair (r, r) (multiple roots are always extracted exactly).
    An identically zero polynomial returns InfinitelyMany().
    """
    lo, hi = to_rat(interval[0]), to_rat(interval[1])
    if lo > hi:
        raise ValueError("empty isolation interval")
    f = _poly_trim([to_rat(d), to_rat(c), to_rat(b), to_rat(a)])
    if not f:
        return InfinitelyMany()
    if len(f) == 1:
        return []

    exact: set = set()

    # Multiple roots of f are the roots of gcd(f, f'); for a cubic the gcd
    # has degree <= 2 and its roots are rational (degree 2 forces a triple
    # root, i.e. a perfect square gcd).
    g = _poly_gcd(f, _poly_deriv(f))
    if len(g) == 2:
        exact_mult = [-g[0] / g[1]]
    elif len(g) == 3:
        disc = g[1] * g[1] - 4 * g[2] * g[0]
        if disc != _ZERO:
            raise AssertionError("cubic gcd of degree 2 must be a perfect square")
        exact_mult = [-g[1] / (2 * g[2])]
    else:
        exact_mult = []

    h = f
    for r in exact_mult:
        while True:
            q, rem = _poly_divmod(h, [-r, _ONE])
            if rem:
                break
            h = q
        if lo <= r <= hi:
            exact.add(r)
    h = _poly_trim(h)

    open_intervals = []
    if len(h) >= 2:
        dh = _poly_deriv(h)

        def isolate(l, r, depth):
            if depth > 128:
                raise RuntimeError("cubic isolation failed to converge")
            blo, bhi = _range_bound(h, l, r)
            if blo > _ZERO or bhi < _ZERO:
                return
            hl, hr = _poly_eval(h, l), _poly_eval(h, r)
            if _strictly_monotone(dh, l, r):
                if hl == _ZERO:
                    exact.add(l)
                elif hr == _ZERO:
                    exact.add(r)
                elif (hl > _ZERO) != (hr > _ZERO):
                    open_intervals.append((l, r))
                return
            m = (l + r) * _HALF
            if _poly_eval(h, m) == _ZERO:
                exact.add(m)
            isolate(l, m, depth + 1)
            isolate(m, r, depth + 1)

        if lo == hi:
            if _poly_eval(h, lo) == _ZERO:
                exact.add(lo)
        else:
            # Split at the extracted multiple roots so no open interval for a
            # simple root of h can also contain a multiple root of f.
            cuts = [lo] + sorted(r for r in exact if lo < r < hi) + [hi]
            for sl, sr in zip(cuts, cuts[1:]):
                isolate(sl, sr, 0)

    out = [(r, r) for r in exact] + open_intervals
    out.sort(key=lambda p: (p[0], p[1]))
    for (al, ah), (bl, bh) in zip(out, out[1:]):
        if ah > bl or (ah == bl and al == ah == bl == bh):
            raise AssertionError("isolating intervals must be disjoint")
    return out


def refine_root_interval(a, b, c, d, bracket, width):
    """Shrink an isolating interval by sign bisection until it is narrower
    than width.  The bracket must come from isolate_cubic_roots (one simple
    root, sign change across it); degenerate brackets return unchanged."""
    f = _poly_trim([to_rat(d), to_rat(c), to_rat(b), to_rat(a)])
    lo, hi = to_rat(bracket[0]), to_rat(bracket[1])
    if lo == hi:
        return lo, hi
    w = to_rat(width)
    slo = _poly_eval(f, lo) > _ZERO
    while hi - lo >= w:
        mid = (lo + hi) * _HALF
        fm = _poly_eval(f, mid)
        if fm == _ZERO:
            return mid, mid
        if (fm > _ZERO) == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi
