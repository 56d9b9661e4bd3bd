"""Compiled inner loop of the conservative bisection solver.

Everything here is numba-compiled with strict IEEE-754 semantics: no
fastmath, no reassociation, so corner evaluations are bit-identical to the
scalar reference in core.py and the batched form in inclusion.py.  The
filter error bounds assume exactly that operation order; enabling fastmath
here would silently invalidate them.

The queue is processed level by level.  Within a level, boxes are visited
in ascending order of their time interval's start (stable sort, so ties
keep push order); children accumulate in a separate buffer for the next
level.  This visits boxes in the same (level, t-start, insertion) order as
a single priority queue would, at a fraction of the bookkeeping cost.

Conservativeness bookkeeping: the solver never discards a box that could
contain a root without accounting for it.  Two records are carried:

  * the earliest colliding box of the current level (the candidate a
    normal return reports), and
  * the earliest "dropped" box: one that reached tolerance while a
    colliding box earlier in its level had already been seen.  The
    level-sweep only certifies "no root before the FIRST colliding box of
    the level", so later small boxes cannot be returned directly, but
    their time lower bounds may precede the candidate the sweep
    eventually settles on.  Every returned time of impact is the minimum
    over both records, which keeps toi <= any true root in all paths
    (normal, budget-exhausted, and queue-exhausted).
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Must match inclusion.BoxClass values.
DISJOINT = 0
INTERSECTS = 1
CONTAINED = 2

_INF = np.inf


@njit(cache=True)
def _hull_axis(s, e, kind, ax, tl, th, ul, uh, vl, vh):
    """Min/max of one axis of F over the 8 corners of a domain box."""
    mn = _INF
    mx = -_INF
    for it in range(2):
        t = tl if it == 0 else th
        omt = 1.0 - t
        a = omt * s[0, ax] + t * e[0, ax]
        b = omt * s[1, ax] + t * e[1, ax]
        c = omt * s[2, ax] + t * e[2, ax]
        d = omt * s[3, ax] + t * e[3, ax]
        for iu in range(2):
            u = ul if iu == 0 else uh
            for iv in range(2):
                v = vl if iv == 0 else vh
                if kind == 0:
                    val = a - ((1.0 - u - v) * b + u * c + v * d)
                else:
                    val = ((1.0 - u) * a + u * b) - ((1.0 - v) * c + v * d)
                if val < mn:
                    mn = val
                if val > mx:
                    mx = val
    return mn, mx


@njit(cache=True)
def _classify(s, e, kind, tl, th, ul, uh, vl, vh, ex, ey, ez, sep):
    """Three-way classification plus the raw hull width (0.0 when disjoint).

    Axis order x, y, z with an early return at the first separated axis;
    the hull is enlarged by the separation before comparing, the reported
    width is of the raw hull.
    """
    contained = True
    wb = 0.0
    for ax in range(3):
        mn, mx = _hull_axis(s, e, kind, ax, tl, th, ul, uh, vl, vh)
        eps = ex if ax == 0 else (ey if ax == 1 else ez)
        lo = mn - sep
        hi = mx + sep
        if lo > eps or hi < -eps:
            return DISJOINT, 0.0
        if not (lo >= -eps and hi <= eps):
            contained = False
        w = mx - mn
        if w > wb:
            wb = w
    if contained:
        return CONTAINED, wb
    return INTERSECTS, wb


@njit(cache=True)
def _kappas(s, e, kind, t_max):
    """Variation weights 3 * max corner-pair difference per dimension, on
    the domain [0, t_max] x [0, 1] x [0, 1]."""
    F = np.empty((8, 3))
    for it in range(2):
        t = 0.0 if it == 0 else t_max
        omt = 1.0 - t
        for ax in range(3):
            a = omt * s[0, ax] + t * e[0, ax]
            b = omt * s[1, ax] + t * e[1, ax]
            c = omt * s[2, ax] + t * e[2, ax]
            d = omt * s[3, ax] + t * e[3, ax]
            for iu in range(2):
                u = 0.0 if iu == 0 else 1.0
                for iv in range(2):
                    v = 0.0 if iv == 0 else 1.0
                    if kind == 0:
                        val = a - ((1.0 - u - v) * b + u * c + v * d)
                    else:
                        val = ((1.0 - u) * a + u * b) - ((1.0 - v) * c + v * d)
                    F[4 * it + 2 * iu + iv, ax] = val
    out = np.empty(3)
    k = 0
    for stride in (4, 2, 1):
        best = 0.0
        for i in range(8):
            if i & stride:
                continue
            for ax in range(3):
                diff = abs(F[i + stride, ax] - F[i, ax])
                if diff > best:
                    best = diff
        out[k] = 3.0 * best
        k += 1
    return out[0], out[1], out[2]


@njit(cache=True)
def solve_kernel(s, e, kind, t_max, delta, max_checks, sep, ex, ey, ez):
    """Level-ordered conservative bisection over the (t, u, v) domain.

    s, e: (4, 3) start/end positions.  kind: 0 vertex-face, 1 edge-edge.
    Returns (status, toi, tol, codom, checks, early,
             w_t0, w_t1, w_u0, w_u1, w_v0, w_v1, w_level):
    status 0 = certified no collision (toi = inf), 1 = collision at toi
    with the witness box in the trailing fields; tol/codom are the witness
    box's time width and hull width; early = 1 when the check budget ended
    the search.
    """
    kt, ku, kv = _kappas(s, e, kind, t_max)

    cur = np.empty((64, 6))
    nxt = np.empty((64, 6))
    cur[0, 0] = 0.0
    cur[0, 1] = t_max
    cur[0, 2] = 0.0
    cur[0, 3] = 1.0
    cur[0, 4] = 0.0
    cur[0, 5] = 1.0
    ncur = 1
    nnxt = 0
    level = 0
    last_colliding_level = -1
    checks = 0

    have_first = False  # earliest colliding box of its level (most recent level)
    f_t0 = f_t1 = f_u0 = f_u1 = f_v0 = f_v1 = 0.0
    f_level = 0
    f_codom = 0.0

    have_drop = False  # earliest box set aside at tolerance (see module docstring)
    d_t0 = d_t1 = d_u0 = d_u1 = d_v0 = d_v1 = 0.0
    d_level = 0
    d_codom = 0.0

    while ncur > 0:
        keys = cur[:ncur, 0].copy()
        order = np.argsort(keys, kind="mergesort")
        for oi in range(ncur):
            r = order[oi]
            tl = cur[r, 0]
            th = cur[r, 1]
            ul = cur[r, 2]
            uh = cur[r, 3]
            vl = cur[r, 4]
            vh = cur[r, 5]

            cls, wb = _classify(s, e, kind, tl, th, ul, uh, vl, vh, ex, ey, ez, sep)
            checks += 1

            if cls == DISJOINT:
                if checks >= max_checks and (
                    have_drop or oi + 1 < ncur or nnxt > 0
                ):
                    # Budget exhausted with uncertified boxes outstanding:
                    # report the earliest recorded candidate.
                    if have_drop and ((not have_first) or d_t0 < f_t0):
                        return (1, d_t0, d_t1 - d_t0, d_codom, checks, 1,
                                d_t0, d_t1, d_u0, d_u1, d_v0, d_v1, d_level)
                    return (1, f_t0, f_t1 - f_t0, f_codom, checks, 1,
                            f_t0, f_t1, f_u0, f_u1, f_v0, f_v1, f_level)
                continue

            if level != last_colliding_level:
                have_first = True
                f_t0, f_t1, f_u0, f_u1 = tl, th, ul, uh
                f_v0, f_v1 = vl, vh
                f_level = level
                f_codom = wb

            if checks >= max_checks:
                if have_drop and d_t0 < f_t0:
                    return (1, d_t0, d_t1 - d_t0, d_codom, checks, 1,
                            d_t0, d_t1, d_u0, d_u1, d_v0, d_v1, d_level)
                return (1, f_t0, f_t1 - f_t0, f_codom, checks, 1,
                        f_t0, f_t1, f_u0, f_u1, f_v0, f_v1, f_level)

            accept = wb < delta or cls == CONTAINED
            sdim = -1
            smid = 0.0
            if not accept:
                ct = (th - tl) * kt
                cu = (uh - ul) * ku
                cv = (vh - vl) * kv
                sdim = 0
                sbest = ct
                if cu > sbest:
                    sdim = 1
                    sbest = cu
                if cv > sbest:
                    sdim = 2
                    sbest = cv
                if sdim == 0:
                    smid = 0.5 * (tl + th)
                    if smid <= tl or smid >= th:
                        accept = True  # at float resolution; cannot refine
                elif sdim == 1:
                    smid = 0.5 * (ul + uh)
                    if smid <= ul or smid >= uh:
                        accept = True
                else:
                    smid = 0.5 * (vl + vh)
                    if smid <= vl or smid >= vh:
                        accept = True

            if accept:
                if level != last_colliding_level:
                    # First colliding box of a fresh level: everything with an
                    # earlier time start is certified root free except possibly
                    # a previously dropped box.
                    if have_drop and d_t0 < tl:
                        return (1, d_t0, d_t1 - d_t0, d_codom, checks, 0,
                                d_t0, d_t1, d_u0, d_u1, d_v0, d_v1, d_level)
                    return (1, tl, th - tl, wb, checks, 0,
                            tl, th, ul, uh, vl, vh, level)
                if (not have_drop) or tl < d_t0:
                    d_t0, d_t1, d_u0, d_u1 = tl, th, ul, uh
                    d_v0, d_v1 = vl, vh
                    d_level = level
                    d_codom = wb
                have_drop = True
            else:
                if nnxt + 2 > nxt.shape[0]:
                    bigger = np.empty((2 * nxt.shape[0], 6))
                    bigger[:nnxt] = nxt[:nnxt]
                    nxt = bigger
                if sdim == 0:
                    nxt[nnxt, 0] = tl
                    nxt[nnxt, 1] = smid
                    nxt[nnxt, 2] = ul
                    nxt[nnxt, 3] = uh
                    nxt[nnxt, 4] = vl
                    nxt[nnxt, 5] = vh
                    nnxt += 1
                    nxt[nnxt, 0] = smid
                    nxt[nnxt, 1] = th
                    nxt[nnxt, 2] = ul
                    nxt[nnxt, 3] = uh
                    nxt[nnxt, 4] = vl
                    nxt[nnxt, 5] = vh
                    nnxt += 1
                elif sdim == 1:
                    nxt[nnxt, 0] = tl
                    nxt[nnxt, 1] = th
                    nxt[nnxt, 2] = ul
                    nxt[nnxt, 3] = smid
                    nxt[nnxt, 4] = vl
                    nxt[nnxt, 5] = vh
                    nnxt += 1
                    if kind != 0 or smid + vl <= 1.0:
                        nxt[nnxt, 0] = tl
                        nxt[nnxt, 1] = th
                        nxt[nnxt, 2] = smid
                        nxt[nnxt, 3] = uh
                        nxt[nnxt, 4] = vl
                        nxt[nnxt, 5] = vh
                        nnxt += 1
                else:
                    nxt[nnxt, 0] = tl
                    nxt[nnxt, 1] = th
                    nxt[nnxt, 2] = ul
                    nxt[nnxt, 3] = uh
                    nxt[nnxt, 4] = vl
                    nxt[nnxt, 5] = smid
                    nnxt += 1
                    if kind != 0 or ul + smid <= 1.0:
                        nxt[nnxt, 0] = tl
                        nxt[nnxt, 1] = th
                        nxt[nnxt, 2] = ul
                        nxt[nnxt, 3] = uh
                        nxt[nnxt, 4] = smid
                        nxt[nnxt, 5] = vh
                        nnxt += 1

            last_colliding_level = level

        tmp = cur
        cur = nxt
        nxt = tmp
        ncur = nnxt
        nnxt = 0
        level += 1

    if have_drop:
        return (1, d_t0, d_t1 - d_t0, d_codom, checks, 0,
                d_t0, d_t1, d_u0, d_u1, d_v0, d_v1, d_level)
    return (0, _INF, 0.0, 0.0, checks, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0)
