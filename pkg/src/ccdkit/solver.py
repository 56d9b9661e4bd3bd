"""Conservative CCD solver: bisect the domain, keep every box a root could hide in.

solve() classifies (t, u, v) boxes with the filtered corner-hull test
(inclusion module) and refines undecided ones, visiting boxes level by
level in ascending time order.  It reports either a certified all-clear or
a time of impact that is never later than any true root; rounding, the
check budget, and the tolerance only ever move the answer earlier.  The
traversal is deterministic: same query, same config, same result.

The heavy lifting runs in the compiled kernel (_kernel module).  The
functions split() and queue_order() expose the kernel's refinement and
ordering rules on plain DomainBox values so they can be tested and reused
directly.
"""

from __future__ import annotations

import math

from . import _kernel
from .core import CCDResult, DomainBox, Query, QueryKind, SolverConfig
from .inclusion import BoxClass, FilterEps, compute_filters, compute_gamma

# The kernel mirrors BoxClass numerically; keep them aligned.
assert _kernel.DISJOINT == BoxClass.DISJOINT
assert _kernel.INTERSECTS == BoxClass.INTERSECTS
assert _kernel.CONTAINED == BoxClass.CONTAINED


def _resolve_filters(q: Query, config: SolverConfig) -> FilterEps:
    if config.filters == "auto":
        return compute_filters(
            q.kind, compute_gamma(q.all_coordinates()), config.separation
        )
    eps = config.filters
    if not isinstance(eps, FilterEps):
        raise TypeError("config.filters must be 'auto' or a FilterEps")
    if eps.kind != q.kind:
        raise ValueError(f"filter set is for {eps.kind.name}, query is {q.kind.name}")
    if eps.separation != config.separation:
        raise ValueError(
            f"filter set was computed for separation {eps.separation}, "
            f"config has {config.separation}"
        )
    # Caller contract for reused filters: the query's coordinates stay
    # within eps.gamma.  Not re-validated here; that is the entire saving.
    return eps


def solve(q: Query, config: SolverConfig | None = None) -> CCDResult:
    """Conservative time of impact for one query.

    Returns a CCDResult whose toi is None only when every part of the
    domain was certified collision free at the filter tolerance; any true
    root t* always satisfies toi <= t*.  With separation d > 0 the root
    condition is ||F||_inf <= d (proximity rather than exact contact).
    """
    if config is None:
        config = SolverConfig()
    eps = _resolve_filters(q, config)
    s, e = q.as_arrays()
    (
        status,
        toi,
        tol,
        codom,
        checks,
        early,
        wt0,
        wt1,
        wu0,
        wu1,
        wv0,
        wv1,
        wlevel,
    ) = _kernel.solve_kernel(
        s,
        e,
        int(q.kind),
        config.t_max,
        config.delta,
        config.max_checks,
        config.separation,
        eps.eps[0],
        eps.eps[1],
        eps.eps[2],
    )
    if status == 0:
        return CCDResult(
            toi=None,
            witness=None,
            achieved_tol=0.0,
            codomain_width=0.0,
            checks=int(checks),
            early_terminated=False,
        )
    witness = DomainBox(
        t=(wt0, wt1), u=(wu0, wu1), v=(wv0, wv1), level=int(wlevel)
    )
    return CCDResult(
        toi=float(toi),
        witness=witness,
        achieved_tol=float(tol),
        codomain_width=float(codom),
        checks=int(checks),
        early_terminated=bool(early),
    )


def split(
    box: DomainBox, kappa: tuple[float, float, float], kind: QueryKind
) -> tuple[DomainBox, ...]:
    """Bisect a box along its most significant dimension.

    The dimension with the largest kappa-weighted width is halved (ties
    prefer t, then u, then v); a dimension with kappa 0 does not affect F
    and is never split.  For vertex-face queries, a child lying entirely
    outside the barycentric triangle (u_lo + v_lo > 1) is discarded.
    Raises ValueError when no dimension is splittable (all weighted widths
    zero: F is constant over the box).
    """
    kt, ku, kv = (float(k) for k in kappa)
    if min(kt, ku, kv) < 0.0:
        raise ValueError("kappa components must be >= 0")
    ct = (box.t[1] - box.t[0]) * kt
    cu = (box.u[1] - box.u[0]) * ku
    cv = (box.v[1] - box.v[0]) * kv
    dim, best = 0, ct
    if cu > best:
        dim, best = 1, cu
    if cv > best:
        dim, best = 2, cv
    if best <= 0.0:
        raise ValueError("box has no splittable dimension (F constant over it)")
    lvl = box.level + 1
    if dim == 0:
        m = 0.5 * (box.t[0] + box.t[1])
        kids = (
            DomainBox((box.t[0], m), box.u, box.v, lvl),
            DomainBox((m, box.t[1]), box.u, box.v, lvl),
        )
    elif dim == 1:
        m = 0.5 * (box.u[0] + box.u[1])
        kids = (
            DomainBox(box.t, (box.u[0], m), box.v, lvl),
            DomainBox(box.t, (m, box.u[1]), box.v, lvl),
        )
    else:
        m = 0.5 * (box.v[0] + box.v[1])
        kids = (
            DomainBox(box.t, box.u, (box.v[0], m), lvl),
            DomainBox(box.t, box.u, (m, box.v[1]), lvl),
        )
    if kind == QueryKind.VERTEX_FACE:
        kids = tuple(k for k in kids if k.u[0] + k.v[0] <= 1.0)
    return kids


def queue_order(a: DomainBox, b: DomainBox) -> int:
    """Traversal order of the solver's queue: by level, then by time start.

    Returns -1/0/1 as a sorts before/ties with/sorts after b.  Equal keys
    keep insertion order (the queue's sort is stable), which makes the
    whole traversal deterministic.
    """
    ka = (a.level, a.t[0])
    kb = (b.level, b.t[0])
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def warm_up() -> None:
    """Compile the kernel (first call is slow; cached afterwards)."""
    q = Query(
        QueryKind.VERTEX_FACE,
        ((0.5, 0.5, 1.0), (0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
        ((0.5, 0.5, -1.0), (0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
    )
    solve(q, SolverConfig(max_checks=16))
    q2 = Query(
        QueryKind.EDGE_EDGE,
        ((0.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)),
        ((0.0, 0.0, -1.0), (1.0, 1.0, -1.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)),
    )
    solve(q2, SolverConfig(max_checks=16))
