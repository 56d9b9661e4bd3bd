"""Mesh-level plumbing around the conservative solver.

Takes a triangle mesh with vertex positions at both ends of one candidate
step, finds the primitive pairs whose swept bounding boxes come close, runs
the narrow-phase solver on each, and produces the two things a simulator
needs: the active constraint set and a certified line-search step bound.

Everything here treats the narrow phase as a black box; the only contract
used is that solve() with separation d reports a time of impact no later
than the first moment two primitives come within L-inf distance d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DomainBox, Query, QueryKind, SolverConfig, Vec3
from .inclusion import compute_filters, compute_gamma
from .solver import solve

__all__ = [
    "TriMeshPair",
    "ContactCandidate",
    "CandidateBound",
    "LineSearchResult",
    "InfeasibleStepError",
    "edges_from_triangles",
    "load_obj",
    "broad_phase",
    "construct_active_set",
    "primitive_distance_lb",
    "line_search_step",
]

_SQRT3 = math.sqrt(3.0)

# Error allowance for the closed-form distance kernels below.  They run in
# plain binary64 without a forward rounding analysis, so the line-search
# validation charges every start-distance bound this fixed absolute slack.
_DISTANCE_SLACK = 1e-9


# ---------------------------------------------------------------------------
# Mesh container.
# ---------------------------------------------------------------------------


def edges_from_triangles(triangles) -> np.ndarray:
    """Unique undirected edges, as (k, 2) rows (i, j) with i < j."""
    tris = np.asarray(triangles, dtype=np.intp)
    if tris.size == 0:
        return np.zeros((0, 2), dtype=np.intp)
    if tris.ndim != 2 or tris.shape[1] != 3:
        raise ValueError("triangles must be an (m, 3) index array")
    e = np.concatenate((tris[:, (0, 1)], tris[:, (1, 2)], tris[:, (2, 0)]))
    e.sort(axis=1)
    return np.unique(e, axis=0)


@dataclass(frozen=True)
class TriMeshPair:
    """A triangle mesh with vertex positions at both ends of one step.

    x0 and x1 are (n, 3) position arrays; vertex i moves linearly from
    x0[i] to x1[i].  triangles is an (m, 3) index array, edges a (k, 2)
    index array; edges defaults to the undirected edge set of triangles
    (pass an explicit empty array to opt out of edge-edge candidates).
    """

    x0: np.ndarray
    x1: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray | None = None

    def __post_init__(self):
        x0 = np.ascontiguousarray(np.asarray(self.x0, dtype=np.float64))
        x1 = np.ascontiguousarray(np.asarray(self.x1, dtype=np.float64))
        if x0.ndim != 2 or x0.shape[1] != 3 or x1.shape != x0.shape:
            raise ValueError("x0 and x1 must be (n, 3) arrays of equal shape")
        if not (np.all(np.isfinite(x0)) and np.all(np.isfinite(x1))):
            raise ValueError("vertex positions must be finite")
        tris = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.intp))
        if tris.size == 0:
            tris = np.zeros((0, 3), dtype=np.intp)
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ValueError("triangles must be an (m, 3) index array")
        if self.edges is None:
            edges = edges_from_triangles(tris)
        else:
            edges = np.ascontiguousarray(np.asarray(self.edges, dtype=np.intp))
            if edges.size == 0:
                edges = np.zeros((0, 2), dtype=np.intp)
            if edges.ndim != 2 or edges.shape[1] != 2:
                raise ValueError("edges must be a (k, 2) index array")
        n = x0.shape[0]
        for name, idx in (("triangles", tris), ("edges", edges)):
            if idx.size and (int(idx.min()) < 0 or int(idx.max()) >= n):
                raise ValueError(f"{name} index vertices outside [0, {n})")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "edges", edges)

    @property
    def n_vertices(self) -> int:
        return int(self.x0.shape[0])

    def at(self, alpha: float) -> np.ndarray:
        """Vertex positions after taking the fraction alpha of the step."""
        return self.x0 + float(alpha) * (self.x1 - self.x0)


def load_obj(path) -> tuple[np.ndarray, np.ndarray]:
    """Positions and triangles from a Wavefront OBJ file.

    Only `v` and `f` records are read; faces with more than three corners
    are fan-triangulated, `v/vt/vn` index groups keep the vertex part, and
    negative indices count back from the vertices seen so far.
    """
    verts: list[list[float]] = []
    faces: list[list[int]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            parts = raw.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                if len(parts) < 4:
                    raise ValueError(f"line {line_no}: vertex needs 3 coordinates")
                verts.append([float(parts[1]), float(parts[2]), float(parts[3])])
            elif parts[0] == "f":
                if len(parts) < 4:
                    raise ValueError(f"line {line_no}: face needs >= 3 corners")
                idx = []
                for tok in parts[1:]:
                    i = int(tok.split("/", 1)[0])
                    idx.append(i - 1 if i > 0 else len(verts) + i)
                for k in range(1, len(idx) - 1):
                    faces.append([idx[0], idx[k], idx[k + 1]])
    v = np.asarray(verts, dtype=np.float64).reshape(-1, 3)
    f = np.asarray(faces, dtype=np.intp).reshape(-1, 3)
    if f.size and (f.min() < 0 or f.max() >= len(v)):
        raise ValueError("face index out of range")
    return v, f


# ---------------------------------------------------------------------------
# Broad phase: uniform-grid hash over inflated swept bounding boxes.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContactCandidate:
    """One primitive pair surviving the broad phase.

    indices is (vertex, triangle) for VERTEX_FACE and (edge_a, edge_b)
    with edge_a < edge_b for EDGE_EDGE; query carries the pair's resolved
    start and end positions in the solver's point order.
    """

    kind: QueryKind
    indices: tuple[int, int]
    query: Query


def _vec(row) -> Vec3:
    return Vec3(float(row[0]), float(row[1]), float(row[2]))


def _vf_candidate(mesh: TriMeshPair, v: int, f: int) -> ContactCandidate:
    a, b, c = (int(i) for i in mesh.triangles[f])
    q = Query(
        kind=QueryKind.VERTEX_FACE,
        points0=(_vec(mesh.x0[v]), _vec(mesh.x0[a]), _vec(mesh.x0[b]), _vec(mesh.x0[c])),
        points1=(_vec(mesh.x1[v]), _vec(mesh.x1[a]), _vec(mesh.x1[b]), _vec(mesh.x1[c])),
    )
    return ContactCandidate(QueryKind.VERTEX_FACE, (int(v), int(f)), q)


def _ee_candidate(mesh: TriMeshPair, i: int, j: int) -> ContactCandidate:
    a0, a1 = (int(k) for k in mesh.edges[i])
    b0, b1 = (int(k) for k in mesh.edges[j])
    q = Query(
        kind=QueryKind.EDGE_EDGE,
        points0=(_vec(mesh.x0[a0]), _vec(mesh.x0[a1]), _vec(mesh.x0[b0]), _vec(mesh.x0[b1])),
        points1=(_vec(mesh.x1[a0]), _vec(mesh.x1[a1]), _vec(mesh.x1[b0]), _vec(mesh.x1[b1])),
    )
    return ContactCandidate(QueryKind.EDGE_EDGE, (int(i), int(j)), q)


def _swept_boxes(mesh: TriMeshPair, idx: np.ndarray, inflation: float):
    """Inflated bounding box (lo, hi) of each primitive over both snapshots."""
    pts = np.stack((mesh.x0[idx], mesh.x1[idx]))  # (2, m, k, 3)
    lo = pts.min(axis=(0, 2)) - inflation
    hi = pts.max(axis=(0, 2)) + inflation
    return lo, hi


def _cells(lo, hi, h: float):
    """Integer grid cells an axis-aligned box touches."""
    x0 = math.floor(lo[0] / h)
    x1 = math.floor(hi[0] / h)
    y0 = math.floor(lo[1] / h)
    y1 = math.floor(hi[1] / h)
    z0 = math.floor(lo[2] / h)
    z1 = math.floor(hi[2] / h)
    for ix in range(x0, x1 + 1):
        for iy in range(y0, y1 + 1):
            for iz in range(z0, z1 + 1):
                yield (ix, iy, iz)


def _overlap(lo_a, hi_a, lo_b, hi_b) -> bool:
    return bool(
        lo_a[0] <= hi_b[0] and lo_b[0] <= hi_a[0]
        and lo_a[1] <= hi_b[1] and lo_b[1] <= hi_a[1]
        and lo_a[2] <= hi_b[2] and lo_b[2] <= hi_a[2]
    )


def broad_phase(mesh: TriMeshPair, inflation: float = 0.0) -> list[ContactCandidate]:
    """Primitive pairs whose inflated swept bounding boxes overlap.

    Each primitive's box covers its vertex positions at both step ends,
    grown by inflation on every side; callers pick inflation at least the
    separation plus tolerance they later certify against.  Pairs are found
    by hashing boxes on a uniform grid whose cell size is the mean swept
    box diagonal; two overlapping boxes always share a cell, so the result
    is a superset of the exact box-overlap set.  Pairs sharing a mesh
    vertex are skipped: they sit at distance zero by construction and
    belong to the host's constraint assembly, not to collision detection.
    The candidate list is sorted by index pair, vertex-face first.
    """
    if not (inflation >= 0.0 and math.isfinite(inflation)):
        raise ValueError("inflation must be >= 0 and finite")
    n = mesh.n_vertices
    if n == 0:
        return []
    m_t = int(mesh.triangles.shape[0])
    m_e = int(mesh.edges.shape[0])

    vidx = np.arange(n, dtype=np.intp)[:, None]
    vlo, vhi = _swept_boxes(mesh, vidx, inflation)
    tlo, thi = _swept_boxes(mesh, mesh.triangles, inflation)
    elo, ehi = _swept_boxes(mesh, mesh.edges, inflation)

    diag = np.concatenate((vhi - vlo, thi - tlo, ehi - elo))
    h = float(np.mean(np.linalg.norm(diag, axis=1))) if diag.size else 0.0
    if not (h > 0.0 and math.isfinite(h)):
        h = 1.0

    out: list[ContactCandidate] = []

    if m_t:
        grid: dict[tuple[int, int, int], list[int]] = {}
        for f in range(m_t):
            for cell in _cells(tlo[f], thi[f], h):
                grid.setdefault(cell, []).append(f)
        pairs_vf: set[tuple[int, int]] = set()
        for v in range(n):
            seen: set[int] = set()
            for cell in _cells(vlo[v], vhi[v], h):
                for f in grid.get(cell, ()):
                    if f in seen:
                        continue
                    seen.add(f)
                    if v in mesh.triangles[f]:
                        continue
                    if _overlap(vlo[v], vhi[v], tlo[f], thi[f]):
                        pairs_vf.add((v, f))
        for v, f in sorted(pairs_vf):
            out.append(_vf_candidate(mesh, v, f))

    if m_e:
        egrid: dict[tuple[int, int, int], list[int]] = {}
        for i in range(m_e):
            for cell in _cells(elo[i], ehi[i], h):
                egrid.setdefault(cell, []).append(i)
        pairs_ee: set[tuple[int, int]] = set()
        for j in range(m_e):
            seen = set()
            for cell in _cells(elo[j], ehi[j], h):
                for i in egrid.get(cell, ()):
                    if i >= j or i in seen:
                        continue
                    seen.add(i)
                    a = mesh.edges[i]
                    b = mesh.edges[j]
                    if a[0] in b or a[1] in b:
                        continue
                    if _overlap(elo[i], ehi[i], elo[j], ehi[j]):
                        pairs_ee.add((i, j))
        for i, j in sorted(pairs_ee):
            out.append(_ee_candidate(mesh, i, j))

    return out


def construct_active_set(
    mesh: TriMeshPair,
    delta: float = 1e-6,
    max_checks: int = 1_000_000,
    separation: float = 0.0,
) -> list[tuple[ContactCandidate, float, DomainBox]]:
    """Candidate pairs the solver could not rule out, with toi and witness.

    Runs the conservative solver on every broad-phase candidate (inflation
    separation + delta, so reported contacts stay inside the candidate
    set) and keeps the pairs with a finite time of impact.  The witness
    box locates the contact parameters: its u and v ranges are the
    barycentric (or edge-parameter) coordinates a constraint needs.
    separation > 0 additionally activates pairs that merely come within
    that distance, for constraint sets that act before touchdown.
    """
    out: list[tuple[ContactCandidate, float, DomainBox]] = []
    for cand in broad_phase(mesh, inflation=separation + delta):
        res = solve(
            cand.query,
            SolverConfig(delta=delta, max_checks=max_checks, separation=separation),
        )
        if res.colliding:
            out.append((cand, res.toi, res.witness))
    return out


# ---------------------------------------------------------------------------
# Start-distance lower bounds (closed-form Euclidean, demoted to L-inf).
# ---------------------------------------------------------------------------


def _norm(v: Vec3) -> float:
    return math.sqrt(v.dot(v))


def _clamp01(s: float) -> float:
    return 0.0 if s < 0.0 else (1.0 if s > 1.0 else s)


def _point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> float:
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return _norm(p - a)
    s = _clamp01((p - a).dot(ab) / denom)
    return _norm(p - (a + ab.scaled(s)))


def _point_triangle_distance(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> float:
    # Boundary distance always applies; a zero-area triangle is exactly the
    # union of its edges, so this branch alone covers the degenerate case.
    best = min(
        _point_segment_distance(p, a, b),
        _point_segment_distance(p, b, c),
        _point_segment_distance(p, c, a),
    )
    n = (b - a).cross(c - a)
    nn = n.dot(n)
    if nn > 0.0:
        # Plane distance applies when the projection foot lands inside.
        w0 = (c - b).cross(p - b).dot(n)
        w1 = (a - c).cross(p - c).dot(n)
        w2 = (b - a).cross(p - a).dot(n)
        if w0 >= 0.0 and w1 >= 0.0 and w2 >= 0.0:
            best = min(best, abs((p - a).dot(n)) / math.sqrt(nn))
    return best


def _segment_segment_distance(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> float:
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = d1.dot(d1)
    e = d2.dot(d2)
    f = d2.dot(r)
    if a == 0.0 and e == 0.0:
        return _norm(r)
    if a == 0.0:
        s = 0.0
        t = _clamp01(f / e)
    else:
        c = d1.dot(r)
        if e == 0.0:
            t = 0.0
            s = _clamp01(-c / a)
        else:
            b = d1.dot(d2)
            denom = a * e - b * b
            # denom >= 0 up to rounding; non-positive means parallel.
            s = _clamp01((b * f - c * e) / denom) if denom > 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = _clamp01(-c / a)
            elif t > 1.0:
                t = 1.0
                s = _clamp01((b - c) / a)
    return _norm((p1 + d1.scaled(s)) - (p2 + d2.scaled(t)))


def primitive_distance_lb(candidate: ContactCandidate) -> float:
    """Certified lower bound on a pair's L-inf distance at the step start.

    The exact closed-form Euclidean distance at the start positions is
    divided by sqrt(3) (in R^3, |x|_inf >= |x|_2 / sqrt(3)) and rounded
    down one representable step.  Degenerate primitives cost nothing
    extra: the closed forms clamp onto the sub-primitives that remain.
    """
    p0, p1, p2, p3 = candidate.query.points0
    if candidate.kind == QueryKind.VERTEX_FACE:
        d = _point_triangle_distance(p0, p1, p2, p3)
    else:
        d = _segment_segment_distance(p0, p1, p2, p3)
    if d <= 0.0:
        return 0.0
    return max(0.0, math.nextafter(d / _SQRT3, 0.0))


# ---------------------------------------------------------------------------
# Line search step bound.
# ---------------------------------------------------------------------------


class InfeasibleStepError(RuntimeError):
    """No positive step fraction can be certified at the requested tolerances.

    Raised when a candidate pair already touches at the step start, or when
    validation halves p to zero because a pair's start distance cannot
    cover the solver tolerance plus numeric error.  Remedies are a smaller
    delta, a larger check budget, or cleaner start positions.
    """


@dataclass(frozen=True)
class CandidateBound:
    """Per-pair outcome of the final line-search pass.

    separation is the minimum-separation distance the solve enforced for
    this pair; toi is None when the pair was certified free of it on the
    pass's (possibly already shortened) time interval.
    """

    candidate: ContactCandidate
    distance_lb: float
    separation: float
    toi: float | None
    witness: DomainBox | None


@dataclass(frozen=True)
class LineSearchResult:
    """Certified step fraction plus the evidence that produced it."""

    alpha: float
    p: float
    validations: int
    bounds: tuple[CandidateBound, ...]
    limiting: int | None

    @property
    def limiting_bound(self) -> CandidateBound | None:
        return None if self.limiting is None else self.bounds[self.limiting]


def line_search_step(
    mesh: TriMeshPair,
    *,
    p: float,
    delta: float = 1e-6,
    max_checks: int = 1_000_000,
    energy_decreases: Callable[[float], bool] | None = None,
    alpha_min: float = 1e-8,
    inflation: float | None = None,
) -> LineSearchResult:
    """Largest certified collision-free step fraction alpha in (0, 1].

    Collision bound: every broad-phase pair gets a minimum-separation
    solve with separation min(p * d_i, delta), d_i being the pair's
    certified start-distance lower bound; alpha is the smallest reported
    impact time.  Stopping at a fraction of each start distance, instead
    of at contact, is what lets repeated steps toward an obstacle keep
    making progress: each stop leaves room for the next validated step, so
    the cumulative times grow strictly with ratio about p.  The cap at
    delta keeps the enlarged classification cheap once pairs are far.

    Validation: a positive step for a pair is only guaranteed when
    d_i > (tol_i + eps_i + rho_i) / (1 - p), with tol_i the gap-range
    width the solve actually resolved (delta on a clean accept, the open
    box's codomain width after budget exhaustion), eps_i its filter
    bound, and rho_i a fixed slack for the distance kernels.  p is halved until the bound holds for all
    pairs, the solves run on the shared shrinking interval [0, alpha], and
    if any achieved tolerance exceeds the assumed one (check budget ran
    out) validation repeats against the achieved value.  p reaching zero
    raises InfeasibleStepError.

    The energy side stays with the caller: after the collision bound,
    energy_decreases(alpha) is polled, halving alpha until it accepts or
    alpha_min is passed.  A solve that exhausts its budget near t = 0 can
    legitimately yield alpha == 0.0; callers should treat that as a failed
    line search, same as an energy loop that bottoms out.
    """
    if not (0.0 < p < 1.0):
        raise ValueError("p must lie strictly between 0 and 1")
    if inflation is None:
        inflation = 2.0 * delta
    cands = broad_phase(mesh, inflation)

    prep: list[tuple[ContactCandidate, float, float]] = []
    for cand in cands:
        d_lb = primitive_distance_lb(cand)
        if d_lb <= 0.0:
            raise InfeasibleStepError(
                f"{cand.kind.name} pair {cand.indices} touches at the step "
                "start; no positive step can be certified"
            )
        gamma = compute_gamma(cand.query.all_coordinates())
        fe = compute_filters(cand.kind, gamma, separation=min(p * d_lb, delta))
        prep.append((cand, d_lb, max(fe.eps)))

    alpha = 1.0
    validations = 0
    bounds: list[CandidateBound] = []
    limiting: int | None = None
    tol_assumed = delta
    while prep:
        validations += 1
        worst = min(
            (d - tol_assumed - eps - _DISTANCE_SLACK) / d for _, d, eps in prep
        )
        while p >= worst:
            p *= 0.5
            if p == 0.0:
                raise InfeasibleStepError(
                    "validation halved p to zero; the start distances cannot "
                    "cover the solver tolerance plus numeric error"
                )
        alpha = 1.0
        achieved = tol_assumed
        bounds = []
        limiting = None
        for cand, d_lb, _ in prep:
            sep = min(p * d_lb, delta)
            res = solve(
                cand.query,
                SolverConfig(
                    delta=tol_assumed,
                    max_checks=max_checks,
                    separation=sep,
                    t_max=alpha,
                ),
            )
            achieved = max(achieved, res.codomain_width)
            bounds.append(CandidateBound(cand, d_lb, sep, res.toi, res.witness))
            if res.colliding and res.toi < alpha:
                alpha = res.toi
                limiting = len(bounds) - 1
                if alpha == 0.0:
                    break  # the remaining interval is empty
        if not (achieved > tol_assumed):
            break
        worst = min(
            (d - achieved - eps - _DISTANCE_SLACK) / d for _, d, eps in prep
        )
        if p < worst:
            break  # p already valid for the tolerance actually achieved
        # A budget-limited solve undercut the assumed tolerance and p is no
        # longer covered: revalidate against the achieved value and resolve.
        tol_assumed = achieved

    if energy_decreases is not None:
        while alpha > alpha_min and not energy_decreases(alpha):
            alpha *= 0.5

    return LineSearchResult(
        alpha=alpha,
        p=p,
        validations=validations,
        bounds=tuple(bounds),
        limiting=limiting,
    )
