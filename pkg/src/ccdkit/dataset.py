"""Labeled query sets: exact rational CSV I/O and generators.

File format
-----------
One query is eight CSV rows, one row per input point: the four points at
t = 0 (query order, so p/v1/v2/v3 or p1/p2/p3/p4) followed by the same
four points at t = 1.  Each row has seven comma-separated fields::

    x_num, x_den, y_num, y_den, z_num, z_den, truth

Coordinates are exact rationals with arbitrarily long integer numerator
and denominator strings; truth is the ground-truth collision label and
must repeat identically on all eight rows of a record.  No header.
Files ending in ``.gz`` are gzip-compressed.  The format does not encode
the query kind, so readers must be told whether a file holds vertex-face
or edge-edge records.

Generators
----------
``gen_handcrafted`` emits a fixed battery of degenerate and boundary
cases, each labeled at generation time by an exact witness or an oracle
certificate.  ``gen_random`` emits deterministic pseudo-random sets in
two flavors: simulation-like (unit scale, overwhelmingly non-colliding,
as a broad phase would produce) and adversarial (scaled coordinates,
sliver triangles, boundary witnesses, tighter misses).

Positives are constructed around an exact planted root: pick the contact
point C, contact time t* and velocity D on dyadic grids, then place the
endpoints at x0 = C - t* D and x1 = C + (1 - t*) D.  Both endpoints are
exactly representable, and (1 - t*) x0 + t* x1 recovers C exactly in
rational arithmetic, so the witness label is machine-checkable.
Negatives carry a NoRoot certificate from the exact oracle; queries the
oracle cannot decide within budget are dropped and counted.
"""

from __future__ import annotations

import csv
import gzip
import math
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, TextIO

from .core import Query, QueryKind, Vec3, coplanarity_cubic
from .oracle import (
    NoRoot,
    Rat,
    Root,
    Undetermined,
    certify_no_root,
    isolate_cubic_roots,
    rational_eval_F,
    to_rat,
)

__all__ = [
    "DatasetError",
    "LabeledQuery",
    "Profile",
    "Provenance",
    "gen_handcrafted",
    "gen_random",
    "parse_queries",
    "write_queries",
]


class DatasetError(ValueError):
    """Malformed dataset input (message carries the offending row index)."""


class Provenance(Enum):
    """How a truth label was established."""

    FILE = "file"
    CONSTRUCTED = "constructed"
    ORACLE_CERTIFIED = "oracle_certified"


class Profile(Enum):
    """Random generator flavor."""

    SIMULATION_LIKE = "simulation_like"
    ADVERSARIAL = "adversarial"


@dataclass(frozen=True)
class LabeledQuery:
    """A query with ground truth and the evidence behind it.

    ``rationals`` holds the eight input points as exact rationals in file
    row order (four points at t = 0, then four at t = 1); ``query`` holds
    their round-to-nearest binary64 images.  For constructed labels
    ``witness`` is an exact (t, u, v) root; for certified labels either
    ``witness`` (a root the oracle found) or ``margin`` (a NoRoot
    distance bound) backs the label, so every truth value can be
    re-checked from the record alone.  ``tag`` is free-form metadata for
    locating specific entries in generated sets; it does not persist
    through file round-trips.
    """

    query: Query
    rationals: tuple
    truth: bool
    provenance: Provenance
    witness: tuple | None = None
    margin: object | None = None
    tag: str = ""

    def __post_init__(self) -> None:
        if len(self.rationals) != 8:
            raise ValueError("rationals must hold 8 points")
        if self.provenance is Provenance.CONSTRUCTED:
            if not self.truth or self.witness is None:
                raise ValueError("constructed labels are positive with a witness")
        elif self.provenance is Provenance.ORACLE_CERTIFIED:
            if self.truth and self.witness is None:
                raise ValueError("certified positive needs a witness")
            if not self.truth and self.margin is None:
                raise ValueError("certified negative needs a margin")

    @property
    def kind(self) -> QueryKind:
        return self.query.kind


def _labeled(
    kind: QueryKind,
    rats,
    truth: bool,
    provenance: Provenance,
    *,
    witness=None,
    margin=None,
    tag: str = "",
) -> LabeledQuery:
    """Build a LabeledQuery from 8 rational points (t0 four, then t1 four)."""
    floats = []
    for pt in rats:
        xyz = []
        for c in pt:
            f = float(c)
            if f in (float("inf"), float("-inf")):
                raise DatasetError("coordinate overflows binary64")
            xyz.append(f)
        floats.append(Vec3(*xyz))
    q = Query(kind, tuple(floats[:4]), tuple(floats[4:]))
    rats_t = tuple(tuple(to_rat(c) for c in pt) for pt in rats)
    return LabeledQuery(q, rats_t, truth, provenance, witness=witness, margin=margin, tag=tag)


# ---------------------------------------------------------------------------
# parsing and writing

_TRUTH_TOKENS = {"0": False, "1": True, "false": False, "true": True}


def _open_maybe_gz(source, mode: str):
    p = Path(source)
    if p.suffix == ".gz":
        return gzip.open(p, mode + "t", encoding="ascii", newline="")
    return open(p, mode, encoding="ascii", newline="")


def parse_queries(source, kind: QueryKind) -> list[LabeledQuery]:
    """Read labeled queries from a CSV path or text stream.

    ``source`` may be a path (``.gz`` accepted) or an open text stream.
    The format carries no kind marker, so ``kind`` applies to every
    record.  Rationals are reconstructed exactly from the digit strings;
    the binary64 coordinates are their round-to-nearest images.  Raises
    DatasetError, naming the 1-based row, for a malformed integer, zero
    denominator, wrong field count, truth disagreement inside a record,
    or a row count that is not a multiple of 8.
    """
    kind = QueryKind(kind)
    if isinstance(source, (str, Path)):
        with _open_maybe_gz(source, "r") as fh:
            return parse_queries(fh, kind)
    rows = _parse_rows(source)
    if len(rows) % 8 != 0:
        raise DatasetError(f"row count {len(rows)} is not a multiple of 8")
    out = []
    for base in range(0, len(rows), 8):
        pts = []
        truth = rows[base][1]
        for off in range(8):
            coords, t = rows[base + off]
            if t is not truth:
                raise DatasetError(f"row {base + off + 1}: truth differs within record")
            pts.append(coords)
        try:
            out.append(_labeled(kind, pts, truth, Provenance.FILE))
        except (DatasetError, ValueError) as exc:
            raise DatasetError(f"rows {base + 1}-{base + 8}: {exc}") from None
    return out


def _parse_rows(stream: TextIO):
    rows = []
    for idx, row in enumerate(csv.reader(stream), start=1):
        if not row:
            continue
        if len(row) != 7:
            raise DatasetError(f"row {idx}: expected 7 fields, got {len(row)}")
        fields = [f.strip() for f in row]
        token = fields[6].lower()
        if token not in _TRUTH_TOKENS:
            raise DatasetError(f"row {idx}: bad truth value {fields[6]!r}")
        try:
            ints = [int(f) for f in fields[:6]]
        except ValueError as exc:
            raise DatasetError(f"row {idx}: malformed integer ({exc})") from None
        coords = []
        for ax in range(3):
            num, den = ints[2 * ax], ints[2 * ax + 1]
            if den == 0:
                raise DatasetError(f"row {idx}: zero denominator")
            coords.append(Rat(num, den))
        rows.append((tuple(coords), _TRUTH_TOKENS[token]))
    return rows


def write_queries(queries: Iterable[LabeledQuery], dest) -> None:
    """Write labeled queries in canonical form.

    Fractions are reduced with positive denominators (so -0.0 collapses
    to 0), truth is written as 0/1 on every row, rows end with a bare
    newline.  ``dest`` may be a path (``.gz`` compresses) or a text
    stream.  Parsing canonical output and rewriting it is
    byte-identical.
    """
    if isinstance(dest, (str, Path)):
        with _open_maybe_gz(dest, "w") as fh:
            write_queries(queries, fh)
        return
    w = csv.writer(dest, lineterminator="\n")
    for lq in queries:
        t = "1" if lq.truth else "0"
        for pt in lq.rationals:
            row = []
            for c in pt:
                r = to_rat(c)
                row.append(str(r.numerator))
                row.append(str(r.denominator))
            row.append(t)
            w.writerow(row)


# ---------------------------------------------------------------------------
# handcrafted battery

_R = Rat
_HALF = _R(1, 2)

_UNIT_TRI = ((0, 0, 0), (1, 0, 0), (0, 1, 0))


def _vf(pts0, pts1):
    return QueryKind.VERTEX_FACE, tuple(pts0), tuple(pts1)


def _ee(pts0, pts1):
    return QueryKind.EDGE_EDGE, tuple(pts0), tuple(pts1)


def _ratpts(pts):
    return tuple(tuple(to_rat(c) for c in pt) for pt in pts)


def _constructed(kind, pts0, pts1, witness, tag):
    rats = _ratpts(tuple(pts0) + tuple(pts1))
    lq = _labeled(kind, rats, True, Provenance.CONSTRUCTED,
                  witness=tuple(to_rat(w) for w in witness), tag=tag)
    F = rational_eval_F(lq.query, *lq.witness)
    assert all(x == 0 for x in F), (tag, [str(x) for x in F])
    return lq


def _certified(kind, pts0, pts1, tag, **kw):
    rats = _ratpts(tuple(pts0) + tuple(pts1))
    lq0 = _labeled(kind, rats, False, Provenance.ORACLE_CERTIFIED, margin=0, tag=tag)
    verdict = certify_no_root(lq0.query, **kw)
    if isinstance(verdict, NoRoot):
        return _labeled(kind, rats, False, Provenance.ORACLE_CERTIFIED,
                        margin=verdict.margin, tag=tag)
    assert isinstance(verdict, Root), (tag, verdict)
    return _labeled(kind, rats, True, Provenance.ORACLE_CERTIFIED,
                    witness=verdict.witness, tag=tag)


def gen_handcrafted() -> list[LabeledQuery]:
    """Fixed battery of degenerate, boundary and stress cases.

    Every label is re-established at generation time: positives by an
    exact rational witness evaluation, negatives by a fresh oracle
    certificate.  Tags name the cases; the ``coplanar`` tags form the
    subset on which cubic-based solvers go degenerate (their coplanarity
    polynomial vanishes identically).
    """
    out = []

    # straight vertical drop onto the unit triangle, root (1/2, 5/16, 5/16)
    out.append(_constructed(*_vf(
        [(5 / 16, 5 / 16, 1), *_UNIT_TRI],
        [(5 / 16, 5 / 16, -1), *_UNIT_TRI]),
        (_HALF, _R(5, 16), _R(5, 16)), "vf_vertical"))

    # same drop stopped one unit above: trivially separated
    out.append(_certified(*_vf(
        [(5 / 16, 5 / 16, 2), *_UNIT_TRI],
        [(5 / 16, 5 / 16, 1), *_UNIT_TRI]),
        "vf_offset_miss"))

    # perpendicular edges crossing at the origin at t = 1/2
    out.append(_constructed(*_ee(
        [(-1, 0, 1), (1, 0, 1), (0, -1, 0), (0, 1, 0)],
        [(-1, 0, -1), (1, 0, -1), (0, -1, 0), (0, 1, 0)]),
        (_HALF, _HALF, _HALF), "ee_crossing"))

    # triangle flips through a stationary point; the swept prism has a
    # pinched bilinear face that some root-parity methods miss
    rho = _R(0.1)
    out.append(_constructed(*_vf(
        [(0.1, 0.1, 0.1), (0, 0, 1), (1, 0, 1), (0, 1, 1)],
        [(0.1, 0.1, 0.1), (0, 0, 0), (0, 1, 0), (1, 0, 0)]),
        (1 - rho, rho, rho), "vf_hourglass"))

    # twisting triangle whose coplanarity cubic has an inflection inside
    # [0, 1]; the plane crossings never contain the point
    infl = _certified(*_vf(
        [(1, 1, 0), (0, 0, 5), (2, 0, 2), (0, 1, 0)],
        [(1, 1, 0), (0, 0, -1), (0, 0, -2), (0, 7, 0)]),
        "vf_inflection")
    assert not infl.truth
    out.append(infl)

    # everything coplanar throughout; a triangle edge sweeps across the
    # point in-plane, so the cubic vanishes identically
    d57, d28 = _R(0.57), _R(0.28)
    tstar = (d57 - _HALF) / (d57 - d28)
    out.append(_constructed(*_vf(
        [(1, 0.5, 1), (0, 0.57, 1), (1, 0.57, 1), (1, 1.57, 1)],
        [(1, 0.5, 1), (0, 0.28, 1), (1, 0.28, 1), (1, 1.28, 1)]),
        (tstar, _R(1), _R(0)), "vf_coplanar_slide"))

    # in-plane point sliding into a stationary triangle
    out.append(_constructed(*_vf(
        [(2, 0.25, 0), *_UNIT_TRI],
        [(-1, 0.25, 0), *_UNIT_TRI]),
        (_R(5, 12), _R(3, 4), _R(1, 4)), "vf_coplanar_inplane"))

    # collinear edges sliding into overlap
    out.append(_constructed(*_ee(
        [(-2, 0, 0), (-1, 0, 0), (0, 0, 0), (1, 0, 0)],
        [(1, 0, 0), (2, 0, 0), (0, 0, 0), (1, 0, 0)]),
        (_R(1, 3), _R(1), _R(0)), "ee_coplanar_collinear"))

    # point hits a triangle vertex (domain corner witness)
    out.append(_constructed(*_vf(
        [(0, 0, 1), *_UNIT_TRI],
        [(0, 0, -1), *_UNIT_TRI]),
        (_HALF, _R(0), _R(0)), "vf_point_point"))

    # edge endpoint hits an edge endpoint
    out.append(_constructed(*_ee(
        [(0, 0, 1), (0, -1, 1), (0, 0, 0), (1, 0, 0)],
        [(0, 0, -1), (0, -1, -1), (0, 0, 0), (1, 0, 0)]),
        (_HALF, _R(0), _R(0)), "ee_point_point"))

    # approaches that stop a hair short; 1e-16 sits below the filter
    # floor, so conservative solvers report it (a designed false
    # positive), while the exact label stays negative
    for g in (1e-8, 1e-12, 1e-16):
        out.append(_certified(*_vf(
            [(5 / 16, 5 / 16, 1), *_UNIT_TRI],
            [(5 / 16, 5 / 16, g), *_UNIT_TRI]),
            f"vf_nearmiss_{g:.0e}"))

    out.append(_certified(*_ee(
        [(-1, 0, 1), (1, 0, 1), (0, -1, 0), (0, 1, 0)],
        [(-1, 0, 1e-10), (1, 0, 1e-10), (0, -1, 0), (0, 1, 0)]),
        "ee_nearmiss_1e-10"))

    # roots on the time boundary
    out.append(_constructed(*_vf(
        [(5 / 16, 5 / 16, 1), *_UNIT_TRI],
        [(5 / 16, 5 / 16, 0), *_UNIT_TRI]),
        (_R(1), _R(5, 16), _R(5, 16)), "vf_t1_boundary"))
    out.append(_constructed(*_vf(
        [(1 / 4, 1 / 4, 0), *_UNIT_TRI],
        [(1 / 4, 1 / 4, 1), *_UNIT_TRI]),
        (_R(0), _R(1, 4), _R(1, 4)), "vf_t0_touch"))

    # planted first root at t = 1/4 with one, or two, later plane
    # crossings: the coplanarity cubics factor exactly over {1/4, 1/2}
    # and {1/4, 1/2, 3/4}
    two = _constructed(*_vf(
        [(0.25, 0.25, 5 / 32), (0, 0, 0), (1, 0, 0), (0, 1, 1.25)],
        [(1.75, 0.75, 2.09375), (0, 0, 0), (1, 0, 2), (1, 1, 0.25)]),
        (_R(1, 4), _R(17, 32), _R(12, 32)), "vf_two_root")
    assert [iv for iv in isolate_cubic_roots(*coplanarity_cubic(two.query))] == \
        [(_R(1, 4), _R(1, 4)), (_HALF, _HALF)]
    out.append(two)

    three = _constructed(*_vf(
        [(0.25, 0.25, 5 / 32), (0, 0, 0), (1, 0, 0), (0, 1, 1)],
        [(1.75, 0.75, 43 / 32), (0, 0, 0), (1, 0, 2), (1, 1, -1)]),
        (_R(1, 4), _R(17, 32), _R(12, 32)), "vf_three_root")
    assert [iv for iv in isolate_cubic_roots(*coplanarity_cubic(three.query))] == \
        [(_R(1, 4), _R(1, 4)), (_HALF, _HALF), (_R(3, 4), _R(3, 4))]
    out.append(three)

    # the vertical drop again at 64x scale (filter bounds grow as the
    # cube of the coordinate magnitude)
    s = 64
    out.append(_constructed(*_vf(
        [(s * 5 / 16, s * 5 / 16, s), (0, 0, 0), (s, 0, 0), (0, s, 0)],
        [(s * 5 / 16, s * 5 / 16, -s), (0, 0, 0), (s, 0, 0), (0, s, 0)]),
        (_HALF, _R(5, 16), _R(5, 16)), "vf_scaled_64"))

    # drop onto a sliver triangle of height 2^-20
    sliver = ((0, 0, 0), (1, 0, 0), (0.5, 2 ** -20, 0))
    out.append(_constructed(*_vf(
        [(0.5, 2 ** -22, 1), *sliver],
        [(0.5, 2 ** -22, -1), *sliver]),
        (_HALF, _R(3, 8), _R(1, 4)), "vf_sliver"))

    return out


# ---------------------------------------------------------------------------
# random generation

_POSITIVE_FRACTION = {Profile.SIMULATION_LIKE: 0.004, Profile.ADVERSARIAL: 0.5}
_MIN_CERTIFIED_MARGIN = _R(1, 10 ** 9)

# (t, u, v) lattice: t on 32nds, u and v on 16ths
_VF_UV = [(u, v) for u in range(17) for v in range(17 - u)]
_EE_UV = [(u, v) for u in range(17) for v in range(17)]


def _dy(rng: random.Random, lo: float, hi: float, bits: int = 6) -> Rat:
    """Uniform dyadic draw from [lo, hi] on the 2^-bits grid."""
    scale = 1 << bits
    a, b = int(lo * scale), int(hi * scale)
    return _R(rng.randint(a, b), scale)


def _dyvec(rng: random.Random, lo: float, hi: float, bits: int = 6):
    return tuple(_dy(rng, lo, hi, bits) for _ in range(3))


def _endpoints(contact, velocity, tstar):
    """x0 = C - t* D and x1 = C + (1 - t*) D, all exact."""
    x0 = tuple(c - tstar * d for c, d in zip(contact, velocity))
    x1 = tuple(c + (1 - tstar) * d for c, d in zip(contact, velocity))
    return x0, x1


def _exact_floats(pts) -> bool:
    return all(float(c) == c for pt in pts for c in pt)


def _bary(c1, c2, c3, u, v):
    w = 1 - u - v
    return tuple(w * a + u * b + v * c for a, b, c in zip(c1, c2, c3))


def _pick_uv(rng: random.Random, kind: QueryKind, boundary: bool):
    table = _VF_UV if kind is QueryKind.VERTEX_FACE else _EE_UV
    if boundary:
        if kind is QueryKind.VERTEX_FACE:
            table = [(u, v) for u, v in table if u == 0 or v == 0 or u + v == 16]
        else:
            table = [(u, v) for u, v in table if u in (0, 16) or v in (0, 16)]
    u, v = table[rng.randrange(len(table))]
    return _R(u, 16), _R(v, 16)


def _gen_positive(rng: random.Random, kind: QueryKind, scale: int,
                  adversarial: bool) -> LabeledQuery:
    """Plant an exact root at a lattice (t*, u*, v*)."""
    boundary_t = adversarial and rng.random() < 0.10
    boundary_uv = adversarial and rng.random() < 0.15
    if boundary_t:
        tstar = _R(rng.choice((0, 1)))
    else:
        tstar = _R(rng.randint(1, 31), 32)
    u, v = _pick_uv(rng, kind, boundary_uv)
    s = scale
    speed = s  # velocity grid bound; displacement magnitudes ~ coordinate scale

    if kind is QueryKind.VERTEX_FACE:
        c1 = _dyvec(rng, -s, s)
        c2 = _dyvec(rng, -s, s)
        c3 = _dyvec(rng, -s, s)
        if adversarial and rng.random() < 0.10:
            # sliver: collapse v3 toward the v1-v2 midline
            c3 = tuple((a + b) / 2 + _R(rng.randint(-4, 4), 1 << 16)
                       for a, b in zip(c1, c2))
        cp = _bary(c1, c2, c3, u, v)
        contacts = [cp, c1, c2, c3]
    else:
        a1 = _dyvec(rng, -s, s)
        da = _dyvec(rng, -s, s)
        b_dir = _dyvec(rng, -s, s)
        a2 = tuple(x + d for x, d in zip(a1, da))
        cp = tuple((1 - u) * x + u * y for x, y in zip(a1, a2))
        b1 = tuple(c - v * d for c, d in zip(cp, b_dir))
        b2 = tuple(x + d for x, d in zip(b1, b_dir))
        contacts = [a1, a2, b1, b2]

    pts0, pts1 = [], []
    for c in contacts:
        d = _dyvec(rng, -speed, speed)
        x0, x1 = _endpoints(c, d, tstar)
        pts0.append(x0)
        pts1.append(x1)
    rats = tuple(pts0) + tuple(pts1)
    assert _exact_floats(rats)
    lq = _labeled(kind, rats, True, Provenance.CONSTRUCTED,
                  witness=(tstar, u, v), tag="random_positive")
    F = rational_eval_F(lq.query, tstar, u, v)
    assert all(x == 0 for x in F)
    return lq


def _rng_loguniform(rng: random.Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def _base_points(rng: random.Random, kind: QueryKind, scale: int):
    """Stationary-primitive points: 3 for a triangle, 2 for an edge."""
    n = 3 if kind is QueryKind.VERTEX_FACE else 2
    return [_dyvec(rng, -scale, scale) for _ in range(n)]


def _slab_negative(rng: random.Random, kind: QueryKind, scale: int,
                   g_lo: float, g_hi: float, quiet: bool):
    """Separated along one axis for the whole step; the gap never closes.

    All moving-primitive coordinates on the chosen axis stay at least
    ``gap`` above every base coordinate at both endpoints, so one hull
    evaluation already proves the separation.
    """
    axis = rng.randrange(3)
    s = scale
    gap = to_rat(_rng_loguniform(rng, g_lo, g_hi) * s)
    jig = 0.3 * float(gap) if quiet else 0.2 * s

    base0 = _base_points(rng, kind, s)
    base1 = [tuple(c + _dy(rng, -jig, jig, 12) for c in pt) for pt in base0]
    top = max(pt[axis] for pt in base0 + base1)

    def mover():
        pt = list(_dyvec(rng, -s, s))
        pt[axis] = top + gap + to_rat(rng.uniform(0.0, 1.0) * s)
        return tuple(pt)

    nmove = 1 if kind is QueryKind.VERTEX_FACE else 2
    m0 = [mover() for _ in range(nmove)]
    m1 = [mover() for _ in range(nmove)]
    if kind is QueryKind.VERTEX_FACE:
        return (m0[0], *base0) + (m1[0], *base1)
    return (m0[0], m0[1], base0[0], base0[1]) + (m1[0], m1[1], base1[0], base1[1])


def _approach_negative(rng: random.Random, kind: QueryKind, scale: int,
                       g_lo: float = 1e-2, g_hi: float = 1e-1):
    """Head-on approach along z that stops short of a remaining gap."""
    s = scale
    gap = to_rat(_rng_loguniform(rng, g_lo, g_hi) * s)
    start = to_rat(rng.uniform(0.3, 1.0) * s)
    base = _base_points(rng, kind, s)
    top = max(pt[2] for pt in base)
    ax, ay = _dy(rng, -s, s), _dy(rng, -s, s)
    drift = (_dy(rng, -s / 8, s / 8, 10), _dy(rng, -s / 8, s / 8, 10))
    pA = (ax, ay, top + start)
    pB = (ax + drift[0], ay + drift[1], top + gap)
    if kind is QueryKind.VERTEX_FACE:
        return (pA, *base) + (pB, *base)
    off = (_dy(rng, -s, s), _dy(rng, -s, s), _R(0))
    pA2 = tuple(a + b for a, b in zip(pA, off))
    pB2 = tuple(a + b for a, b in zip(pB, off))
    return (pA, pA2, base[0], base[1]) + (pB, pB2, base[0], base[1])


def _crossing_miss(rng: random.Random, kind: QueryKind, scale: int,
                   m_lo: float = 2e-2, m_hi: float = 0.3):
    """Sweeps past the base primitive: misses in x early, in z late.

    The base sits in a thin z-slab around zc.  The mover's x stays at
    least ``m`` beyond the base until t = 1/2 and its z has dropped far
    below the slab before the x margin can close, so no single axis
    separates the whole domain but a couple of splits certify the miss.
    """
    s = scale
    m = _rng_loguniform(rng, m_lo, m_hi) * s
    zc = _dy(rng, -s, s)
    base = []
    for _ in range(3 if kind is QueryKind.VERTEX_FACE else 2):
        x, y = _dy(rng, -s, s), _dy(rng, -s, s)
        base.append((x, y, zc + _dy(rng, -s / 16, s / 16, 10)))
    xmax = max(pt[0] for pt in base)
    w = to_rat(rng.uniform(0.4, 0.8) * s)
    y = _dy(rng, -s, s)
    pA = (xmax + to_rat(m) + w, y, zc + to_rat(s) / 4)
    pB = (xmax + to_rat(m) - w, y, zc - 7 * to_rat(s) / 4)
    if kind is QueryKind.VERTEX_FACE:
        return (pA, *base) + (pB, *base)
    off = (_dy(rng, 0, s / 4), _dy(rng, -s, s), _R(0))
    pA2 = tuple(a + b for a, b in zip(pA, off))
    pB2 = tuple(a + b for a, b in zip(pB, off))
    return (pA, pA2, base[0], base[1]) + (pB, pB2, base[0], base[1])


def gen_random(
    n: int,
    seed: int,
    profile: Profile,
    positive_fraction: float | None = None,
    kind: QueryKind | None = None,
) -> tuple[list[LabeledQuery], int]:
    """Deterministic labeled random set; returns (queries, dropped).

    Simulation-like sets are unit-scale and overwhelmingly non-colliding,
    matching what a broad phase feeds a narrow phase (the positive
    fraction defaults to 0.4%).  Adversarial sets are half planted
    collisions and half certified misses at coordinate scales {1, 8, 64},
    with sliver triangles, domain-boundary witnesses and tight gaps
    mixed in.  ``positive_fraction`` overrides the default mix (1.0
    builds pure planted-root corpora with no oracle cost).  ``kind``
    restricts the set to one query kind; the default draws both evenly.
    Negatives whose certificate comes back undetermined are dropped and
    counted, never emitted; a certificate that instead finds a root
    flips the entry to a certified positive.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    profile = Profile(profile)
    frac = _POSITIVE_FRACTION[profile] if positive_fraction is None else positive_fraction
    if not 0.0 <= frac <= 1.0:
        raise ValueError("positive_fraction must be in [0, 1]")
    fixed_kind = None if kind is None else QueryKind(kind)
    rng = random.Random(seed)
    adversarial = profile is Profile.ADVERSARIAL
    out: list[LabeledQuery] = []
    dropped = 0
    while len(out) < n:
        coin = QueryKind.VERTEX_FACE if rng.random() < 0.5 else QueryKind.EDGE_EDGE
        kind = coin if fixed_kind is None else fixed_kind
        scale = rng.choice((1, 8, 64)) if adversarial else 1
        if rng.random() < frac:
            out.append(_gen_positive(rng, kind, scale, adversarial))
            continue
        r = rng.random()
        if adversarial:
            if r < 0.50:
                rats = _slab_negative(rng, kind, scale, 1e-6, 1e-2, quiet=False)
            elif r < 0.80:
                rats = _approach_negative(rng, kind, scale, g_lo=1e-6, g_hi=1e-3)
            else:
                rats = _crossing_miss(rng, kind, scale, m_lo=1e-4, m_hi=1e-2)
            kw = {"depth_cap": 48, "max_boxes": 5000}
        else:
            if r < 0.70:
                rats = _slab_negative(rng, kind, scale, 0.05, 0.5, quiet=True)
            elif r < 0.90:
                rats = _approach_negative(rng, kind, scale)
            else:
                rats = _crossing_miss(rng, kind, scale)
            kw = {"depth_cap": 40, "max_boxes": 2000}
        lq0 = _labeled(kind, rats, False, Provenance.ORACLE_CERTIFIED, margin=0,
                       tag="random_negative")
        verdict = certify_no_root(lq0.query, **kw)
        if isinstance(verdict, Undetermined):
            dropped += 1
            continue
        if isinstance(verdict, Root):
            out.append(_labeled(kind, rats, True, Provenance.ORACLE_CERTIFIED,
                                witness=verdict.witness, tag="random_relabel"))
            continue
        out.append(_labeled(kind, rats, False, Provenance.ORACLE_CERTIFIED,
                            margin=verdict.margin, tag="random_negative"))
    return out, dropped
