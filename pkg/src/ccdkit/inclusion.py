"""Conservative box classification in floating point.

The bisection solver decides, for each (t, u, v) sub-box, whether the gap
function F can be zero there.  Because F is multilinear per axis, the
min/max of the 8 corner values is the exact range hull of F over the box
in real arithmetic.  In binary64 the corner values themselves are rounded,
so the hull is compared against a small error box instead of against zero:
the filter constants below bound the worst-case forward error of one
corner evaluation (in the fixed operation order of core.eval_F_*) by

    eps_axis = C * gamma_axis^3

where gamma_axis = max(1, largest |coordinate| on that axis over the 8
input points).  The cube appears because clamping gamma at 1 also makes it
an upper bound for t, u, v and all partial products in the evaluation.

A box is Disjoint only when its (separation-enlarged) hull lies strictly
outside the error box on some axis, so rounding can never discard a box
that contains a root: classification errs toward keeping boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .core import DomainBox, Query, QueryKind

# Forward-error coefficients for one corner evaluation, as multiples of
# gamma^3.  Separate sets for zero separation and for minimum-separation
# queries (whose classification adds d to the hull before comparing).
_VF_COEFF = 6.661338147750939e-15
_EE_COEFF = 6.217248937900877e-15
_VF_COEFF_MINSEP = 7.549516567451064e-15
_EE_COEFF_MINSEP = 7.105427357601002e-15


class BoxClass(IntEnum):
    """Classification values are stable; the compiled kernel uses them."""

    DISJOINT = 0
    INTERSECTS = 1
    CONTAINED = 2


@dataclass(frozen=True)
class InclusionBox:
    """Per-axis corner min/max of F over a domain box (the exact range hull
    in real arithmetic, corner-rounded in binary64)."""

    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def __post_init__(self):
        for l, h in zip(self.lo, self.hi):
            if not (l <= h):
                raise ValueError(f"InclusionBox axis with lo {l} > hi {h}")

    @property
    def widths(self) -> tuple[float, float, float]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @property
    def max_width(self) -> float:
        return max(self.widths)


@dataclass(frozen=True)
class FilterEps:
    """Per-axis classification tolerances, tied to the inputs they cover.

    Valid for any query of the given kind and separation whose coordinates
    stay within gamma (scene-wide reuse); eps = coeff * gamma^3 per axis.
    """

    kind: QueryKind
    gamma: tuple[float, float, float]
    eps: tuple[float, float, float]
    separation: float


def compute_gamma(coords) -> tuple[float, float, float]:
    """Per-axis magnitude bound max(1, max |x|) over an (n, 3) coordinate set."""
    a = np.asarray(coords, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != 3 or a.shape[0] == 0:
        raise ValueError("coords must be a non-empty (n, 3) array")
    if not np.all(np.isfinite(a)):
        raise ValueError("coordinates must be finite")
    m = np.abs(a).max(axis=0)
    return (max(1.0, float(m[0])), max(1.0, float(m[1])), max(1.0, float(m[2])))


def compute_filters(kind: QueryKind, gamma, separation: float = 0.0) -> FilterEps:
    """Filter tolerances for queries bounded by gamma.

    separation > 0 selects the minimum-separation coefficient set and
    requires separation < gamma on every axis (the error analysis folds the
    enlargement by d into the same gamma^3 envelope).
    """
    gx, gy, gz = (float(g) for g in gamma)
    if not (gx >= 1.0 and gy >= 1.0 and gz >= 1.0):
        raise ValueError("gamma components must be >= 1")
    separation = float(separation)
    if separation < 0.0 or not math.isfinite(separation):
        raise ValueError("separation must be >= 0 and finite")
    if separation > 0.0:
        if not (separation < gx and separation < gy and separation < gz):
            raise ValueError(
                f"separation {separation} must be smaller than every gamma {gamma}"
            )
        coeff = _VF_COEFF_MINSEP if kind == QueryKind.VERTEX_FACE else _EE_COEFF_MINSEP
    else:
        coeff = _VF_COEFF if kind == QueryKind.VERTEX_FACE else _EE_COEFF
    return FilterEps(
        kind=QueryKind(kind),
        gamma=(gx, gy, gz),
        eps=(coeff * (gx * gx * gx), coeff * (gy * gy * gy), coeff * (gz * gz * gz)),
        separation=separation,
    )


# Corner index layout: 4 * t_bit + 2 * u_bit + v_bit.
_T_SEL = np.array([0, 0, 0, 0, 1, 1, 1, 1], dtype=np.float64)
_U_SEL = np.array([0, 0, 1, 1, 0, 0, 1, 1], dtype=np.float64)
_V_SEL = np.array([0, 1, 0, 1, 0, 1, 0, 1], dtype=np.float64)


def _corner_values(q: Query, box: DomainBox) -> np.ndarray:
    """F at the 8 corners of the box as an (8, 3) array.

    One batched evaluation; elementwise operations replicate the scalar
    reference order exactly, so these values are bit-identical to looping
    core.eval_F_* over the corners.
    """
    s, e = q.as_arrays()
    t = np.where(_T_SEL == 1.0, box.t[1], box.t[0])
    u = np.where(_U_SEL == 1.0, box.u[1], box.u[0])
    v = np.where(_V_SEL == 1.0, box.v[1], box.v[0])
    P = (1.0 - t)[:, None, None] * s[None, :, :] + t[:, None, None] * e[None, :, :]
    if q.kind == QueryKind.VERTEX_FACE:
        F = P[:, 0, :] - (
            (1.0 - u - v)[:, None] * P[:, 1, :]
            + u[:, None] * P[:, 2, :]
            + v[:, None] * P[:, 3, :]
        )
    else:
        F = ((1.0 - u)[:, None] * P[:, 0, :] + u[:, None] * P[:, 1, :]) - (
            (1.0 - v)[:, None] * P[:, 2, :] + v[:, None] * P[:, 3, :]
        )
    return F


def box_inclusion(q: Query, box: DomainBox) -> InclusionBox:
    """Corner range hull of F over the box (per axis, all 8 corners)."""
    F = _corner_values(q, box)
    lo = F.min(axis=0)
    hi = F.max(axis=0)
    return InclusionBox(
        lo=(float(lo[0]), float(lo[1]), float(lo[2])),
        hi=(float(hi[0]), float(hi[1]), float(hi[2])),
    )


def classify_box(
    box: InclusionBox, eps: FilterEps, separation: float = 0.0
) -> BoxClass:
    """Conservative three-way test of a hull against the filter error box.

    The hull is enlarged by the separation distance on every axis, then
    compared against [-eps, eps]: strictly outside on some axis means
    Disjoint (checked axis by axis, x then y then z, returning at the
    first separated axis); inside on every axis means Contained; anything
    else Intersects.  Ties are never Disjoint.
    """
    if float(separation) != eps.separation:
        raise ValueError(
            f"separation {separation} does not match the filter set's "
            f"{eps.separation}; recompute filters for this separation"
        )
    d = eps.separation
    contained = True
    for i in range(3):
        lo = box.lo[i] - d
        hi = box.hi[i] + d
        e = eps.eps[i]
        if lo > e or hi < -e:
            return BoxClass.DISJOINT
        if not (lo >= -e and hi <= e):
            contained = False
    return BoxClass.CONTAINED if contained else BoxClass.INTERSECTS


def kappas(q: Query, t_max: float = 1.0) -> tuple[float, float, float]:
    """Per-dimension variation weights on the full domain.

    kappa_dim = 3 * max inf-norm difference of F between the corner pairs
    that differ only in that dimension.  Multilinearity makes the full
    domain's weights valid on every sub-box, so one computation per query
    drives all split decisions; a dimension with kappa 0 does not affect F
    and is never split.
    """
    full = DomainBox(t=(0.0, float(t_max)), u=(0.0, 1.0), v=(0.0, 1.0))
    F = _corner_values(q, full)
    out = []
    for stride in (4, 2, 1):  # t, u, v partner offsets in corner indexing
        best = 0.0
        for i in range(8):
            if i & stride:
                continue
            diff = float(np.abs(F[i + stride] - F[i]).max())
            if diff > best:
                best = diff
        out.append(3.0 * best)
    return (out[0], out[1], out[2])
