"""Exact discrepancy measures in the square and on the sphere.

Star and extreme discrepancies are evaluated exactly by enumerating the
critical grid spanned by the point coordinates; the spherical-rectangle
variants recover square coordinates geometrically and reuse the planar
enumeration, which matches the planar value of the pre-images whenever the
lift is collision-free.  The cap L2 discrepancy comes in closed form from
the pairwise distance sum via the invariance identity
S/N^2 + 4 D2^2 = 4/3.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .netgen import UnitSquarePointSet
from .sphere import SpherePointSet, square_coords_array

__all__ = [
    "Kind",
    "DiscrepancyValue",
    "DiscrepancyBracket",
    "star_discrepancy",
    "extreme_discrepancy",
    "sphere_rect_star_discrepancy",
    "sphere_rect_extreme_discrepancy",
    "sum_of_distances",
    "cap_l2_discrepancy",
    "cui_freeden_discrepancy",
    "roth_star_lower_bound",
    "net_extreme_upper_bound",
]

#: Default largest N for which the extreme discrepancy is computed exactly.
EXTREME_EXACT_LIMIT = 512

#: Radicands down to this value are treated as accumulation noise and clamped.
RADICAND_TOL = -1e-12


class Kind(enum.Enum):
    PLANAR_STAR = "planar_star"
    PLANAR_EXTREME = "planar_extreme"
    SPHERE_RECT_STAR = "sphere_rect_star"
    SPHERE_RECT_EXTREME = "sphere_rect_extreme"
    CAP_L2 = "cap_L2"
    CUI_FREEDEN = "cui_freeden"


@dataclass(frozen=True)
class DiscrepancyValue:
    kind: Kind
    value: float
    exact: bool


@dataclass(frozen=True)
class DiscrepancyBracket:
    """Enclosure [lower, upper] used when exact enumeration is too costly."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError("need 0 <= lower <= upper")


def _clamped_sqrt(radicand: float) -> float:
    if radicand < RADICAND_TOL:
        raise ValueError(f"radicand {radicand} is negative beyond rounding noise")
    return math.sqrt(max(radicand, 0.0))


# ----------------------------------------------------------------------
# Exact planar enumeration
# ----------------------------------------------------------------------


def _star_value(x: np.ndarray, y: np.ndarray) -> float:
    """Exact star discrepancy of points (x_k, y_k) in [0,1)^2.

    Enumerates the critical grid (x-values + {1}) x (y-values + {1}); at each
    node the too-few-points side uses the open count #{x < a, y < c} and the
    too-many side the closed count #{x <= a, y <= c}.
    """
    n = x.size
    vx, ix = np.unique(x, return_inverse=True)
    vy, iy = np.unique(y, return_inverse=True)
    kx, ky = vx.size, vy.size

    order = np.argsort(ix, kind="stable")
    iy_by_group = iy[order]
    group_sizes = np.bincount(ix, minlength=kx)
    starts = np.concatenate(([0], np.cumsum(group_sizes)))

    hist = np.zeros(ky, dtype=np.int64)
    prev_prefix = np.zeros(ky + 1, dtype=np.float64)  # counts for x < current a
    best = 0.0
    for i in range(kx):
        grp = iy_by_group[starts[i] : starts[i + 1]]
        np.add.at(hist, grp, 1)
        prefix = np.concatenate(([0.0], np.cumsum(hist)))
        a = vx[i]
        over = prefix[1:] / n - a * vy
        under = a * vy - prev_prefix[:-1] / n
        best = max(
            best,
            float(over.max()),
            float(under.max()),
            prefix[-1] / n - a,
            a - prev_prefix[-1] / n,
        )
        prev_prefix = prefix
    # a = 1 column: every point satisfies x < 1 <= a
    over = prev_prefix[1:] / n - vy
    under = vy - prev_prefix[:-1] / n
    return max(best, float(over.max()), float(under.max()), 1.0 - prev_prefix[-1] / n)


def _extreme_value(x: np.ndarray, y: np.ndarray) -> float:
    """Exact extreme discrepancy over all axis-parallel boxes.

    Candidate boxes shrink onto point coordinates (closed on both ends, the
    crowded side) or expand to just exclude them (open on both ends, the
    empty side).  For each y-band the optimal x-range is found with a
    prefix-maximum sweep, so the total cost is O(#bands * N).
    """
    n = x.size
    vx, ix = np.unique(x, return_inverse=True)
    vy, iy = np.unique(y, return_inverse=True)
    kx, ky = vx.size, vy.size

    mass = np.zeros((ky, kx), dtype=np.int64)
    np.add.at(mass, (iy, ix), 1)
    # tp[q, i] = #{yrank < q, xrank < i}, shape (ky+1, kx+1)
    tp = np.zeros((ky + 1, kx + 1), dtype=np.float64)
    np.cumsum(np.cumsum(mass, axis=0), axis=1, out=tp[1:, 1:])

    best = 0.0

    # Crowded side: boxes [vx_i, vx_j] x [vy_p, vy_q], both axes closed.
    for p in range(ky):
        in_band_le = (tp[1:, 1:] - tp[p, 1:][None, :]) / n  # [q, j]: rank p..q, x <= vx_j
        in_band_lt = (tp[1:, :-1] - tp[p, :-1][None, :]) / n  # [q, i]: rank p..q, x < vx_i
        height = (vy - vy[p])[:, None]
        gain = in_band_le - height * vx[None, :]
        start = np.maximum.accumulate(height * vx[None, :] - in_band_lt, axis=1)
        cand = gain + start
        if p:
            cand[:p, :] = -np.inf
        best = max(best, float(cand.max()))

    # Empty side: boxes (c1, c2) x (a1, a2), all edges just past a coordinate
    # (or at the domain boundary).  Index 0 of the lower grids means the
    # boundary 0; the last index of the upper grids means the boundary 1.
    low_x = np.concatenate(([0.0], vx))  # a1 candidates, strict
    high_x = np.concatenate((vx, [1.0]))  # a2 candidates, strict
    low_y = np.concatenate(([0.0], vy))
    high_y = np.concatenate((vy, [1.0]))
    for p in range(ky + 1):
        inside_lt = (tp - tp[p, :][None, :]) / n  # [q, j]: rank p..q-1, x < high area j
        height = (high_y - low_y[p])[:, None]
        gain = height * high_x[None, :] - inside_lt
        start = np.maximum.accumulate(inside_lt - height * low_x[None, :], axis=1)
        cand = gain + start
        best = max(best, float(cand.max()))

    return max(best, 0.0)


# ----------------------------------------------------------------------
# Public planar and spherical wrappers
# ----------------------------------------------------------------------


def star_discrepancy(points: UnitSquarePointSet) -> DiscrepancyValue:
    """Exact star discrepancy of a unit-square point set."""
    xy = points.coords
    return DiscrepancyValue(Kind.PLANAR_STAR, _star_value(xy[:, 0], xy[:, 1]), True)


def extreme_discrepancy(
    points: UnitSquarePointSet, exact_limit: int = EXTREME_EXACT_LIMIT
) -> DiscrepancyValue | DiscrepancyBracket:
    """Extreme discrepancy: exact for N <= exact_limit, else the [D*, 4 D*] bracket."""
    xy = points.coords
    if len(points) <= exact_limit:
        return DiscrepancyValue(
            Kind.PLANAR_EXTREME, _extreme_value(xy[:, 0], xy[:, 1]), True
        )
    star = _star_value(xy[:, 0], xy[:, 1])
    return DiscrepancyBracket(star, 4.0 * star)


def sphere_rect_star_discrepancy(sphere_points: SpherePointSet) -> DiscrepancyValue:
    """Spherical-rectangle star discrepancy, computed geometrically.

    Square coordinates are recovered from the unit vectors by inverse
    trigonometry and fed to the planar enumeration; this equals the planar
    star discrepancy of the pre-images whenever no point collapses onto a
    pole with a nonzero azimuth.
    """
    tc = square_coords_array(sphere_points)
    return DiscrepancyValue(
        Kind.SPHERE_RECT_STAR, _star_value(tc[:, 0], tc[:, 1]), True
    )


def sphere_rect_extreme_discrepancy(
    sphere_points: SpherePointSet, exact_limit: int = EXTREME_EXACT_LIMIT
) -> DiscrepancyValue | DiscrepancyBracket:
    """Extreme spherical-rectangle discrepancy via recovered coordinates."""
    tc = square_coords_array(sphere_points)
    if len(sphere_points) <= exact_limit:
        return DiscrepancyValue(
            Kind.SPHERE_RECT_EXTREME, _extreme_value(tc[:, 0], tc[:, 1]), True
        )
    star = _star_value(tc[:, 0], tc[:, 1])
    return DiscrepancyBracket(star, 4.0 * star)


# ----------------------------------------------------------------------
# Distance-sum based measures
# ----------------------------------------------------------------------

_TILE = 1024


def _pairwise_total(pts: np.ndarray, term) -> float:
    """Sum of term(distance) over all ordered pairs, deterministically.

    Tiles the pair matrix in a fixed order; per-tile reductions use numpy's
    pairwise summation and the tile totals are combined with math.fsum, so
    the result does not depend on threading or chunk boundaries.
    """
    n = pts.shape[0]
    partials = []
    for i0 in range(0, n, _TILE):
        bi = pts[i0 : i0 + _TILE]
        diff = bi[:, None, :] - bi[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        partials.append(float(term(dist).sum()))
        for j0 in range(i0 + _TILE, n, _TILE):
            bj = pts[j0 : j0 + _TILE]
            diff = bi[:, None, :] - bj[None, :, :]
            dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
            partials.append(2.0 * float(term(dist).sum()))
    return math.fsum(partials)


def sum_of_distances(sphere_points: SpherePointSet) -> float:
    """Sum of Euclidean distances over all ordered pairs (diagonal included)."""
    return _pairwise_total(sphere_points.points, lambda d: d)


def cap_l2_discrepancy(sphere_points: SpherePointSet) -> DiscrepancyValue:
    """Spherical-cap L2 discrepancy in closed form.

    D2 = sqrt((4/3 - S/N^2) / 4) where S is the ordered pairwise distance
    sum; the identity holds exactly for the defining cap average, so the
    value is marked exact.  Tiny negative radicands from accumulation are
    clamped to zero, anything worse raises.
    """
    n = len(sphere_points)
    s = sum_of_distances(sphere_points)
    value = _clamped_sqrt((4.0 / 3.0 - s / (n * n)) / 4.0)
    return DiscrepancyValue(Kind.CAP_L2, value, True)


def cui_freeden_discrepancy(
    sphere_points: SpherePointSet, log_convention: str = "log-of-square"
) -> DiscrepancyValue:
    """Generalized discrepancy with the logarithmic kernel of order 3/2.

    4 pi D^2 = 1 - (1/N^2) * sum over ordered pairs of the log term.  The
    printed source formula "log(1 + d/2)^2" is read as the log of the
    squared argument, i.e. 2 log(1 + d/2) (``log_convention="log-of-square"``,
    the reading consistent with the kernel 2 [1 - log(1 + d/2)] and a
    nonnegative radicand); pass ``"square-of-log"`` for the other reading.
    """
    if log_convention == "log-of-square":
        term = lambda d: 2.0 * np.log1p(d / 2.0)
    elif log_convention == "square-of-log":
        term = lambda d: np.log1p(d / 2.0) ** 2
    else:
        raise ValueError(f"unknown log convention: {log_convention!r}")
    n = len(sphere_points)
    total = _pairwise_total(sphere_points.points, term)
    value = _clamped_sqrt((1.0 - total / (n * n)) / (4.0 * math.pi))
    return DiscrepancyValue(Kind.CUI_FREEDEN, value, True)


# ----------------------------------------------------------------------
# Checkable bounds
# ----------------------------------------------------------------------


def roth_star_lower_bound(n: int) -> float:
    """Universal lower bound (floor(log2 N) + 3) / (2^8 N) on the star discrepancy."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (math.floor(math.log2(n)) + 3) / (256.0 * n)


def net_extreme_upper_bound(b: int, m: int) -> float:
    """Upper bound on the extreme spherical-rectangle discrepancy of a lifted net."""
    bm = float(b) ** m
    return (
        (b * b / (b + 1.0)) * m / bm
        + (9.0 + 1.0 / b) / bm
        + (2.0 * b - 1.0 - (4.0 * b + 3.0) / (b + 1.0) ** 2) / (bm * bm)
    )
