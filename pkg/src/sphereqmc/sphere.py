"""Area-preserving lift from the unit square to the unit sphere.

Points on S^2 are addressed in scaled spherical coordinates: an azimuth
fraction theta in [0,1) and a polar fraction phi in [0,1].  The cylindrical
equal-area map sends axis-parallel rectangles of the square to zonal
spherical rectangles of the same normalized area, which is what makes the
square and sphere discrepancies coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .netgen import UnitSquarePointSet

__all__ = [
    "SpherePointSet",
    "SphericalRectangle",
    "sphere_from_angles",
    "equal_area_lift",
    "lift",
    "square_coords",
    "square_coords_array",
]

#: Tolerance on the unit norm of analytically constructed sphere points.
UNIT_NORM_TOL = 1e-12

#: Squared sine of the polar exclusion zone: below this, azimuth is set to 0.
_POLE_EPS_SQ = 1e-18


@dataclass(frozen=True, eq=False)
class SpherePointSet:
    """N unit vectors, optionally keeping the square points they came from."""

    points: np.ndarray
    preimages: UnitSquarePointSet | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 1:
            raise ValueError("points must be a non-empty (N, 3) array")
        norms_sq = np.einsum("ij,ij->i", pts, pts)
        if np.max(np.abs(norms_sq - 1.0)) > 3 * UNIT_NORM_TOL:
            raise ValueError("points must lie on the unit sphere")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.preimages is not None and len(self.preimages) != pts.shape[0]:
            raise ValueError("preimages must match points one to one")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class SphericalRectangle:
    """Zonal region between two meridians and two parallels, scaled coordinates."""

    theta1: float
    theta2: float
    phi1: float
    phi2: float

    def __post_init__(self):
        if not (0.0 <= self.theta1 < self.theta2 <= 1.0):
            raise ValueError("need 0 <= theta1 < theta2 <= 1")
        if not (0.0 <= self.phi1 < self.phi2 <= 1.0):
            raise ValueError("need 0 <= phi1 < phi2 <= 1")

    def area(self) -> float:
        """Normalized area: (theta2-theta1) * (cos(pi phi1) - cos(pi phi2)) / 2."""
        return (
            (self.theta2 - self.theta1)
            * (math.cos(math.pi * self.phi1) - math.cos(math.pi * self.phi2))
            / 2.0
        )

    def contains(self, p: np.ndarray) -> bool:
        """Half-open membership test from the point's recovered coordinates.

        Works geometrically (via inverse trigonometry on the unit vector),
        never from stored pre-images.  The north pole recovers as (0, 0) and
        so lies in every rectangle anchored at theta1 = phi1 = 0; the south
        pole has phi = 1 and lies in none.
        """
        theta, x2 = square_coords(p)
        phi = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * x2))) / math.pi
        return (self.theta1 <= theta < self.theta2) and (
            self.phi1 <= phi < self.phi2
        )


def sphere_from_angles(theta: float, phi: float) -> np.ndarray:
    """Unit vector at azimuth fraction theta in [0,1) and polar fraction phi in [0,1]."""
    if not (0.0 <= theta < 1.0):
        raise ValueError("theta must lie in [0, 1)")
    if not (0.0 <= phi <= 1.0):
        raise ValueError("phi must lie in [0, 1]")
    s = math.sin(math.pi * phi)
    return np.array(
        [
            math.cos(2.0 * math.pi * theta) * s,
            math.sin(2.0 * math.pi * theta) * s,
            math.cos(math.pi * phi),
        ]
    )


def equal_area_lift(x1: float, x2: float) -> np.ndarray:
    """Cylindrical equal-area image of a unit-square point.

    Equals ``sphere_from_angles(x1, acos(1 - 2 x2) / pi)``; the third
    component is exactly 1 - 2 x2.
    """
    if not (0.0 <= x1 < 1.0):
        raise ValueError("x1 must lie in [0, 1)")
    if not (0.0 <= x2 <= 1.0):
        raise ValueError("x2 must lie in [0, 1]")
    s = 2.0 * math.sqrt(x2 - x2 * x2)
    return np.array(
        [
            math.cos(2.0 * math.pi * x1) * s,
            math.sin(2.0 * math.pi * x1) * s,
            1.0 - 2.0 * x2,
        ]
    )


def lift(points: UnitSquarePointSet) -> SpherePointSet:
    """Lift every square point to the sphere, keeping order and pre-images."""
    xy = points.coords
    x1 = xy[:, 0]
    x2 = xy[:, 1]
    s = 2.0 * np.sqrt(x2 - x2 * x2)
    pts = np.column_stack(
        (np.cos(2.0 * np.pi * x1) * s, np.sin(2.0 * np.pi * x1) * s, 1.0 - 2.0 * x2)
    )
    return SpherePointSet(pts, preimages=points)


def square_coords(p: np.ndarray) -> tuple[float, float]:
    """Square coordinates (x1, x2) whose equal-area lift is the unit vector p.

    x2 = (1 - z)/2 and x1 is the azimuth fraction in [0, 1); at the poles the
    azimuth is undefined and x1 = 0 by convention, matching the lift of (0,0)
    and (0,1).  Round-trips the lift to about 1e-9 for non-polar points.
    """
    x, y, z = float(p[0]), float(p[1]), float(p[2])
    norm_sq = x * x + y * y + z * z
    if abs(norm_sq - 1.0) > 2e-9:
        raise ValueError("point is not on the unit sphere")
    x2 = (1.0 - z) / 2.0
    x2 = min(1.0, max(0.0, x2))
    if x * x + y * y < _POLE_EPS_SQ:
        return 0.0, x2
    x1 = math.atan2(y, x) / (2.0 * math.pi)
    if x1 < 0.0:
        x1 += 1.0
    if x1 >= 1.0:
        x1 = 0.0
    return x1, x2


def square_coords_array(sphere_points: SpherePointSet) -> np.ndarray:
    """Vectorized :func:`square_coords` over a point set, shape (N, 2)."""
    pts = sphere_points.points
    x2 = np.clip((1.0 - pts[:, 2]) / 2.0, 0.0, 1.0)
    x1 = np.arctan2(pts[:, 1], pts[:, 0]) / (2.0 * np.pi)
    x1 = np.where(x1 < 0.0, x1 + 1.0, x1)
    x1 = np.where(x1 >= 1.0, 0.0, x1)
    polar = pts[:, 0] ** 2 + pts[:, 1] ** 2 < _POLE_EPS_SQ
    x1 = np.where(polar, 0.0, x1)
    return np.column_stack((x1, x2))
