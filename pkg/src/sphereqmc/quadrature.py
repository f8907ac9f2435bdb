"""Equal-weight quadrature on the sphere and its worst-case error.

The squared worst-case error over the unit ball of the smoothness-3/2
space with kernel 8/3 - |y - z| is 4/3 minus the normalized pairwise
distance sum; by the invariance identity it also equals four times the
squared cap L2 discrepancy.  This module carries the kernel machinery
(Legendre recurrence, coefficient sequences, truncated kernel sums), a
seeded Monte Carlo baseline and the per-net quality reports used by the
convergence tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .discrepancy import (
    DiscrepancyBracket,
    cap_l2_discrepancy,
    cui_freeden_discrepancy,
    extreme_discrepancy,
    sphere_rect_extreme_discrepancy,
    sphere_rect_star_discrepancy,
    star_discrepancy,
    sum_of_distances,
)
from .netgen import (
    DigitalNetSpec,
    ScrambleState,
    UnitSquarePointSet,
    digital_net,
    identity_pascal_spec,
    scramble,
)
from .sphere import SpherePointSet, lift

__all__ = [
    "KernelCoefficients",
    "QualityReport",
    "distance_integral",
    "worst_case_error_sq",
    "quadrature_apply",
    "legendre_eval",
    "kernel_coefficients",
    "kernel_legendre_coefficients",
    "kernel_eval",
    "kernel_closed_form",
    "random_sphere_points",
    "compute_measure",
    "net_quality_report",
    "convergence_table",
    "WCE_STAR_BOUND",
]

#: Constant of the worst-case-error vs star-discrepancy bound: 24/sqrt(3) + 2 sqrt(2).
WCE_STAR_BOUND = 24.0 / math.sqrt(3.0) + 2.0 * math.sqrt(2.0)

#: Measure names accepted by reports, mapped in :func:`net_quality_report`.
MEASURES = (
    "wce",
    "star",
    "extreme",
    "sphere_star",
    "sphere_extreme",
    "cap_l2",
    "cui_freeden",
)


def distance_integral() -> float:
    """Mean distance between two uniform points on the sphere: exactly 4/3."""
    return 4.0 / 3.0


def worst_case_error_sq(sphere_points: SpherePointSet) -> float:
    """Squared worst-case integration error: 4/3 - S/N^2.

    Equals 4 * (cap L2 discrepancy)^2; tiny negative values from
    accumulation are clamped to zero.
    """
    n = len(sphere_points)
    s = sum_of_distances(sphere_points)
    value = distance_integral() - s / (n * n)
    if value < -1e-12:
        raise ValueError(f"negative squared error {value} beyond rounding noise")
    return max(value, 0.0)


def quadrature_apply(sphere_points: SpherePointSet, f) -> float:
    """Equal-weight rule: the arithmetic mean of f over the nodes."""
    values = [float(f(p)) for p in sphere_points.points]
    return math.fsum(values) / len(values)


def legendre_eval(ell: int, t: float) -> float:
    """Legendre polynomial P_ell(t), normalized so that P_ell(1) = 1."""
    if ell < 0:
        raise ValueError("degree must be >= 0")
    p_prev, p = 1.0, t
    if ell == 0:
        return 1.0
    for k in range(2, ell + 1):
        p_prev, p = p, ((2 * k - 1) * t * p - (k - 1) * p_prev) / k
    return p


@dataclass(frozen=True, eq=False)
class KernelCoefficients:
    """Coefficient sequence lambda_0 .. lambda_L of the smoothness-3/2 kernel."""

    L: int
    lam: np.ndarray

    def __post_init__(self):
        if self.L < 0 or self.lam.shape != (self.L + 1,):
            raise ValueError("need exactly L + 1 coefficients")
        if self.lam[0] != 4.0 / 3.0:
            raise ValueError("lambda_0 must be 4/3")
        if np.any(self.lam[1:] <= 0.0):
            raise ValueError("coefficients must be positive")


def kernel_coefficients(L: int) -> KernelCoefficients:
    """Pochhammer-quotient coefficients lambda_ell of the kernel expansion.

    lambda_0 = 4/3 and lambda_{ell+1} = lambda_ell * (ell - 1/2) / (ell + 3/2)
    for ell >= 1, starting from lambda_1 = 4/9.  The quotient telescopes to
    lambda_ell = 4 / (3 (2 ell - 1)(2 ell + 1)), which is evaluated directly
    as a single correctly-rounded division (no overflow, no drift).
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    lam = np.empty(L + 1)
    lam[0] = 4.0 / 3.0
    for ell in range(1, L + 1):
        lam[ell] = 4.0 / (3.0 * (2.0 * ell - 1.0) * (2.0 * ell + 1.0))
    return KernelCoefficients(L, lam)


def kernel_legendre_coefficients(L: int) -> np.ndarray:
    """Legendre-series coefficients of t -> 8/3 - sqrt(2 - 2t).

    c_0 = 4/3 and c_ell = 4 / ((2 ell - 1)(2 ell + 3)); the partial sums
    sum c_ell P_ell(t) converge to the closed-form kernel.
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    c = np.empty(L + 1)
    c[0] = 4.0 / 3.0
    for ell in range(1, L + 1):
        c[ell] = 4.0 / ((2.0 * ell - 1.0) * (2.0 * ell + 3.0))
    return c


def kernel_eval(t: float, L: int) -> float:
    """Partial sum of the kernel's Legendre series, degrees 0..L.

    Converges to 8/3 - sqrt(2 - 2t); away from t = 1 the truncation error
    decays quadratically in L, at t = 1 only like 1/L (the series terms
    telescope there).
    """
    if not -1.0 <= t <= 1.0:
        raise ValueError("t must lie in [-1, 1]")
    c = kernel_legendre_coefficients(L)
    total = c[0]
    p_prev, p = 1.0, t
    if L >= 1:
        total += c[1] * p
    for ell in range(2, L + 1):
        p_prev, p = p, ((2 * ell - 1) * t * p - (ell - 1) * p_prev) / ell
        total += c[ell] * p
    return total


def kernel_closed_form(t: float) -> float:
    """The kernel in closed form: 8/3 - sqrt(2 - 2t)."""
    return 8.0 / 3.0 - math.sqrt(max(2.0 - 2.0 * t, 0.0))


def random_sphere_points(n: int, seed: int) -> SpherePointSet:
    """Uniform points on the sphere from the seeded PCG64 generator.

    The height is uniform on [-1, 1] and the azimuth uniform on [0, 2 pi),
    which is the area-preserving cylindrical parameterization.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.uniform(-1.0, 1.0, n)
    az = rng.uniform(0.0, 2.0 * math.pi, n)
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return SpherePointSet(np.column_stack((r * np.cos(az), r * np.sin(az), z)))


@dataclass(frozen=True, eq=False)
class QualityReport:
    """Per-point-set record of N, the squared error and chosen discrepancies."""

    m: int
    n: int
    e2: float
    e2_scaled: float  # N^(3/2) * e2
    discrepancies: dict = field(default_factory=dict)
    generator_metadata: dict = field(default_factory=dict)


def compute_measure(
    name: str,
    square: UnitSquarePointSet | None,
    sphere: SpherePointSet,
    exact_limit: int = 512,
):
    """Dispatch one named measure (see :data:`MEASURES`, minus ``wce``)."""
    if name in ("star", "extreme") and square is None:
        raise ValueError(f"measure {name!r} needs the square pre-images")
    if name == "star":
        return star_discrepancy(square)
    if name == "extreme":
        return extreme_discrepancy(square, exact_limit)
    if name == "sphere_star":
        return sphere_rect_star_discrepancy(sphere)
    if name == "sphere_extreme":
        return sphere_rect_extreme_discrepancy(sphere, exact_limit)
    if name == "cap_l2":
        return cap_l2_discrepancy(sphere)
    if name == "cui_freeden":
        return cui_freeden_discrepancy(sphere)
    raise ValueError(f"unknown measure {name!r}")


def net_quality_report(
    spec: DigitalNetSpec,
    measures: tuple[str, ...] = (),
    scramble_state: ScrambleState | None = None,
    exact_limit: int = 512,
) -> QualityReport:
    """Generate the net, lift it and fill a quality report.

    ``measures`` picks extra discrepancies (see :data:`MEASURES`); the
    squared worst-case error and its N^(3/2)-scaled companion are always
    present.  Bracketed measures are recorded as ``(lower, upper)`` pairs.
    """
    square = digital_net(spec)
    reference = identity_pascal_spec(spec.b, spec.m)
    is_classical = np.array_equal(
        spec.c1.entries, reference.c1.entries
    ) and np.array_equal(spec.c2.entries, reference.c2.entries)
    metadata = {
        "base": spec.b,
        "m": spec.m,
        "matrices": "identity_pascal" if is_classical else "custom",
        "scramble": "none",
    }
    if scramble_state is not None:
        square = scramble(square, scramble_state)
        metadata["scramble"] = f"seed={scramble_state.seed}"
        metadata["scramble_rng"] = scramble_state.algorithm
    sphere = lift(square)
    n = len(sphere)
    e2 = worst_case_error_sq(sphere)
    disc = {}
    for name in measures:
        if name == "wce":
            continue
        result = compute_measure(name, square, sphere, exact_limit)
        if isinstance(result, DiscrepancyBracket):
            disc[name] = (result.lower, result.upper)
        else:
            disc[name] = result.value
    return QualityReport(
        m=spec.m,
        n=n,
        e2=e2,
        e2_scaled=e2 * float(n) ** 1.5,
        discrepancies=disc,
        generator_metadata=metadata,
    )


def convergence_table(
    m_range,
    recipe=None,
    measures: tuple[str, ...] = (),
    exact_limit: int = 512,
) -> list[QualityReport]:
    """One quality report per exponent, ordered by m.

    ``recipe`` maps m to a :class:`DigitalNetSpec`; the default is the
    identity/Pascal pair over Z_2.
    """
    if recipe is None:
        recipe = lambda m: identity_pascal_spec(2, m)
    return [
        net_quality_report(recipe(m), measures=measures, exact_limit=exact_limit)
        for m in sorted(m_range)
    ]
