"""Digital (0,m,2)-nets lifted to the unit sphere.

Construction of digital nets and sequences over a prime base, the
cylindrical equal-area lift to S^2, exact star/extreme discrepancies in
the square and for spherical rectangles, the cap L2 discrepancy via the
distance-sum identity, and the worst-case error of equal-weight
quadrature in the smoothness-3/2 space.
"""

__version__ = "0.1.0"

from .netgen import (
    DigitalNetSpec,
    GenMatrix,
    ScrambleState,
    UnitSquarePointSet,
    digital_net,
    digital_sequence_prefix,
    identity_matrix,
    identity_pascal_spec,
    is_prime,
    pascal_matrix,
    scramble,
    scramble_state,
    verify_net,
)
from .sphere import (
    SpherePointSet,
    SphericalRectangle,
    equal_area_lift,
    lift,
    sphere_from_angles,
    square_coords,
    square_coords_array,
)
from .discrepancy import (
    DiscrepancyBracket,
    DiscrepancyValue,
    Kind,
    cap_l2_discrepancy,
    cui_freeden_discrepancy,
    extreme_discrepancy,
    net_extreme_upper_bound,
    roth_star_lower_bound,
    sphere_rect_extreme_discrepancy,
    sphere_rect_star_discrepancy,
    star_discrepancy,
    sum_of_distances,
)
from .quadrature import (
    WCE_STAR_BOUND,
    compute_measure,
    KernelCoefficients,
    QualityReport,
    convergence_table,
    distance_integral,
    kernel_closed_form,
    kernel_coefficients,
    kernel_eval,
    kernel_legendre_coefficients,
    legendre_eval,
    net_quality_report,
    quadrature_apply,
    random_sphere_points,
    worst_case_error_sq,
)

__all__ = [
    "__version__",
    # netgen
    "GenMatrix", "DigitalNetSpec", "UnitSquarePointSet", "ScrambleState",
    "is_prime", "identity_matrix", "pascal_matrix", "identity_pascal_spec",
    "digital_net", "digital_sequence_prefix", "verify_net",
    "scramble_state", "scramble",
    # sphere
    "SpherePointSet", "SphericalRectangle", "sphere_from_angles",
    "equal_area_lift", "lift", "square_coords", "square_coords_array",
    # discrepancy
    "Kind", "DiscrepancyValue", "DiscrepancyBracket", "star_discrepancy",
    "extreme_discrepancy", "sphere_rect_star_discrepancy",
    "sphere_rect_extreme_discrepancy", "sum_of_distances",
    "cap_l2_discrepancy", "cui_freeden_discrepancy",
    "roth_star_lower_bound", "net_extreme_upper_bound",
    # quadrature
    "KernelCoefficients", "QualityReport", "distance_integral",
    "worst_case_error_sq", "quadrature_apply", "legendre_eval",
    "kernel_coefficients", "kernel_legendre_coefficients", "kernel_eval",
    "kernel_closed_form", "random_sphere_points", "net_quality_report",
    "convergence_table", "WCE_STAR_BOUND",
]
