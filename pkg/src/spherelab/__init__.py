"""Numerical laboratory for fourth-power norms of spherical harmonics on the 2-sphere.

Layers, bottom up: ``legendre`` (stable normalized recurrences), ``sphere``
(points, circles, rotations), ``quadrature`` (band-exact grids and field
norms), ``harmonics`` (basis evaluation and the kernel identities),
``random_bases`` (Haar Monte Carlo), ``beams`` (separated beam families),
``experiments`` (sweeps, fits, file output), ``cli`` (the command line tool).
"""

from ._version import __version__
from .legendre import (
    legendre_p,
    log_factorial,
    normalized_assoc_legendre,
    normalized_assoc_legendre_row,
    normalized_legendre_table,
    wallis_integral,
    zonal_sup_coefficient,
)
from .sphere import (
    GreatCircle,
    SpherePoint,
    circle_angle,
    fibonacci_axes,
    geodesic_distance,
    rotation_to_pole,
)
from .quadrature import (
    GridResolutionError,
    HarmonicField,
    QuadratureGrid,
    TubeResolutionWarning,
    arc_tube_masses,
    build_grid,
    field_to_csv,
    lp_norm,
    superlevel_measure,
    tube_mask,
    tube_mass,
)
from .harmonics import (
    EigenvalueInfo,
    beam_field,
    coefficient_field,
    ell4_sum_field,
    ell_p_profile,
    ell_p_sum,
    eval_basis_row,
    eval_ykm,
    highest_weight_field,
    kernel_bound_ratio,
    make_field,
    pointwise_bound_ratio,
    pointwise_envelope,
    polar_distance,
    projection_kernel,
    sigma_exponent,
    signed_order_table,
    standard_field,
    theta_integral,
    zonal_field,
)
from .random_bases import (
    MONTE_CARLO_COLUMNS,
    CoefficientBasis,
    GaussianMomentReport,
    MonteCarloLambda4,
    basis_square_sum,
    entry_moment,
    gaussian_limit_check,
    lambda4,
    monte_carlo_lambda4,
    sample_haar_unitary,
    trial_rng,
)
from .beams import (
    BEAM_EXPERIMENT_COLUMNS,
    BeamFamily,
    OrthonormalizationReport,
    PackingInfeasibleError,
    RankDeficiencyError,
    beam_coefficients,
    beam_count_rule,
    beam_experiment,
    beam_overlap,
    complete_basis,
    orthonormalize,
    packing_bound,
    place_separated_axes,
)
from .experiments import (
    AVERAGE_L4_COLUMNS,
    ENVELOPE_COLUMNS,
    IDENTITY_CHECKS,
    SUPERLEVEL_COLUMNS,
    TUBE_RATIO_COLUMNS,
    ExperimentRecord,
    PowerLawFit,
    average_l4_experiment,
    exact_identity_suite,
    family_norm_table,
    fit_power_law,
    pointwise_envelope_experiment,
    scaling_experiment,
    scaling_target,
    superlevel_experiment,
    tube_ratio_experiment,
    write_csv,
    write_json,
)

__all__ = [
    "__version__",
    # legendre
    "legendre_p",
    "log_factorial",
    "normalized_assoc_legendre",
    "normalized_assoc_legendre_row",
    "normalized_legendre_table",
    "wallis_integral",
    "zonal_sup_coefficient",
    # sphere
    "SpherePoint",
    "GreatCircle",
    "geodesic_distance",
    "circle_angle",
    "rotation_to_pole",
    "fibonacci_axes",
    # quadrature
    "QuadratureGrid",
    "build_grid",
    "GridResolutionError",
    "TubeResolutionWarning",
    "HarmonicField",
    "lp_norm",
    "tube_mask",
    "tube_mass",
    "arc_tube_masses",
    "superlevel_measure",
    "field_to_csv",
    # harmonics
    "EigenvalueInfo",
    "sigma_exponent",
    "polar_distance",
    "eval_ykm",
    "eval_basis_row",
    "signed_order_table",
    "projection_kernel",
    "ell_p_sum",
    "ell_p_profile",
    "theta_integral",
    "pointwise_envelope",
    "pointwise_bound_ratio",
    "kernel_bound_ratio",
    "make_field",
    "standard_field",
    "zonal_field",
    "highest_weight_field",
    "beam_field",
    "coefficient_field",
    "ell4_sum_field",
    # random bases
    "trial_rng",
    "sample_haar_unitary",
    "CoefficientBasis",
    "lambda4",
    "basis_square_sum",
    "MONTE_CARLO_COLUMNS",
    "MonteCarloLambda4",
    "monte_carlo_lambda4",
    "entry_moment",
    "GaussianMomentReport",
    "gaussian_limit_check",
    # beams
    "beam_coefficients",
    "beam_overlap",
    "packing_bound",
    "place_separated_axes",
    "BeamFamily",
    "orthonormalize",
    "OrthonormalizationReport",
    "complete_basis",
    "beam_count_rule",
    "beam_experiment",
    "BEAM_EXPERIMENT_COLUMNS",
    "PackingInfeasibleError",
    "RankDeficiencyError",
    # experiments
    "PowerLawFit",
    "ExperimentRecord",
    "fit_power_law",
    "family_norm_table",
    "scaling_target",
    "scaling_experiment",
    "average_l4_experiment",
    "pointwise_envelope_experiment",
    "tube_ratio_experiment",
    "superlevel_experiment",
    "exact_identity_suite",
    "IDENTITY_CHECKS",
    "AVERAGE_L4_COLUMNS",
    "ENVELOPE_COLUMNS",
    "TUBE_RATIO_COLUMNS",
    "SUPERLEVEL_COLUMNS",
    "write_csv",
    "write_json",
]
