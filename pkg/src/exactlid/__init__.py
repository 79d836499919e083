"""Exact diffused densities and local-intrinsic-dimension estimation for
flat manifold mixtures: closed forms, verification oracles, the slope
regression estimator, and figure reproduction."""

__version__ = "0.1.0"

from .model import (
    ConstantOne,
    DensitySpec,
    EvalPoint,
    GaussianDiag,
    ManifoldComponent,
    MixtureModel,
    ModelError,
    UniformBox,
    component_split,
    eval_psi,
    model_from_json,
    model_to_dict,
    model_to_json,
    validate_model,
)
from .analytic import (
    BetaValue,
    beta_limit,
    coefficient_bound,
    component_beta_t,
    gaussian_kernel_laplacian_ratio,
    log_component_rho,
    log_gaussian_kernel,
    log_mixture_rho,
    log_smoothed_density,
    mixture_beta_t,
    parallel_planes_beta,
    reference_dim,
    smoothed_laplacian_ratio,
)
from .oracle import (
    ImproperDensityError,
    McSettings,
    OracleEstimate,
    QuadratureDimensionError,
    QuadratureSettings,
    asymptotic_slope_pair,
    beta_fd_space,
    beta_fd_time,
    laplacian_fd,
    power_law_slope_pair,
    rho_monte_carlo,
    rho_quadrature,
    suggested_spatial_step,
)
from .estimator import (
    BetaCurve,
    BetaCurveRow,
    LidlFit,
    TimeGrid,
    bias_curve,
    estimate_lid,
    lidl_fit,
)

__all__ = [
    "__version__",
    "BetaCurve",
    "BetaCurveRow",
    "BetaValue",
    "ConstantOne",
    "DensitySpec",
    "EvalPoint",
    "GaussianDiag",
    "ImproperDensityError",
    "LidlFit",
    "ManifoldComponent",
    "McSettings",
    "MixtureModel",
    "ModelError",
    "OracleEstimate",
    "QuadratureDimensionError",
    "QuadratureSettings",
    "TimeGrid",
    "UniformBox",
    "asymptotic_slope_pair",
    "beta_fd_space",
    "beta_fd_time",
    "beta_limit",
    "bias_curve",
    "coefficient_bound",
    "component_beta_t",
    "component_split",
    "estimate_lid",
    "eval_psi",
    "gaussian_kernel_laplacian_ratio",
    "laplacian_fd",
    "lidl_fit",
    "log_component_rho",
    "log_gaussian_kernel",
    "log_mixture_rho",
    "log_smoothed_density",
    "mixture_beta_t",
    "model_from_json",
    "model_to_dict",
    "model_to_json",
    "parallel_planes_beta",
    "power_law_slope_pair",
    "reference_dim",
    "rho_monte_carlo",
    "rho_quadrature",
    "smoothed_laplacian_ratio",
    "suggested_spatial_step",
    "validate_model",
]
