"""Sensitivity analysis for squeezed-light Mach-Zehnder interferometer networks.

A library and CLI for the metrology of d interferometers fed by a single
squeezed-vacuum state distributed through a linear circuit: closed-form
moment and Fisher matrices, constrained optimization of the resource
allocation, analytic bounds and gain factors, spectra, and Haar-random
circuit ensembles, all cross-validated against an independent Gaussian
moment oracle.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import (
    DegenerateSlope,
    DimensionMismatch,
    Infeasible,
    MixedModeUnsupported,
    MznetError,
    NonConvergent,
    NonUnitary,
    PhaseMismatch,
    SingularInformation,
)
from .estimation import (
    SensitivityReport,
    variance_emom,
    variance_eqcr,
    variance_smom,
    variance_sqcr,
)
from .gaussian_oracle import (
    GaussianNetwork,
    ModeInput,
    MomentTensors,
    build_network,
    compute_moment_tensors,
    oracle_moment_matrix,
    oracle_qfim,
    unitary_from_row,
)
from .network_model import (
    CircuitVector,
    CoefficientVector,
    EntangledConfig,
    SeparableConfig,
    circuit_vector_from_unitary,
    covariance_c2_structure,
    entangled_config_from_json,
    entangled_config_to_json,
    inverse_moment_matrix,
    qfim,
    qfim_inverse,
    separable_qfi_terms,
    separable_variance_terms,
    squeeze_factor,
    squeeze_parameter_from_photons,
)
from .optimization import (
    ApproximationWarning,
    BoundsReport,
    OptimizationProblem,
    OptimizationResult,
    analytic_optimum_vave,
    bounds_emom,
    bounds_eqcr,
    gain,
    gain2_analytic,
    gain2_vave_exact,
    gain4_analytic,
    gain4_curve,
    lagrange_stationarity_check,
    minimize_emom,
    minimize_eqcr,
)
from .spectra import (
    EnsembleStats,
    SpectrumResult,
    ensemble_heisenberg_saturation,
    ensemble_optimal_squeezing,
    ensemble_optimal_variance,
    fisher_spectrum,
    haar_mean_prediction,
    haar_weight_statistic,
    sample_haar_circuit,
    squeezing_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    # errors
    "MznetError",
    "NonUnitary",
    "DimensionMismatch",
    "MixedModeUnsupported",
    "DegenerateSlope",
    "PhaseMismatch",
    "SingularInformation",
    "Infeasible",
    "NonConvergent",
    "ApproximationWarning",
    # network model
    "CircuitVector",
    "CoefficientVector",
    "EntangledConfig",
    "SeparableConfig",
    "circuit_vector_from_unitary",
    "covariance_c2_structure",
    "entangled_config_from_json",
    "entangled_config_to_json",
    "inverse_moment_matrix",
    "qfim",
    "qfim_inverse",
    "separable_qfi_terms",
    "separable_variance_terms",
    "squeeze_factor",
    "squeeze_parameter_from_photons",
    # oracle
    "GaussianNetwork",
    "ModeInput",
    "MomentTensors",
    "build_network",
    "compute_moment_tensors",
    "oracle_moment_matrix",
    "oracle_qfim",
    "unitary_from_row",
    # estimation
    "SensitivityReport",
    "variance_emom",
    "variance_smom",
    "variance_eqcr",
    "variance_sqcr",
    # optimization
    "OptimizationProblem",
    "OptimizationResult",
    "BoundsReport",
    "minimize_emom",
    "minimize_eqcr",
    "bounds_emom",
    "bounds_eqcr",
    "analytic_optimum_vave",
    "lagrange_stationarity_check",
    "gain",
    "gain2_analytic",
    "gain2_vave_exact",
    "gain4_analytic",
    "gain4_curve",
    # spectra
    "SpectrumResult",
    "EnsembleStats",
    "squeezing_spectrum",
    "fisher_spectrum",
    "sample_haar_circuit",
    "haar_weight_statistic",
    "haar_mean_prediction",
    "ensemble_optimal_variance",
    "ensemble_optimal_squeezing",
    "ensemble_heisenberg_saturation",
]
