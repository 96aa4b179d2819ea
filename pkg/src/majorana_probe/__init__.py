"""Pump-probe response of a driven quantum dot side-coupled to Majorana modes.

Three routes to the probe susceptibility chi(1): a closed form, a directly
assembled sideband linear system, and time-domain integration of the
mean-field equations followed by demodulation.
"""

from .exceptions import (
    DifferentiationError,
    FeatureError,
    IntegrationError,
    MajoranaProbeError,
    ParameterError,
    SingularityError,
    SolverError,
)
from .params import (
    REFERENCE_PARAMS,
    GroupIndexScale,
    ModelParams,
    ProbeGrid,
    ValidationReport,
    majorana_splitting,
    params_from_dict,
    params_from_json,
    validate_params,
)
from .steady import SteadyState, cubic_coefficients, solve_population_inversion, steady_state
from .response import (
    DivergenceReport,
    GroupIndexResult,
    SusceptibilityPoint,
    chi1,
    chi1_closed_form,
    chi1_linear_system,
    divergence_report,
    group_index,
    spectrum,
    spectrum_arrays,
)
from .features import SpectrumFeatures, detect_features, mirror_mismatch
from .oracle import OracleConfig, integrate_mean_field, oracle_chi, oracle_comparison
from .sweep import Axis, SweepSpec, run_sweep
from .figures import FIGURES, figure
from .estimator import ProbeSusceptibility

__version__ = "0.1.0"

__all__ = [
    "MajoranaProbeError", "ParameterError", "SolverError", "SingularityError",
    "DifferentiationError", "IntegrationError", "FeatureError",
    "ModelParams", "ProbeGrid", "GroupIndexScale", "ValidationReport", "REFERENCE_PARAMS",
    "validate_params", "params_from_dict", "params_from_json", "majorana_splitting",
    "SteadyState", "steady_state", "solve_population_inversion", "cubic_coefficients",
    "SusceptibilityPoint", "GroupIndexResult", "DivergenceReport", "chi1", "chi1_closed_form",
    "chi1_linear_system", "spectrum", "spectrum_arrays", "group_index", "divergence_report",
    "SpectrumFeatures", "detect_features", "mirror_mismatch",
    "OracleConfig", "integrate_mean_field", "oracle_chi", "oracle_comparison",
    "Axis", "SweepSpec", "run_sweep", "FIGURES", "figure", "ProbeSusceptibility",
]
