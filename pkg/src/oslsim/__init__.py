"""oslsim: operator-scaled jump-process models — measures, symbols, simulation.

Build a model from a state-dependent matrix exponent field and a finite
spherical measure, evaluate its Lévy measure and characteristic exponent
(symbol) by certified quadrature, simulate the associated jump SDE with
reproducible counter-based streams, and check the quantitative path
properties (tail exponents, moments, p-variation, exit times) the model
implies.
"""

from ._kernels import NUMBA_ENABLED
from .errors import AdmissibilityError, ContractError, QuadratureError
from .exponent_field import (
    ExponentField,
    ScalarField,
    constant_scalar_field,
    linear_blend_field,
    make_constant,
    make_interpolated,
    make_stable_like,
    sin_alpha_field,
    validate_admissible,
)
from .matexp import (
    EigenData,
    SymMatrix,
    eigen_bounds,
    eigen_data,
    mat_pow,
    power_diff_check,
    power_norm_check,
    van_loan_residual,
)
from .path_stats import (
    TailReport,
    empirical_cf,
    empirical_moment,
    exit_time_moment_check,
    first_exit_time,
    growth_exponent_check,
    max_process,
    p_variation,
    tail_report,
)
from .polar import PolarDecomposition, polar_decompose, polar_growth_check, polar_properties_check
from .simulator import (
    Ensemble,
    PathSample,
    SimConfig,
    SummaryEnsemble,
    sde_coefficient_checks,
    simulate_ensemble,
    simulate_path,
    simulate_summaries,
    truncation_error_bound,
)
from .spectral import SpectralMeasure, discrete, integrate_sphere, sample_direction, symmetrize, total_mass, uniform
from .symbol import (
    OslModel,
    QuadSpec,
    TestFunction,
    apply_generator,
    bg_indices_infinity,
    bg_indices_zero,
    harmonic_cos,
    harmonic_sin,
    levy_integrate,
    scaling_residual,
    symbol_bounds,
    symbol_general,
    symbol_symmetric,
    symbol_symmetric_with_error,
)

__version__ = "0.1.0"
