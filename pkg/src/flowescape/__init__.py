"""Escape rates of suspension flows over Markov shifts through cylinder holes.

The package builds suspension systems with cylinder-function ceilings over
finite-alphabet Markov shifts, opens a hole along a cylinder, and computes the
flow escape rate three independent ways: spectral radius of the open transfer
matrix, smallest zero of the factorized dynamical determinant, and the decay
slope of exactly-computed survival probabilities. On top of that it expands
escape rates of shrinking hole families to arbitrary polynomial order, checks
the induced-pressure characterization of the rate, and cross-validates
everything against Monte Carlo simulation.
"""

from .asymptotics import (
    AsymptoticsRow,
    ExpansionCoefficients,
    LocalRateReport,
    LocalRateRow,
    PeriodicOrbitFamily,
    SecondOrderReport,
    SecondOrderRow,
    build_family,
    expansion_coefficients,
    family_hole_measure,
    family_hole_word,
    family_zeta_op,
    local_rate_sweep,
    second_order_check,
    verify_expansion,
)
from .errors import (
    AllMassEscapedError,
    DegenerateLinearTermError,
    DimensionTooLargeError,
    DomainError,
    EpsilonTooLargeError,
    FactorizationMismatchError,
    HoleShorterThanCeilingOrderError,
    InadmissibleWordError,
    NoBracketError,
    NoConvergenceError,
    NonArithmeticCeilingError,
    NonPositiveCeilingError,
    NoSignChangeError,
    NotCyclicallyAdmissibleError,
    NotIrreducibleError,
    NotPrimePeriodError,
    NotReducedError,
    NotRowStochasticError,
    NoZeroAtOneError,
    PoleAtOneError,
    PressureNotNegativeError,
    RefinementTooLargeError,
    WindowEmptyError,
    WordTooShortError,
)
from .montecarlo import (
    DeviationEstimate,
    EscapeRateEstimate,
    SimulationConfig,
    SurvivalEstimate,
    estimate_deviation_prob,
    estimate_survival,
    exact_deviation_prob,
    fit_decay,
    fit_escape_rate,
)
from .open_system import (
    HoleQuantities,
    OpenMatrix,
    build_open_bordered,
    build_open_matrix,
    build_open_refined,
    escape_rate_block_hole,
    escape_rate_flow,
    hole_quantities,
    matrix_spectral_radius,
    open_spectral_radius,
    survival_curve_flow,
)
from .pressure import (
    PressureReport,
    PressureRow,
    SuperadditivityReport,
    check_pressure_equals_minus_rho,
    gibbs_constant,
    gibbs_ratio,
    induced_pressure_truncated,
    induced_pressure_via_root,
    log_transition_potential,
    superadditivity_check,
    word_log_weight,
)
from .shift import (
    DEFAULT_STATE_CAP,
    CylinderFunction,
    MarkovShift,
    SurvivorMatrix,
    admissible_words,
    birkhoff_sum,
    birkhoff_sum_cyclic,
    build_markov_shift,
    ceiling_from_json,
    ceiling_to_json,
    constant_function,
    cylinder_function,
    cylinder_measure,
    escape_rate_from_survival_slope,
    format_word,
    is_reduced,
    load_ceiling,
    load_model,
    parse_word,
    refine_cylinder_function,
    shift_from_json,
    shift_to_json,
    survival_measure_exact,
    survivor_matrix,
)
from .suspension import (
    SuspensionSystem,
    build_suspension,
    flow_invariant_vector,
    rationalize_ceiling,
    refine_suspension,
)
from .zeta import (
    Polynomial,
    ZetaBundle,
    char_poly,
    cofactor_poly,
    deflate_at_one,
    escape_rate_zeta,
    smallest_root_geq_one,
    taylor_at_one,
    zeta_op_factorized,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # shift
    "MarkovShift",
    "build_markov_shift",
    "parse_word",
    "format_word",
    "cylinder_measure",
    "is_reduced",
    "admissible_words",
    "CylinderFunction",
    "cylinder_function",
    "constant_function",
    "refine_cylinder_function",
    "birkhoff_sum",
    "birkhoff_sum_cyclic",
    "SurvivorMatrix",
    "survivor_matrix",
    "survival_measure_exact",
    "escape_rate_from_survival_slope",
    "shift_to_json",
    "shift_from_json",
    "load_model",
    "ceiling_to_json",
    "ceiling_from_json",
    "load_ceiling",
    "DEFAULT_STATE_CAP",
    # suspension
    "SuspensionSystem",
    "build_suspension",
    "refine_suspension",
    "flow_invariant_vector",
    "rationalize_ceiling",
    # open system
    "HoleQuantities",
    "hole_quantities",
    "OpenMatrix",
    "build_open_refined",
    "build_open_bordered",
    "build_open_matrix",
    "matrix_spectral_radius",
    "open_spectral_radius",
    "escape_rate_flow",
    "escape_rate_block_hole",
    "survival_curve_flow",
    # zeta
    "Polynomial",
    "char_poly",
    "cofactor_poly",
    "deflate_at_one",
    "taylor_at_one",
    "smallest_root_geq_one",
    "ZetaBundle",
    "zeta_op_factorized",
    "escape_rate_zeta",
    # asymptotics
    "PeriodicOrbitFamily",
    "build_family",
    "family_hole_word",
    "family_hole_measure",
    "family_zeta_op",
    "ExpansionCoefficients",
    "expansion_coefficients",
    "AsymptoticsRow",
    "verify_expansion",
    "LocalRateRow",
    "LocalRateReport",
    "local_rate_sweep",
    "SecondOrderRow",
    "SecondOrderReport",
    "second_order_check",
    # pressure
    "log_transition_potential",
    "word_log_weight",
    "gibbs_ratio",
    "gibbs_constant",
    "induced_pressure_truncated",
    "induced_pressure_via_root",
    "PressureRow",
    "PressureReport",
    "check_pressure_equals_minus_rho",
    "SuperadditivityReport",
    "superadditivity_check",
    # monte carlo
    "SimulationConfig",
    "SurvivalEstimate",
    "estimate_survival",
    "EscapeRateEstimate",
    "fit_escape_rate",
    "DeviationEstimate",
    "estimate_deviation_prob",
    "exact_deviation_prob",
    "fit_decay",
    # errors
    "DomainError",
    "NotRowStochasticError",
    "NotIrreducibleError",
    "InadmissibleWordError",
    "WordTooShortError",
    "RefinementTooLargeError",
    "NonArithmeticCeilingError",
    "NonPositiveCeilingError",
    "EpsilonTooLargeError",
    "NotReducedError",
    "HoleShorterThanCeilingOrderError",
    "DimensionTooLargeError",
    "NoZeroAtOneError",
    "PoleAtOneError",
    "FactorizationMismatchError",
    "NoSignChangeError",
    "NotPrimePeriodError",
    "NotCyclicallyAdmissibleError",
    "DegenerateLinearTermError",
    "WindowEmptyError",
    "NoBracketError",
    "PressureNotNegativeError",
    "AllMassEscapedError",
    "NoConvergenceError",
]
