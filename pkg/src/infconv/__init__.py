"""Extremal operations on grid functions and their reciprocal-norm bounds.

The package computes infimal convolution, sup-min and inf-max of extended
real functions sampled on centered boxes, the radial hat/check transforms
built from minimal enclosing balls of level sets, Luxemburg norms for a
catalog of Young functions, discrete Legendre-Fenchel conjugates, and the
Hopf-Lax / Hopf / level-set solution formulas for Hamilton-Jacobi equations,
together with a verification harness for the associated family of norm
inequalities.
"""

from .grid import (
    OUTSIDE_MINUS_INF,
    OUTSIDE_PLUS_INF,
    FunctionSpec,
    GridDomain,
    GridFunction,
    LevelSet,
    integrate,
    level_set_lower,
    level_set_upper,
    load_values_csv,
    make_domain,
    positive_part,
    reciprocal,
    sample,
    save_values_csv,
)
from .minball import Ball, enclosing_ball, radius_of_level_set
from .extremal import (
    BoundsEntry,
    BoundsReport,
    extremal_bounds_check,
    inf_conv,
    inf_max,
    level_sum_mask,
    minkowski_sum_masks,
    sup_min,
    sup_min_via_level_sets,
)
from .transform import (
    LADDER_RUNGS,
    RadialProfile,
    SuiteEntry,
    TransformSuiteReport,
    check,
    hat,
    rho_minus,
    rho_plus,
    transform_property_suite,
    value_ladder,
)
from .orlicz import (
    NormAxiomsReport,
    YoungFunction,
    luxemburg_norm,
    norm_axioms_check,
    young_compose,
)
from .conjugate import (
    DualGrid,
    biconjugate,
    legendre,
    legendre_at,
    make_dual_grid,
    scaled_conjugate,
)
from .hj import (
    Feasibility,
    HamiltonianSpec,
    HJSolution,
    ResidualReport,
    SignConditionError,
    SweepConfig,
    SweepEntry,
    SweepReport,
    hopf,
    hopf_lax,
    hopf_lax_kernel,
    is_grid_convex,
    level_sum_solution,
    longtime_sweep,
    pde_residual,
    sweep_preset,
)
from .harness import (
    C_TOL,
    INEQUALITY_IDS,
    CampaignSummary,
    HypothesisNotMet,
    InequalityReport,
    Instance,
    SelfTestReport,
    campaign,
    check_inequality,
    make_instance,
    random_instance,
    selftest,
)

__version__ = "0.1.0"

__all__ = [
    "OUTSIDE_MINUS_INF", "OUTSIDE_PLUS_INF", "FunctionSpec", "GridDomain",
    "GridFunction", "LevelSet", "integrate", "level_set_lower",
    "level_set_upper", "load_values_csv", "make_domain", "positive_part",
    "reciprocal", "sample", "save_values_csv",
    "Ball", "enclosing_ball", "radius_of_level_set",
    "BoundsEntry", "BoundsReport", "extremal_bounds_check", "inf_conv",
    "inf_max", "level_sum_mask", "minkowski_sum_masks", "sup_min",
    "sup_min_via_level_sets",
    "LADDER_RUNGS", "RadialProfile", "SuiteEntry", "TransformSuiteReport",
    "check", "hat", "rho_minus", "rho_plus", "transform_property_suite",
    "value_ladder",
    "NormAxiomsReport", "YoungFunction", "luxemburg_norm",
    "norm_axioms_check", "young_compose",
    "DualGrid", "biconjugate", "legendre", "legendre_at", "make_dual_grid",
    "scaled_conjugate",
    "Feasibility", "HamiltonianSpec", "HJSolution", "ResidualReport",
    "SignConditionError", "SweepConfig", "SweepEntry", "SweepReport",
    "hopf", "hopf_lax", "hopf_lax_kernel", "is_grid_convex",
    "level_sum_solution", "longtime_sweep", "pde_residual", "sweep_preset",
    "C_TOL", "INEQUALITY_IDS", "CampaignSummary", "HypothesisNotMet",
    "InequalityReport", "Instance", "SelfTestReport", "campaign",
    "check_inequality", "make_instance", "random_instance", "selftest",
    "__version__",
]
