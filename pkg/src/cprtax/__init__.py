"""Equilibrium computation and tax design for fragile common-pool resource games."""

from .differentiated import GammaComparison, compare_uniform, f_hat_and_v, h_gamma
from .effective_return import (
    CriticalQuantities,
    critical_points,
    f,
    f_x,
    feasible_region,
    g,
    g_hat,
    q,
    t_bar,
    t_bar_i,
)
from .equilibrium import (
    EquilibriumResult,
    best_response,
    best_response_dynamics,
    solve_pne,
    solve_pne_gamma,
)
from .errors import *  # noqa: F401,F403
from .model import (
    Curve,
    GameInstance,
    PlayerPrefs,
    ValidationReport,
    build_game,
    make_game,
    prospect_value,
    validate,
)
from .taxation import (
    AchievableRange,
    MonotonicityCertificate,
    SweepRow,
    achievable_range,
    design_tax,
    detect_discontinuities,
    maximize_objective,
    monotonicity_certificate,
    sweep,
)
from .welfare import WelfareResult, check_opt_leq_ne, social_optimum, social_welfare

__version__ = "0.1.0"
