"""normsim: simulation and calibration of social norm and convention dynamics.

Models behind one trajectory/ensemble/calibration interface: the Bass
population recursion, linear threshold cascades with influence
maximization, Axelrod cultural dissemination, the Naming Game with
committed minorities, and network coordination games under best-response
or log-linear updating, including the extended inertia-and-trend payoff.
"""

__version__ = "0.1.0"

from .bass import BassParams, bass_step, bass_trajectory, fit_bass
from .calibrate import (
    SwitchObservations,
    TippingResult,
    critical_mass_sweep,
    grid_search_bkr,
    simplex_grid,
)
from .cascade import (
    classify_sigma_categories,
    cross_tabulate,
    exposure_at_adoption,
    final_adoption,
    greedy_seed_selection,
    ltm_step,
    run_cascade,
)
from .cultures import (
    CommittedSet,
    Inventory,
    axelrod_step,
    count_cultural_regions,
    naming_game_step,
    run_axelrod,
    run_naming_game,
)
from .engine import (
    EnsembleSummary,
    SimConfig,
    conformity_metrics,
    ensemble,
    run,
    s_shape_check,
    switching_rate,
)
from .errors import DataError, IdentifiabilityError, InputError, ParseError
from .games import (
    ClassParams,
    Coordination,
    Extended,
    PayoffMatrix,
    best_response,
    coordination_payoffs,
    extended_payoffs,
    game_step,
    general_payoffs,
    loglinear_prob,
    reduce_to_coordination,
    trend_signal,
)
from .graphs import Graph, build_from_edges, generate, read_edge_list, write_edge_list
from .reports import CalibrationReport
from .trajectory import Trajectory

__all__ = [
    "BassParams",
    "CalibrationReport",
    "ClassParams",
    "CommittedSet",
    "Coordination",
    "DataError",
    "EnsembleSummary",
    "Extended",
    "Graph",
    "IdentifiabilityError",
    "InputError",
    "Inventory",
    "ParseError",
    "PayoffMatrix",
    "SimConfig",
    "SwitchObservations",
    "TippingResult",
    "Trajectory",
    "axelrod_step",
    "bass_step",
    "bass_trajectory",
    "best_response",
    "build_from_edges",
    "classify_sigma_categories",
    "conformity_metrics",
    "coordination_payoffs",
    "count_cultural_regions",
    "critical_mass_sweep",
    "cross_tabulate",
    "ensemble",
    "exposure_at_adoption",
    "extended_payoffs",
    "final_adoption",
    "fit_bass",
    "game_step",
    "general_payoffs",
    "generate",
    "greedy_seed_selection",
    "grid_search_bkr",
    "loglinear_prob",
    "ltm_step",
    "naming_game_step",
    "read_edge_list",
    "reduce_to_coordination",
    "run",
    "run_axelrod",
    "run_cascade",
    "run_naming_game",
    "s_shape_check",
    "simplex_grid",
    "switching_rate",
    "trend_signal",
    "write_edge_list",
]
