"""Shepherd-driven singling of one target sheep out of a Boid swarm.

A deterministic discrete-time swarm simulator, a connectivity-aware
pinning-sheep controller with a midpoint baseline, a grid A* planner for
shepherd transit, and a seeded Monte Carlo experiment harness with CSV /
JSON / SVG artifacts.
"""

from .controller import (
    METHODS,
    PinningContext,
    StepRecord,
    TrialResult,
    alignment_scalar,
    bipartite_ideal_position,
    connectivity_scalar,
    extended_neighbor_set,
    ideal_shepherd_position,
    ideal_velocity,
    pinning_context,
    push_position,
    run_singling,
    select_pinning,
)
from .core import (
    ForceTriple,
    SwarmParams,
    SwarmState,
    force_components,
    neighbor_set,
    saturate,
    step,
)
from .errors import (
    AlreadySeparatedError,
    ConfigError,
    IsolatedPinningError,
    SinglingError,
    SingularityError,
    UnreachableGoalError,
)
from .experiment import (
    GENERATOR_NAME,
    GRID_LABELS,
    ExperimentConfig,
    RunSummary,
    config_from_dict,
    config_to_dict,
    generate_initial,
    load_config,
    mean_connectivity_curve,
    read_trial_csv,
    run_trials,
    summarize,
    summary_to_json,
    write_connectivity_svg,
    write_outputs,
    write_trial_csv,
)
from .metrics import (
    InteractionGraph,
    component_sizes,
    connectivity_stats,
    interaction_graph,
    is_separated,
    max_component_fraction,
)
from .planner import (
    PlannedPath,
    PlannerConfig,
    PlannerGrid,
    advance_along,
    build_grid,
    plan,
)
from .separation import (
    FeasibleSets,
    Interval,
    SeparationProbe,
    contains,
    feasible_sets,
    max_gain_position,
    pair_velocity_scalar,
    probe,
    project_to_feasible_line,
    separation_gain,
)

__version__ = "0.1.0"

__all__ = [
    "AlreadySeparatedError",
    "ConfigError",
    "ExperimentConfig",
    "FeasibleSets",
    "ForceTriple",
    "GENERATOR_NAME",
    "GRID_LABELS",
    "InteractionGraph",
    "Interval",
    "IsolatedPinningError",
    "METHODS",
    "PinningContext",
    "PlannedPath",
    "PlannerConfig",
    "PlannerGrid",
    "RunSummary",
    "SeparationProbe",
    "SinglingError",
    "SingularityError",
    "StepRecord",
    "SwarmParams",
    "SwarmState",
    "TrialResult",
    "UnreachableGoalError",
    "advance_along",
    "alignment_scalar",
    "bipartite_ideal_position",
    "build_grid",
    "component_sizes",
    "config_from_dict",
    "config_to_dict",
    "connectivity_scalar",
    "connectivity_stats",
    "contains",
    "extended_neighbor_set",
    "feasible_sets",
    "force_components",
    "generate_initial",
    "ideal_shepherd_position",
    "ideal_velocity",
    "interaction_graph",
    "is_separated",
    "load_config",
    "max_component_fraction",
    "max_gain_position",
    "mean_connectivity_curve",
    "neighbor_set",
    "pair_velocity_scalar",
    "pinning_context",
    "plan",
    "probe",
    "project_to_feasible_line",
    "push_position",
    "read_trial_csv",
    "run_singling",
    "run_trials",
    "saturate",
    "select_pinning",
    "separation_gain",
    "step",
    "summarize",
    "summary_to_json",
    "write_connectivity_svg",
    "write_outputs",
    "write_trial_csv",
    "__version__",
]
