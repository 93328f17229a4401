"""Pinning-sheep controller: singles the target out of the swarm while
favouring connectivity of everything else.

Each tick the shepherd works through one "pinning" sheep drawn uniformly
from the target's neighbours.  Over the pinning sheep's extended
neighbourhood (a closed ball of sensing_radius + extended_margin) two
scalars are formed: a link-maintenance term summing signed distance slack
to each neighbour and an alignment term summing signed velocity-difference
norms; the target carries sign +1, everyone else -1.  These produce an
ideal velocity for the pinning sheep, and inverting the inverse-square
shepherd-force law turns the residual push (ideal velocity minus the
flockmate terms) into an ideal shepherd position in closed form.  When that
position does not already sit on the feasible separation line it is snapped
to the nearest feasible point.

The "bipartite" baseline swaps only the ideal-position computation for the
midpoint of the pinning sheep and the target; everything else (selection,
path planning, stepping) is shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SwarmParams, SwarmState, force_components, neighbor_set, step
from .errors import (
    AlreadySeparatedError,
    IsolatedPinningError,
    SingularityError,
    UnreachableGoalError,
)
from .metrics import connectivity_stats
from .planner import PlannerConfig, advance_along, build_grid, plan
from .separation import (
    FeasibleSets,
    contains,
    feasible_sets,
    max_gain_position,
    project_to_feasible_line,
)

METHODS = ("proposed", "bipartite")


@dataclass(frozen=True)
class PinningContext:
    """Everything the controller derived for one pinning decision."""

    pinning: int
    target: int
    extended: tuple[int, ...]
    link_term: float
    alignment_term: float
    ideal_velocity: np.ndarray
    ideal_position: np.ndarray


@dataclass
class StepRecord:
    """One tick of a trial: state snapshot plus the action taken."""

    step: int
    shepherd: np.ndarray
    positions: np.ndarray
    target_degree: int
    max_component: int
    pinning: int  # -1 when no pinning action this tick
    fallback: bool


@dataclass
class TrialResult:
    """Outcome of one singling run."""

    success: bool
    steps: int
    connectivity_series: list[float]
    seed: int
    method: str
    records: list[StepRecord] = field(default_factory=list)
    fallback_events: int = 0
    error: str | None = None


def extended_neighbor_set(state: SwarmState, p: int, params: SwarmParams) -> list[int]:
    """Ids within the closed ball of sensing_radius + extended_margin of
    sheep ``p`` (boundary included, unlike the strict sensing disc),
    ascending."""
    if not 0 <= p < state.n:
        raise IndexError(f"sheep id {p} out of range for swarm of {state.n}")
    reach = params.sensing_radius + params.extended_margin
    pos = state.positions
    dx = pos[:, 0] - pos[p, 0]
    dy = pos[:, 1] - pos[p, 1]
    d = np.sqrt(dx * dx + dy * dy)
    mask = d <= reach
    mask[p] = False
    return np.nonzero(mask)[0].tolist()


def _signed_sum(state: SwarmState, p: int, t: int, params: SwarmParams,
                term) -> float:
    if p == t:
        raise ValueError("pinning sheep and target must differ")
    total = 0.0
    for j in extended_neighbor_set(state, p, params):
        sign = 1.0 if j == t else -1.0
        total += sign * term(j)
    return total


def connectivity_scalar(state: SwarmState, p: int, t: int,
                        params: SwarmParams) -> float:
    """Signed distance slack over the extended neighbourhood of ``p``.

    Each neighbour contributes its distance minus the sensing radius,
    negated except for the target; zero for an empty neighbourhood.
    Negative values press p to keep non-target links short.
    """
    pos = state.positions

    def term(j: int) -> float:
        dx = float(pos[j, 0] - pos[p, 0])
        dy = float(pos[j, 1] - pos[p, 1])
        return math.sqrt(dx * dx + dy * dy) - params.sensing_radius

    return _signed_sum(state, p, t, params, term)


def alignment_scalar(state: SwarmState, p: int, t: int,
                     params: SwarmParams) -> float:
    """Signed velocity-difference norms over the extended neighbourhood,
    using the last-applied displacements stored in the state."""
    vel = state.velocities

    def term(j: int) -> float:
        dx = float(vel[j, 0] - vel[p, 0])
        dy = float(vel[j, 1] - vel[p, 1])
        return math.sqrt(dx * dx + dy * dy)

    return _signed_sum(state, p, t, params, term)


def ideal_velocity(state: SwarmState, p: int, t: int,
                   params: SwarmParams) -> np.ndarray:
    """Velocity the controller wants the pinning sheep to take.

    Scales the summed offsets from extended neighbours by the combined
    link/alignment scalars; an empty extended neighbourhood has no defined
    direction and raises IsolatedPinningError.
    """
    ext = extended_neighbor_set(state, p, params)
    if not ext:
        raise IsolatedPinningError(
            f"sheep {p} has no extended neighbours; no pinning action defined"
        )
    pos = state.positions
    denom = 0.0
    sum_x = 0.0
    sum_y = 0.0
    for j in ext:
        dx = float(pos[p, 0] - pos[j, 0])
        dy = float(pos[p, 1] - pos[j, 1])
        denom += math.sqrt(dx * dx + dy * dy)
        sum_x += dx
        sum_y += dy
    if denom < 1e-300:
        raise SingularityError(
            f"all extended neighbours coincide with sheep {p}"
        )
    scale = -(connectivity_scalar(state, p, t, params)
              + alignment_scalar(state, p, t, params)) / denom
    return np.array([scale * sum_x, scale * sum_y])


def push_position(anchor, w, shepherd_gain: float) -> np.ndarray:
    """Shepherd position whose inverse-square push on ``anchor`` is ``w``.

    The push law points from the shepherd to the sheep with magnitude
    shepherd_gain / distance^2, so placing the shepherd antiparallel to
    ``w`` at distance sqrt(shepherd_gain / |w|) realises ``w`` exactly.
    """
    if shepherd_gain <= 0:
        raise ValueError("shepherd_gain must be positive to invert the push")
    w = np.asarray(w, dtype=np.float64)
    wn = math.sqrt(float(w[0] * w[0] + w[1] * w[1]))
    if wn == 0.0:
        raise ValueError("zero push leaves the shepherd distance unconstrained")
    return np.asarray(anchor, dtype=np.float64) - (w / wn) * math.sqrt(shepherd_gain / wn)


def ideal_shepherd_position(state: SwarmState, p: int, t: int,
                            params: SwarmParams, sets: FeasibleSets) -> np.ndarray:
    """Shepherd position whose push gives the pinning sheep its ideal
    velocity, snapped to the feasible separation line when needed.

    The required shepherd-induced velocity is the ideal velocity minus the
    gained flockmate terms; push_position then fixes the shepherd.  A zero
    residual leaves the distance unconstrained, so the fallback parks the
    shepherd at the feasible-line point of largest separation gain.
    Raises IsolatedPinningError when ``p`` senses no flockmates (the
    shepherd push is zeroed by the empty-neighbourhood rule, so no position
    can realise the velocity).
    """
    if params.shepherd_gain <= 0:
        raise ValueError("shepherd_gain must be positive to invert the push")
    nbrs = neighbor_set(state, p, params.sensing_radius)
    x_p = state.positions[p]
    x_t = state.positions[t]
    if not nbrs:
        raise IsolatedPinningError(
            f"sheep {p} senses no flockmates; shepherd push is zeroed"
        )
    forces = force_components(state, p, params)
    v_star = ideal_velocity(state, p, t, params)
    w = v_star - params.repulsion_gain * forces.repulsion \
        - params.attraction_gain * forces.attraction
    wn = math.sqrt(float(w[0] * w[0] + w[1] * w[1]))
    if wn == 0.0:
        return max_gain_position(x_p, x_t, sets)
    y = push_position(x_p, w, params.shepherd_gain)
    u = x_t - x_p
    uu = float(u[0] * u[0] + u[1] * u[1])
    if uu == 0.0:
        raise SingularityError(f"pinning sheep {p} and target {t} coincide")
    c_star = float((y - x_p) @ u) / uu
    on_line = y - (x_p + c_star * u)
    off = math.sqrt(float(on_line[0] ** 2 + on_line[1] ** 2))
    if off <= 1e-12 * max(1.0, math.sqrt(uu)) and contains(sets, c_star):
        return y
    return project_to_feasible_line(y, x_p, x_t, sets)


def bipartite_ideal_position(state: SwarmState, p: int, t: int) -> np.ndarray:
    """Baseline goal: the midpoint of the pinning sheep and the target."""
    if p == t:
        raise ValueError("pinning sheep and target must differ")
    return (state.positions[p] + state.positions[t]) / 2.0


def pinning_context(state: SwarmState, p: int, t: int, params: SwarmParams,
                    sets: FeasibleSets) -> PinningContext:
    """Bundle of every controller quantity for one pinning decision."""
    return PinningContext(
        pinning=p,
        target=t,
        extended=tuple(extended_neighbor_set(state, p, params)),
        link_term=connectivity_scalar(state, p, t, params),
        alignment_term=alignment_scalar(state, p, t, params),
        ideal_velocity=ideal_velocity(state, p, t, params),
        ideal_position=ideal_shepherd_position(state, p, t, params, sets),
    )


def select_pinning(state: SwarmState, t: int, params: SwarmParams,
                   rng: np.random.Generator, exclude=None) -> int:
    """Uniform draw from the target's current neighbours.

    Consumes exactly one draw from ``rng``.  ``exclude`` removes previously
    used ids from the pool unless that would empty it.  Raises
    AlreadySeparatedError when the target has no neighbours.
    """
    candidates = neighbor_set(state, t, params.sensing_radius)
    if not candidates:
        raise AlreadySeparatedError(f"target {t} has no neighbours")
    if exclude:
        filtered = [c for c in candidates if c not in exclude]
        if filtered:
            candidates = filtered
    return candidates[int(rng.integers(len(candidates)))]


def _dist(a: np.ndarray, b: np.ndarray) -> float:
    dx = float(a[0] - b[0])
    dy = float(a[1] - b[1])
    return math.sqrt(dx * dx + dy * dy)


def run_singling(state: SwarmState, t: int, params: SwarmParams, *,
                 method: str = "proposed",
                 rng: np.random.Generator | None = None,
                 seed: int = 0,
                 step_budget: int = 5000,
                 sets: FeasibleSets | None = None,
                 planner: PlannerConfig | None = None,
                 saturation: bool = True,
                 isolated_feel_shepherd: bool = False,
                 exclude_used_pinning: bool = False,
                 keep_records: bool = True,
                 ideal_position_fn=None) -> TrialResult:
    """Run one singling trial until the target is separated or the budget
    is spent.

    Per tick: (re)select a pinning sheep whenever none is held or the held
    one left the target's sensing disc; compute the method's ideal shepherd
    position; move the shepherd straight there when within speed_cap,
    otherwise follow a freshly planned grid path for one speed_cap of arc
    length (straight-line fallback when planning fails, counted in
    ``fallback_events``); then advance the swarm one tick.  Success is the
    target's sensing disc emptying out.  ``connectivity_series`` holds one
    remaining-swarm max-component fraction per recorded state (steps + 1
    values).

    ``ideal_position_fn(state, p)``, when given, overrides the method's
    goal computation; everything else is shared between methods.
    """
    if step_budget <= 0:
        raise ValueError("step_budget must be positive")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if not 0 <= t < state.n:
        raise IndexError(f"target id {t} out of range for swarm of {state.n}")
    if rng is None:
        rng = np.random.default_rng(seed)
    if sets is None:
        sets = feasible_sets(params)
    plan_cfg = planner if planner is not None else PlannerConfig()
    radius = params.sensing_radius
    cap = params.speed_cap

    if ideal_position_fn is None:
        if method == "proposed":
            def ideal_position_fn(st: SwarmState, p: int) -> np.ndarray:
                try:
                    return ideal_shepherd_position(st, p, t, params, sets)
                except IsolatedPinningError:
                    # neighbourless pinning sheep: park at the feasible-line
                    # point nearest it until it regains flockmates
                    return project_to_feasible_line(
                        st.positions[p], st.positions[p], st.positions[t], sets
                    )
        else:
            def ideal_position_fn(st: SwarmState, p: int) -> np.ndarray:
                return bipartite_ideal_position(st, p, t)

    state = state.copy()
    series: list[float] = []
    records: list[StepRecord] = []
    used: set[int] = set()
    fallback_total = 0
    pin = -1
    steps_done = 0
    success = False

    def snapshot(pin_id: int, fallback: bool) -> None:
        degree = len(neighbor_set(state, t, radius))
        if state.n >= 2:
            largest, count = connectivity_stats(state, t, radius)
            series.append(largest / count)
        else:
            largest = 0
        if keep_records:
            records.append(StepRecord(
                steps_done, state.shepherd.copy(), state.positions.copy(),
                degree, largest, pin_id, fallback,
            ))

    while True:
        target_neighbors = neighbor_set(state, t, radius)
        if not target_neighbors:
            success = True
            snapshot(-1, False)
            break
        if steps_done >= step_budget:
            snapshot(-1, False)
            break
        if pin < 0 or _dist(state.positions[t], state.positions[pin]) > radius:
            pin = select_pinning(
                state, t, params, rng,
                exclude=used if exclude_used_pinning else None,
            )
            if exclude_used_pinning:
                used.add(pin)
        goal = ideal_position_fn(state, pin)
        fallback = False
        gap = _dist(state.shepherd, goal)
        if gap <= cap:
            shepherd_next = np.asarray(goal, dtype=np.float64).reshape(2)
        else:
            try:
                grid = build_grid(
                    state, plan_cfg.cell, plan_cfg.r_avoid,
                    exempt=(pin, t), margin=2.0 * radius,
                    cover=(state.shepherd, goal),
                )
                path = plan(grid, state.shepherd, goal)
                shepherd_next = advance_along(path, state.shepherd, cap)
            except UnreachableGoalError:
                shepherd_next = state.shepherd + (goal - state.shepherd) * (cap / gap)
                fallback = True
                fallback_total += 1
        snapshot(pin, fallback)
        state = step(state, params, shepherd_next, saturation=saturation,
                     isolated_feel_shepherd=isolated_feel_shepherd)
        steps_done += 1

    return TrialResult(
        success=success,
        steps=steps_done,
        connectivity_series=series,
        seed=seed,
        method=method,
        records=records,
        fallback_events=fallback_total,
    )
