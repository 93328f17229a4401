"""Discrete-time Boid swarm with a repulsive shepherd.

Each sheep senses flockmates inside an open disc of ``sensing_radius`` and
moves under three weighted terms: inverse-square repulsion from sensed
flockmates, unit-direction attraction toward them, and an inverse-square
push away from the shepherd.  The combined movement is norm-saturated at
``speed_cap``.  A sheep with no flockmates in range freezes entirely (all
three terms zeroed) unless ``isolated_feel_shepherd`` is set, in which case
the shepherd push still applies.

Updates are synchronous: every force is evaluated against the frozen
previous state, and the shepherd command passed to :func:`step` becomes the
shepherd position *of the next state*, so sheep react to it one tick later.
All arithmetic is float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import COINCIDENCE_TOLERANCE, SingularityError
from .kernels import active as _kernel


@dataclass(frozen=True)
class SwarmParams:
    """Gains, radii and caps governing the dynamics.

    Attributes:
        repulsion_gain: weight of the inverse-square flockmate repulsion.
        attraction_gain: weight of the flockmate attraction.
        shepherd_gain: weight of the inverse-square shepherd repulsion.
        sensing_radius: open-disc interaction radius.
        speed_cap: maximum displacement per tick.
        extended_margin: extra reach of the controller's extended
            neighbourhood (a closed ball of radius sensing_radius + margin).
    """

    repulsion_gain: float = 1.0
    attraction_gain: float = 4.0
    shepherd_gain: float = 0.5
    sensing_radius: float = 1.0
    speed_cap: float = 0.5
    extended_margin: float = 0.3

    def __post_init__(self) -> None:
        for name in ("repulsion_gain", "attraction_gain", "shepherd_gain"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.sensing_radius <= 0:
            raise ValueError("sensing_radius must be positive")
        if self.speed_cap <= 0:
            raise ValueError("speed_cap must be positive")
        if not 0.0 < self.extended_margin < self.sensing_radius:
            raise ValueError("extended_margin must lie in (0, sensing_radius)")


@dataclass
class SwarmState:
    """Positions of N sheep plus the shepherd at tick ``k``.

    ``velocities`` holds the displacement each sheep applied on the step
    that produced this state (zeros at construction).
    """

    positions: np.ndarray  # (N, 2) float64, C-contiguous
    shepherd: np.ndarray   # (2,) float64
    velocities: np.ndarray  # (N, 2) float64
    k: int = 0

    @classmethod
    def initial(cls, positions, shepherd) -> "SwarmState":
        pos = np.ascontiguousarray(positions, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValueError("positions must be a nonempty (N, 2) array")
        shep = np.asarray(shepherd, dtype=np.float64).reshape(2).copy()
        return cls(pos, shep, np.zeros_like(pos), 0)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def copy(self) -> "SwarmState":
        return SwarmState(
            self.positions.copy(), self.shepherd.copy(), self.velocities.copy(), self.k
        )


@dataclass(frozen=True)
class ForceTriple:
    """The three raw (ungained) force terms acting on one sheep."""

    repulsion: np.ndarray
    attraction: np.ndarray
    shepherd: np.ndarray


def saturate(v, cap: float) -> np.ndarray:
    """Clamp ``v`` to norm ``cap`` preserving direction; zero maps to zero."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    v = np.asarray(v, dtype=np.float64)
    norm = math.sqrt(v[0] * v[0] + v[1] * v[1])
    if norm > cap:
        return v * (cap / norm)
    return v.copy()


def _check_sheep(state: SwarmState, i: int) -> None:
    if not 0 <= i < state.n:
        raise IndexError(f"sheep id {i} out of range for swarm of {state.n}")


def neighbor_set(state: SwarmState, i: int, radius: float) -> list[int]:
    """Ids strictly inside the open disc of ``radius`` around sheep ``i``,
    ascending."""
    _check_sheep(state, i)
    pos = state.positions
    dx = pos[:, 0] - pos[i, 0]
    dy = pos[:, 1] - pos[i, 1]
    d = np.sqrt(dx * dx + dy * dy)
    mask = d < radius
    mask[i] = False
    return np.nonzero(mask)[0].tolist()


def force_components(state: SwarmState, i: int, params: SwarmParams, *,
                     isolated_feel_shepherd: bool = False) -> ForceTriple:
    """Raw repulsion / attraction / shepherd-push terms for sheep ``i``.

    Flockmate terms average over the open sensing disc; all terms are zero
    when the disc is empty (the shepherd term too, unless
    ``isolated_feel_shepherd``).  Raises SingularityError on a
    near-coincident interacting pair.
    """
    _check_sheep(state, i)
    pos = state.positions
    xi = float(pos[i, 0])
    yi = float(pos[i, 1])
    count = 0
    s1x = s1y = 0.0
    s2x = s2y = 0.0
    for j in range(state.n):
        if j == i:
            continue
        dx = float(pos[j, 0]) - xi
        dy = float(pos[j, 1]) - yi
        d = math.sqrt(dx * dx + dy * dy)
        if d < params.sensing_radius:
            if d < COINCIDENCE_TOLERANCE:
                raise SingularityError(f"sheep {i} and {j} are nearly coincident")
            d3 = d * d * d
            s1x += dx / d3
            s1y += dy / d3
            s2x += dx / d
            s2y += dy / d
            count += 1
    zero = np.zeros(2)
    if count == 0 and not isolated_feel_shepherd:
        return ForceTriple(zero, zero.copy(), zero.copy())
    dsx = float(state.shepherd[0]) - xi
    dsy = float(state.shepherd[1]) - yi
    ds = math.sqrt(dsx * dsx + dsy * dsy)
    if ds < COINCIDENCE_TOLERANCE:
        raise SingularityError(f"shepherd and sheep {i} are nearly coincident")
    ds3 = ds * ds * ds
    shepherd_term = np.array([-(dsx / ds3), -(dsy / ds3)])
    if count == 0:
        return ForceTriple(zero, zero.copy(), shepherd_term)
    repulsion = np.array([-(s1x / count), -(s1y / count)])
    attraction = np.array([s2x / count, s2y / count])
    return ForceTriple(repulsion, attraction, shepherd_term)


def step(state: SwarmState, params: SwarmParams, shepherd_next, *,
         saturation: bool = True, isolated_feel_shepherd: bool = False) -> SwarmState:
    """Advance the swarm one tick.

    Sheep move under forces computed from ``state`` (including its current
    shepherd position); ``shepherd_next`` is installed as the shepherd
    position of the returned state.  ``saturation=False`` removes the
    per-tick speed cap (useful for analysing the raw dynamics).
    """
    shep_next = np.asarray(shepherd_next, dtype=np.float64).reshape(2).copy()
    out_pos = np.empty_like(state.positions)
    out_vel = np.empty_like(state.positions)
    status = _kernel.step_positions(
        state.positions, state.shepherd,
        params.repulsion_gain, params.attraction_gain, params.shepherd_gain,
        params.sensing_radius, params.speed_cap,
        bool(saturation), bool(isolated_feel_shepherd),
        out_pos, out_vel,
    )
    if status >= 0:
        raise SingularityError(
            f"near-coincident agents around sheep {status} at tick {state.k}"
        )
    return SwarmState(out_pos, shep_next, out_vel, state.k + 1)
