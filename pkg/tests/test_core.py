"""Swarm dynamics: force terms, saturation, the synchronous step contract."""

from __future__ import annotations

import math

import numpy as np
import pytest

from singling import (
    ForceTriple,
    SingularityError,
    SwarmParams,
    SwarmState,
    force_components,
    neighbor_set,
    saturate,
    step,
)

DEFAULTS = SwarmParams()


def make_state(positions, shepherd=(10.0, 10.0)) -> SwarmState:
    return SwarmState.initial(np.array(positions, dtype=float), shepherd)


def test_params_defaults():
    assert DEFAULTS.repulsion_gain == 1.0
    assert DEFAULTS.attraction_gain == 4.0
    assert DEFAULTS.shepherd_gain == 0.5
    assert DEFAULTS.sensing_radius == 1.0
    assert DEFAULTS.speed_cap == 0.5
    assert DEFAULTS.extended_margin == 0.3


def test_params_validation():
    with pytest.raises(ValueError):
        SwarmParams(repulsion_gain=-0.1)
    with pytest.raises(ValueError):
        SwarmParams(attraction_gain=-1.0)
    with pytest.raises(ValueError):
        SwarmParams(shepherd_gain=-0.5)
    with pytest.raises(ValueError):
        SwarmParams(sensing_radius=0.0)
    with pytest.raises(ValueError):
        SwarmParams(speed_cap=0.0)
    with pytest.raises(ValueError):
        SwarmParams(extended_margin=0.0)
    with pytest.raises(ValueError):
        SwarmParams(extended_margin=1.0)
    # zero gains are legal (they just switch a term off)
    SwarmParams(repulsion_gain=0.0, attraction_gain=0.0, shepherd_gain=0.0)


def test_state_initial():
    state = make_state([(0.0, 0.0), (1.0, 2.0)], shepherd=(3.0, 4.0))
    assert state.n == 2
    assert state.k == 0
    assert state.positions.dtype == np.float64
    assert np.all(state.velocities == 0.0)
    assert tuple(state.shepherd) == (3.0, 4.0)
    with pytest.raises(ValueError):
        SwarmState.initial(np.zeros((0, 2)), (0.0, 0.0))
    with pytest.raises(ValueError):
        SwarmState.initial(np.zeros((3, 3)), (0.0, 0.0))


def test_state_copy_is_deep():
    state = make_state([(0.0, 0.0), (1.0, 0.0)])
    clone = state.copy()
    clone.positions[0, 0] = 9.0
    clone.shepherd[0] = 9.0
    assert state.positions[0, 0] == 0.0
    assert state.shepherd[0] == 10.0


def test_saturate():
    out = saturate((0.3, 0.0), 0.5)
    assert tuple(out) == (0.3, 0.0)
    out = saturate((3.0, 4.0), 0.5)
    assert math.hypot(out[0], out[1]) == pytest.approx(0.5, abs=1e-15)
    assert out[0] / out[1] == pytest.approx(0.75, abs=1e-15)
    assert tuple(saturate((0.0, 0.0), 0.5)) == (0.0, 0.0)
    with pytest.raises(ValueError):
        saturate((1.0, 0.0), 0.0)


def test_neighbor_set_open_disc():
    # row spaced 0.5: ends sit exactly at the radius and must be excluded
    state = make_state([(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)])
    assert neighbor_set(state, 0, 1.0) == [1]
    assert neighbor_set(state, 1, 1.0) == [0, 2]
    assert neighbor_set(state, 2, 1.0) == [1]
    assert neighbor_set(state, 0, 1.0 + 1e-9) == [1, 2]
    with pytest.raises(IndexError):
        neighbor_set(state, 3, 1.0)


def test_force_components_pair():
    # single flockmate at 0.5 on the x-axis, shepherd one unit below
    state = make_state([(0.0, 0.0), (0.5, 0.0)], shepherd=(0.0, -1.0))
    triple = force_components(state, 0, DEFAULTS)
    assert isinstance(triple, ForceTriple)
    assert triple.repulsion == pytest.approx((-4.0, 0.0), abs=1e-12)
    assert triple.attraction == pytest.approx((1.0, 0.0), abs=1e-12)
    assert triple.shepherd == pytest.approx((0.0, 1.0), abs=1e-12)


def test_force_components_averages_over_neighbors():
    state = make_state([(0.0, 0.0), (0.5, 0.0), (-0.5, 0.0)])
    triple = force_components(state, 0, DEFAULTS)
    # symmetric flockmates cancel exactly
    assert triple.repulsion == pytest.approx((0.0, 0.0), abs=1e-15)
    assert triple.attraction == pytest.approx((0.0, 0.0), abs=1e-15)


def test_isolated_sheep_all_terms_zero():
    state = make_state([(0.0, 0.0), (5.0, 0.0)], shepherd=(0.0, -1.0))
    triple = force_components(state, 0, DEFAULTS)
    assert tuple(triple.repulsion) == (0.0, 0.0)
    assert tuple(triple.attraction) == (0.0, 0.0)
    assert tuple(triple.shepherd) == (0.0, 0.0)
    pushed = force_components(state, 0, DEFAULTS, isolated_feel_shepherd=True)
    assert pushed.shepherd == pytest.approx((0.0, 1.0), abs=1e-12)


def test_force_singularity_raises():
    state = make_state([(0.0, 0.0), (0.0, 1e-12)])
    with pytest.raises(SingularityError):
        force_components(state, 0, DEFAULTS)
    state = make_state([(0.0, 0.0), (0.5, 0.0)], shepherd=(0.0, 1e-12))
    with pytest.raises(SingularityError):
        force_components(state, 0, DEFAULTS)
    with pytest.raises(SingularityError):
        step(state, DEFAULTS, (9.0, 9.0))


def test_step_pair_worked_example():
    # both sheep overshoot the cap and saturate to 0.5-length moves
    state = make_state([(0.0, 0.0), (0.8, 0.0)], shepherd=(-1.0, 0.0))
    out = step(state, DEFAULTS, (-1.0, 0.0))
    assert out.positions[0] == pytest.approx((0.5, 0.0), abs=1e-12)
    assert out.positions[1] == pytest.approx((0.3, 0.0), abs=1e-12)
    assert out.k == 1
    # velocities store the applied displacement
    assert out.velocities == pytest.approx(out.positions - state.positions, abs=0)


def test_step_unsaturated_matches_hand_values():
    state = make_state([(0.0, 0.0), (0.8, 0.0)], shepherd=(-1.0, 0.0))
    out = step(state, DEFAULTS, (-1.0, 0.0), saturation=False)
    # sheep 0: 1*(-0.8/0.512) + 4*1 + 0.5*1
    vx0 = -0.8 / 0.512 + 4.0 + 0.5
    # sheep 1: 1*(0.8/0.512) - 4 + 0.5*(1.8/1.8**3)
    vx1 = 0.8 / 0.512 - 4.0 + 0.5 * (1.8 / 1.8**3)
    assert out.positions[0, 0] == pytest.approx(vx0, rel=1e-12)
    assert out.positions[1, 0] == pytest.approx(0.8 + vx1, rel=1e-12)
    assert abs(vx0) > DEFAULTS.speed_cap


def test_step_uses_current_shepherd_not_next():
    state = make_state([(0.0, 0.0), (0.5, 0.0)], shepherd=(0.0, -1.0))
    moved = step(state, DEFAULTS, (50.0, 50.0))
    # same sheep motion as stepping with an unchanged shepherd command
    stayed = step(state, DEFAULTS, (0.0, -1.0))
    assert np.array_equal(moved.positions, stayed.positions)
    assert tuple(moved.shepherd) == (50.0, 50.0)
    assert tuple(stayed.shepherd) == (0.0, -1.0)


def test_step_is_synchronous():
    # forces all come from the frozen previous state: permuting which sheep
    # is computed first cannot matter, and no sheep sees an updated flockmate
    rng = np.random.default_rng(7)
    positions = rng.uniform(-1.0, 1.0, size=(6, 2))
    state = make_state(positions, shepherd=(2.0, 2.0))
    out = step(state, DEFAULTS, (2.0, 2.0))
    for i in range(state.n):
        triple = force_components(state, i, DEFAULTS)
        v = (DEFAULTS.repulsion_gain * triple.repulsion
             + DEFAULTS.attraction_gain * triple.attraction
             + DEFAULTS.shepherd_gain * triple.shepherd)
        v = saturate(v, DEFAULTS.speed_cap)
        assert out.positions[i] == pytest.approx(state.positions[i] + v, abs=1e-12)


def test_speed_cap_property():
    rng = np.random.default_rng(123)
    for _ in range(50):
        n = int(rng.integers(2, 12))
        state = make_state(rng.uniform(-2.0, 2.0, size=(n, 2)),
                           shepherd=rng.uniform(-3.0, 3.0, size=2))
        out = step(state, DEFAULTS, (0.0, 0.0))
        speeds = np.sqrt(np.sum(out.velocities**2, axis=1))
        assert np.all(speeds <= DEFAULTS.speed_cap + 1e-12)


def test_isolated_sheep_never_moves():
    state = make_state([(0.0, 0.0), (0.5, 0.0), (8.0, 8.0)], shepherd=(8.5, 8.0))
    for _ in range(5):
        state = step(state, DEFAULTS, state.shepherd)
        assert tuple(state.positions[2]) == (8.0, 8.0)


def test_isolated_feel_shepherd_toggle():
    state = make_state([(0.0, 0.0), (5.0, 0.0)], shepherd=(6.0, 0.0))
    out = step(state, DEFAULTS, (6.0, 0.0), isolated_feel_shepherd=True)
    # sheep 1 is pushed straight away from the shepherd
    assert out.positions[1, 0] < 5.0
    assert out.positions[1, 1] == 0.0
    frozen = step(state, DEFAULTS, (6.0, 0.0))
    assert tuple(frozen.positions[1]) == (5.0, 0.0)


def test_permutation_equivariance():
    rng = np.random.default_rng(42)
    for _ in range(20):
        n = int(rng.integers(3, 10))
        positions = rng.uniform(-2.0, 2.0, size=(n, 2))
        shepherd = rng.uniform(-3.0, 3.0, size=2)
        perm = rng.permutation(n)
        out = step(make_state(positions, shepherd), DEFAULTS, shepherd)
        out_perm = step(make_state(positions[perm], shepherd), DEFAULTS, shepherd)
        assert out_perm.positions == pytest.approx(out.positions[perm], abs=1e-12)


def test_equilibrium_spacing_is_stationary_without_shepherd_push():
    # at spacing 0.5 the gained flockmate terms cancel exactly
    params = SwarmParams(shepherd_gain=0.0)
    state = make_state([(0.0, 0.0), (0.5, 0.0)])
    out = step(state, params, state.shepherd)
    assert np.array_equal(out.positions, state.positions)
