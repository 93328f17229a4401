"""Occupancy grid construction, A* optimality, and path following."""

from __future__ import annotations

import heapq
import math

import numpy as np
import pytest

from singling import (
    PlannedPath,
    PlannerConfig,
    PlannerGrid,
    SwarmState,
    UnreachableGoalError,
    advance_along,
    build_grid,
    plan,
)
from singling.kernels import active as kernel

SQRT2 = math.sqrt(2.0)


def make_state(positions, shepherd=(0.0, 0.0)) -> SwarmState:
    return SwarmState.initial(np.array(positions, dtype=float), shepherd)


def dijkstra_cost(blocked: bytes, width: int, height: int,
                  start: int, goal: int) -> float | None:
    """Uniform-cost search oracle with the same movement rules as the
    planner: 8-connected, no corner cutting."""
    moves = [(1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
             (1, 1, SQRT2), (1, -1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2)]
    dist = [math.inf] * (width * height)
    dist[start] = 0.0
    heap = [(0.0, start)]
    while heap:
        d, cell = heapq.heappop(heap)
        if cell == goal:
            return d
        if d > dist[cell]:
            continue
        cx, cy = cell % width, cell // width
        for mx, my, cost in moves:
            nx, ny = cx + mx, cy + my
            if not (0 <= nx < width and 0 <= ny < height):
                continue
            nxt = ny * width + nx
            if blocked[nxt]:
                continue
            if mx != 0 and my != 0:
                if blocked[cy * width + nx] or blocked[ny * width + cx]:
                    continue
            nd = d + cost
            if nd < dist[nxt]:
                dist[nxt] = nd
                heapq.heappush(heap, (nd, nxt))
    return None


def path_cost(cells: list[int], width: int) -> float:
    total = 0.0
    for a, b in zip(cells, cells[1:]):
        dx = abs(b % width - a % width)
        dy = abs(b // width - a // width)
        assert max(dx, dy) == 1, "waypoints must be adjacent cells"
        total += SQRT2 if dx == 1 and dy == 1 else 1.0
    return total


def test_planner_config_validation():
    assert PlannerConfig().cell == 0.1
    assert PlannerConfig().r_avoid == 0.4
    with pytest.raises(ValueError):
        PlannerConfig(cell=0.0)
    with pytest.raises(ValueError):
        PlannerConfig(r_avoid=-0.1)


def test_build_grid_matches_disc_membership():
    state = make_state([(0.3, 0.2), (1.1, 0.9)], shepherd=(0.0, 0.0))
    grid = build_grid(state, 0.1, 0.4, margin=1.0)
    for iy in range(grid.height):
        for ix in range(grid.width):
            center = grid.center(ix, iy)
            inside = any(
                math.dist(center, state.positions[s]) <= 0.4
                for s in range(state.n)
            )
            assert grid.is_blocked(ix, iy) == inside


def test_build_grid_honors_exemptions_and_margin():
    state = make_state([(0.5, 0.5)], shepherd=(0.0, 0.0))
    grid = build_grid(state, 0.1, 0.4, exempt=(0,), margin=2.0)
    assert not grid.blocked.any()
    # margin extends the footprint beyond the agent bounding box
    assert grid.origin[0] <= -2.0 + 1e-9
    assert grid.origin[0] + grid.width * grid.cell >= 2.5 - 1e-9
    covered = build_grid(state, 0.1, 0.4, margin=2.0, cover=((9.0, 0.0),))
    assert covered.origin[0] + covered.width * covered.cell >= 11.0 - 1e-9


def test_cell_of_clamps_and_inverts_center():
    state = make_state([(0.5, 0.5)])
    grid = build_grid(state, 0.1, 0.4, margin=1.0)
    assert grid.cell_of(grid.center(3, 4)) == (3, 4)
    assert grid.cell_of((-99.0, -99.0)) == (0, 0)
    assert grid.cell_of((99.0, 99.0)) == (grid.width - 1, grid.height - 1)


def test_straight_path_costs_ten_cells():
    state = make_state([(0.5, 0.0)], shepherd=(0.0, 0.0))
    grid = build_grid(state, 0.1, 0.4, exempt=(0,), margin=1.0)
    path = plan(grid, (0.0, 0.0), (1.0, 0.0))
    assert tuple(path.waypoints[0]) == (0.0, 0.0)
    cells = path.waypoints[1:]
    assert cells.shape[0] == 11
    assert np.all(cells[:, 1] == cells[0, 1])
    assert path.length() == pytest.approx(
        1.0 + float(np.linalg.norm(cells[0] - path.waypoints[0])), abs=1e-12)


def test_obstacle_forces_detour():
    state = make_state([(0.5, 0.0)], shepherd=(0.0, 0.0))
    free = build_grid(state, 0.1, 0.4, exempt=(0,), margin=1.0)
    walled = build_grid(state, 0.1, 0.4, margin=1.0)
    direct = plan(free, (0.0, 0.0), (1.0, 0.0))
    detour = plan(walled, (0.0, 0.0), (1.0, 0.0))
    assert detour.length() > direct.length()
    # every routed cell stays clear of the obstacle
    for point in detour.waypoints[1:]:
        assert math.dist(point, (0.5, 0.0)) > 0.4


def test_blocked_goal_substitutes_nearest_free_cell():
    state = make_state([(0.5, 0.0)], shepherd=(0.0, 0.0))
    grid = build_grid(state, 0.1, 0.4, margin=1.0)
    path = plan(grid, (0.0, 0.0), (0.5, 0.0))
    end = path.waypoints[-1]
    gx, gy = grid.cell_of(end)
    assert not grid.is_blocked(gx, gy)
    best = min(
        float(np.linalg.norm(grid.center(ix, iy) - np.array([0.5, 0.0])))
        for iy in range(grid.height)
        for ix in range(grid.width)
        if not grid.is_blocked(ix, iy)
    )
    assert float(np.linalg.norm(end - np.array([0.5, 0.0]))) == pytest.approx(
        best, abs=1e-12)


def test_unreachable_goal_raises():
    blocked = np.zeros((7, 7), dtype=bool)
    blocked[:, 3] = True  # full wall between left and right halves
    grid = PlannerGrid(np.array([0.0, 0.0]), 1.0, 7, 7, blocked)
    with pytest.raises(UnreachableGoalError):
        plan(grid, (0.5, 0.5), (6.5, 6.5))


def test_astar_against_dijkstra_oracle():
    rng = np.random.default_rng(2718)
    for _ in range(200):
        width = int(rng.integers(4, 40))
        height = int(rng.integers(4, 40))
        blocked = (rng.random(width * height) < 0.25).astype(np.uint8)
        free = np.nonzero(blocked == 0)[0]
        if free.size < 2:
            continue
        start, goal = (int(x) for x in rng.choice(free, size=2, replace=False))
        flat = blocked.tobytes()
        found = kernel.astar_grid(flat, width, height, start, goal)
        oracle = dijkstra_cost(flat, width, height, start, goal)
        if oracle is None:
            assert found is None
        else:
            assert found is not None
            assert found[0] == start and found[-1] == goal
            assert all(not blocked[c] for c in found)
            assert path_cost(list(found), width) == pytest.approx(oracle, abs=1e-9)


def test_no_corner_cutting():
    # diagonal squeeze: both orthogonal neighbours blocked
    blocked = np.zeros((2, 2), dtype=bool)
    blocked[0, 1] = True
    blocked[1, 0] = True
    grid = PlannerGrid(np.array([0.0, 0.0]), 1.0, 2, 2, blocked)
    with pytest.raises(UnreachableGoalError):
        plan(grid, (0.5, 0.5), (1.5, 1.5))


def test_advance_along_straight_segment():
    path = PlannedPath(np.array([(0.0, 0.0), (2.0, 0.0)]))
    out = advance_along(path, (0.0, 0.0), 0.5)
    assert out == pytest.approx((0.5, 0.0), abs=1e-12)
    # projection of an off-path position comes first
    out = advance_along(path, (1.0, 0.3), 0.5)
    assert out == pytest.approx((1.5, 0.0), abs=1e-12)


def test_advance_along_clamps_at_endpoint():
    path = PlannedPath(np.array([(0.0, 0.0), (0.2, 0.0)]))
    out = advance_along(path, (0.0, 0.0), 0.5)
    assert out == pytest.approx((0.2, 0.0), abs=1e-12)


def test_advance_along_spans_corner():
    path = PlannedPath(np.array([(0.0, 0.0), (0.3, 0.0), (0.3, 1.0)]))
    out = advance_along(path, (0.0, 0.0), 0.5)
    assert out == pytest.approx((0.3, 0.2), abs=1e-12)


def test_advance_along_never_exceeds_cap():
    rng = np.random.default_rng(404)
    for _ in range(200):
        m = int(rng.integers(2, 8))
        wp = np.cumsum(rng.uniform(-0.3, 0.3, size=(m, 2)), axis=0)
        path = PlannedPath(wp)
        pos = wp[0] + rng.uniform(-0.2, 0.2, size=2)
        cap = float(rng.uniform(0.05, 0.6))
        out = advance_along(path, pos, cap)
        along = float(np.linalg.norm(out - np.asarray(pos)))
        # chord from the on-path projection is at most the arc walked
        proj_gap = min(
            float(np.linalg.norm(pos - wp[s])) for s in range(m)
        )
        assert along <= cap + proj_gap + 1e-12


def test_advance_along_validation():
    path = PlannedPath(np.array([(0.0, 0.0), (1.0, 0.0)]))
    with pytest.raises(ValueError):
        advance_along(path, (0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        advance_along(PlannedPath(np.zeros((0, 2))), (0.0, 0.0), 0.5)
