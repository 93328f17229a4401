"""Occupancy-grid A* routing for the shepherd.

The continuous scene is rasterised onto a square grid covering every agent
plus a margin.  A cell is blocked when its center lies within ``r_avoid``
of any non-exempt sheep, so the shepherd's inverse-square push never sweeps
over bystanders during transit.  Paths are 8-connected (cost 1 axial,
sqrt(2) diagonal, no corner cutting) under the octile heuristic and are
re-planned every tick by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SwarmState
from .errors import UnreachableGoalError
from .kernels import active as _kernel


@dataclass(frozen=True)
class PlannerConfig:
    """Grid resolution and obstacle inflation radius."""

    cell: float = 0.1
    r_avoid: float = 0.4

    def __post_init__(self) -> None:
        if self.cell <= 0:
            raise ValueError("cell must be positive")
        if self.r_avoid < 0:
            raise ValueError("r_avoid must be nonnegative")


@dataclass
class PlannerGrid:
    """Axis-aligned occupancy grid; ``origin`` is the lower-left corner of
    cell (0, 0) in world coordinates."""

    origin: np.ndarray
    cell: float
    width: int
    height: int
    blocked: np.ndarray  # (height, width) bool

    def cell_of(self, point) -> tuple[int, int]:
        """Grid indices of the cell containing ``point``, clamped to bounds."""
        ix = int(math.floor((float(point[0]) - self.origin[0]) / self.cell))
        iy = int(math.floor((float(point[1]) - self.origin[1]) / self.cell))
        ix = min(max(ix, 0), self.width - 1)
        iy = min(max(iy, 0), self.height - 1)
        return ix, iy

    def center(self, ix: int, iy: int) -> np.ndarray:
        return np.array([
            self.origin[0] + (ix + 0.5) * self.cell,
            self.origin[1] + (iy + 0.5) * self.cell,
        ])

    def is_blocked(self, ix: int, iy: int) -> bool:
        return bool(self.blocked[iy, ix])


@dataclass
class PlannedPath:
    """Polyline from start to goal.

    ``waypoints[0]`` is the exact continuous start point (not a cell
    center), so following the path never moves farther than the arc length;
    the remaining waypoints are centers of consecutively adjacent free
    cells.
    """

    waypoints: np.ndarray  # (M, 2) float64

    def length(self) -> float:
        seg = np.diff(self.waypoints, axis=0)
        return float(np.sum(np.sqrt(seg[:, 0] ** 2 + seg[:, 1] ** 2)))


def build_grid(state: SwarmState, cell: float, r_avoid: float,
               exempt=(), *, margin: float = 2.0, cover=()) -> PlannerGrid:
    """Rasterise the scene into an occupancy grid.

    The grid covers the bounding box of all agents (and any extra ``cover``
    points, e.g. the current plan goal) expanded by ``margin``.  Sheep ids
    in ``exempt`` block nothing.
    """
    if cell <= 0:
        raise ValueError("cell must be positive")
    if r_avoid < 0:
        raise ValueError("r_avoid must be nonnegative")
    pts = [state.positions, state.shepherd.reshape(1, 2)]
    for extra in cover:
        pts.append(np.asarray(extra, dtype=np.float64).reshape(1, 2))
    allpts = np.vstack(pts)
    xmin = float(allpts[:, 0].min()) - margin
    xmax = float(allpts[:, 0].max()) + margin
    ymin = float(allpts[:, 1].min()) - margin
    ymax = float(allpts[:, 1].max()) + margin
    width = max(1, int(math.ceil((xmax - xmin) / cell)))
    height = max(1, int(math.ceil((ymax - ymin) / cell)))
    origin = np.array([xmin, ymin])
    blocked = np.zeros((height, width), dtype=bool)
    exempt_set = set(exempt)
    half = 0.5 * cell
    for sid in range(state.n):
        if sid in exempt_set:
            continue
        px = float(state.positions[sid, 0])
        py = float(state.positions[sid, 1])
        ix0 = max(0, int(math.floor((px - r_avoid - half - origin[0]) / cell)))
        ix1 = min(width - 1, int(math.ceil((px + r_avoid + half - origin[0]) / cell)))
        iy0 = max(0, int(math.floor((py - r_avoid - half - origin[1]) / cell)))
        iy1 = min(height - 1, int(math.ceil((py + r_avoid + half - origin[1]) / cell)))
        if ix0 > ix1 or iy0 > iy1:
            continue
        cx = origin[0] + (np.arange(ix0, ix1 + 1) + 0.5) * cell
        cy = origin[1] + (np.arange(iy0, iy1 + 1) + 0.5) * cell
        ddx = cx[None, :] - px
        ddy = cy[:, None] - py
        inside = np.sqrt(ddx * ddx + ddy * ddy) <= r_avoid
        blocked[iy0:iy1 + 1, ix0:ix1 + 1] |= inside
    return PlannerGrid(origin, cell, width, height, blocked)


def _nearest_free(grid: PlannerGrid, point) -> int:
    """Flat index of the free cell whose center is nearest ``point``."""
    free = np.nonzero(~grid.blocked.reshape(-1))[0]
    if free.size == 0:
        raise UnreachableGoalError("grid is fully blocked")
    fx = grid.origin[0] + (free % grid.width + 0.5) * grid.cell
    fy = grid.origin[1] + (free // grid.width + 0.5) * grid.cell
    d2 = (fx - float(point[0])) ** 2 + (fy - float(point[1])) ** 2
    return int(free[int(np.argmin(d2))])


def plan(grid: PlannerGrid, start, goal) -> PlannedPath:
    """Minimal-cost 8-connected path between the cells of two points.

    Blocked start or goal cells are substituted by the nearest free cell.
    Raises UnreachableGoalError when no path exists.
    """
    sx, sy = grid.cell_of(start)
    gx, gy = grid.cell_of(goal)
    s_idx = sy * grid.width + sx
    g_idx = gy * grid.width + gx
    flat = np.ascontiguousarray(grid.blocked.reshape(-1), dtype=np.uint8).tobytes()
    if flat[s_idx]:
        s_idx = _nearest_free(grid, start)
    if flat[g_idx]:
        g_idx = _nearest_free(grid, goal)
    found = _kernel.astar_grid(flat, grid.width, grid.height, s_idx, g_idx)
    if found is None:
        raise UnreachableGoalError(
            f"no grid path from cell {s_idx} to cell {g_idx}"
        )
    pts = [np.asarray(start, dtype=np.float64).reshape(2)]
    for idx in found:
        pts.append(grid.center(idx % grid.width, idx // grid.width))
    return PlannedPath(np.vstack(pts))


def advance_along(path: PlannedPath, position, max_dist: float) -> np.ndarray:
    """Point exactly ``max_dist`` of arc length along the path from the
    projection of ``position`` onto it (or the endpoint when closer)."""
    wp = path.waypoints
    if wp.shape[0] == 0:
        raise ValueError("path has no waypoints")
    if max_dist <= 0:
        raise ValueError("max_dist must be positive")
    pos = np.asarray(position, dtype=np.float64).reshape(2)
    if wp.shape[0] == 1:
        return wp[0].copy()

    # closest point on the polyline (first minimal segment wins)
    best_d2 = math.inf
    best_seg = 0
    best_t = 0.0
    for s in range(wp.shape[0] - 1):
        a = wp[s]
        ab = wp[s + 1] - a
        denom = float(ab[0] * ab[0] + ab[1] * ab[1])
        if denom == 0.0:
            t = 0.0
        else:
            t = float((pos - a) @ ab) / denom
            t = min(max(t, 0.0), 1.0)
        q = a + t * ab
        d2 = float((pos[0] - q[0]) ** 2 + (pos[1] - q[1]) ** 2)
        if d2 < best_d2:
            best_d2 = d2
            best_seg = s
            best_t = t

    remaining = float(max_dist)
    cur = wp[best_seg] + best_t * (wp[best_seg + 1] - wp[best_seg])
    for s in range(best_seg, wp.shape[0] - 1):
        nxt = wp[s + 1]
        seg = nxt - cur
        length = math.sqrt(float(seg[0] * seg[0] + seg[1] * seg[1]))
        if length > 0.0:
            if remaining <= length:
                return cur + seg * (remaining / length)
            remaining -= length
        cur = nxt
    return wp[-1].copy()
