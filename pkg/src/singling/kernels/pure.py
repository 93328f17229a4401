"""Pure-Python reference implementation of the hot-loop kernels.

This module is the semantics of record: the compiled extension in
``_fast.pyx`` mirrors it operation for operation (same accumulation order,
same branch structure, no FP contraction), so both backends produce
bit-identical results.  Keep the two files in lockstep when editing either.
"""

from __future__ import annotations

import heapq
import math

BACKEND_NAME = "pure"

_SQRT2 = math.sqrt(2.0)

# 8-connected moves, cardinals first.  The iteration order is part of the
# backend contract.
_MOVES = (
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, _SQRT2),
    (1, -1, _SQRT2),
    (-1, 1, _SQRT2),
    (-1, -1, _SQRT2),
)


def step_positions(pos, shepherd, repulsion_gain, attraction_gain, shepherd_gain,
                   sensing_radius, speed_cap, saturation, isolated_feel_shepherd,
                   out_pos, out_vel):
    """Advance every sheep one tick against the frozen state ``pos``.

    Writes new positions and applied movements into ``out_pos`` / ``out_vel``
    (both (N, 2) float64).  Returns -1 on success, or the index of a sheep
    involved in a near-coincident (< 1e-9) interacting pair.
    """
    n = pos.shape[0]
    xs = pos[:, 0].tolist()
    ys = pos[:, 1].tolist()
    sx = float(shepherd[0])
    sy = float(shepherd[1])
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        count = 0
        s1x = 0.0  # sum of (x_j - x_i) / d^3 over sensed flockmates
        s1y = 0.0
        s2x = 0.0  # sum of (x_j - x_i) / d
        s2y = 0.0
        for j in range(n):
            if j == i:
                continue
            dx = xs[j] - xi
            dy = ys[j] - yi
            d = math.sqrt(dx * dx + dy * dy)
            if d < sensing_radius:
                if d < 1e-9:
                    return i
                d3 = d * d * d
                s1x += dx / d3
                s1y += dy / d3
                s2x += dx / d
                s2y += dy / d
                count += 1
        if count == 0 and not isolated_feel_shepherd:
            # no flockmates in range: every force term is zeroed
            out_pos[i, 0] = xi
            out_pos[i, 1] = yi
            out_vel[i, 0] = 0.0
            out_vel[i, 1] = 0.0
            continue
        dsx = sx - xi
        dsy = sy - yi
        ds = math.sqrt(dsx * dsx + dsy * dsy)
        if ds < 1e-9:
            return i
        ds3 = ds * ds * ds
        v3x = -(dsx / ds3)
        v3y = -(dsy / ds3)
        if count == 0:
            mx = shepherd_gain * v3x
            my = shepherd_gain * v3y
        else:
            v1x = -(s1x / count)
            v1y = -(s1y / count)
            v2x = s2x / count
            v2y = s2y / count
            mx = repulsion_gain * v1x + attraction_gain * v2x + shepherd_gain * v3x
            my = repulsion_gain * v1y + attraction_gain * v2y + shepherd_gain * v3y
        if saturation:
            m = math.sqrt(mx * mx + my * my)
            if m > speed_cap:
                scale = speed_cap / m
                mx = mx * scale
                my = my * scale
        out_pos[i, 0] = xi + mx
        out_pos[i, 1] = yi + my
        out_vel[i, 0] = mx
        out_vel[i, 1] = my
    return -1


def astar_grid(blocked, width, height, start, goal):
    """8-connected A* over a flat row-major occupancy grid.

    ``blocked`` is indexable by cell index (bytes or uint8 buffer) with
    truthy entries for blocked cells.  Returns the list of cell indices from
    ``start`` to ``goal`` inclusive, or None when no path exists.  Axial
    moves cost 1, diagonal moves sqrt(2) and may not cut corners (both
    touched axial cells must be free).  The octile heuristic plus the
    (f, h, cell, push-order) key makes expansion order fully deterministic.
    """
    if start == goal:
        return [start]
    size = width * height
    g = [math.inf] * size
    parent = [-1] * size
    closed = bytearray(size)
    gx = goal % width
    gy = goal // width

    g[start] = 0.0
    h0 = _octile(start % width, start // width, gx, gy)
    heap = [(h0, h0, start, 0)]
    pushes = 1
    while heap:
        _f, _h, cur, _tag = heapq.heappop(heap)
        if closed[cur]:
            continue
        closed[cur] = 1
        if cur == goal:
            path = [cur]
            while parent[cur] >= 0:
                cur = parent[cur]
                path.append(cur)
            path.reverse()
            return path
        x = cur % width
        y = cur // width
        gc = g[cur]
        for mx, my, cost in _MOVES:
            nx = x + mx
            ny = y + my
            if nx < 0 or nx >= width or ny < 0 or ny >= height:
                continue
            nidx = ny * width + nx
            if blocked[nidx] or closed[nidx]:
                continue
            if mx != 0 and my != 0:
                if blocked[y * width + nx] or blocked[ny * width + x]:
                    continue
            ng = gc + cost
            if ng < g[nidx]:
                g[nidx] = ng
                parent[nidx] = cur
                nh = _octile(nx, ny, gx, gy)
                heapq.heappush(heap, (ng + nh, nh, nidx, pushes))
                pushes += 1
    return None


def _octile(x, y, gx, gy):
    dx = x - gx
    if dx < 0:
        dx = -dx
    dy = y - gy
    if dy < 0:
        dy = -dy
    if dx < dy:
        lo, hi = dx, dy
    else:
        lo, hi = dy, dx
    return (hi - lo) + _SQRT2 * lo
