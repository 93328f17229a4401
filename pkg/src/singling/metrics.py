"""Interaction graph of the remaining swarm and component statistics.

The graph excludes the target sheep; an edge joins two sheep whose distance
is strictly below the sensing radius, mirroring the open sensing disc.  The
headline statistic is the size of the largest connected component divided
by the node count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SwarmState, neighbor_set


@dataclass(frozen=True)
class InteractionGraph:
    """Undirected sensing graph over every sheep except the target."""

    nodes: tuple[int, ...]
    edges: frozenset[frozenset[int]]


def _pairwise_inside(positions: np.ndarray, radius: float) -> np.ndarray:
    """Boolean adjacency: strict distance < radius, diagonal False."""
    dx = positions[:, 0][:, None] - positions[:, 0][None, :]
    dy = positions[:, 1][:, None] - positions[:, 1][None, :]
    d = np.sqrt(dx * dx + dy * dy)
    adj = d < radius
    np.fill_diagonal(adj, False)
    return adj


def interaction_graph(state: SwarmState, target: int, radius: float) -> InteractionGraph:
    """Sensing-disc adjacency over every sheep except ``target``."""
    n = state.n
    if not 0 <= target < n:
        raise IndexError(f"target id {target} out of range for swarm of {n}")
    if n < 2:
        raise ValueError("need at least 2 sheep to form a remaining-swarm graph")
    nodes = tuple(i for i in range(n) if i != target)
    idx = np.array(nodes, dtype=np.intp)
    adj = _pairwise_inside(state.positions[idx], radius)
    m = len(nodes)
    edges = frozenset(
        frozenset((nodes[a], nodes[b]))
        for a in range(m)
        for b in range(a + 1, m)
        if adj[a, b]
    )
    return InteractionGraph(nodes, edges)


def _component_sizes_adj(adj: np.ndarray) -> list[int]:
    """Connected component sizes of a boolean adjacency matrix (BFS)."""
    m = adj.shape[0]
    seen = np.zeros(m, dtype=bool)
    sizes = []
    for s in range(m):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        size = 0
        while stack:
            v = stack.pop()
            size += 1
            fresh = np.nonzero(adj[v] & ~seen)[0]
            seen[fresh] = True
            stack.extend(fresh.tolist())
        sizes.append(size)
    return sizes


def component_sizes(graph: InteractionGraph) -> list[int]:
    """Connected component sizes, descending."""
    index = {node: i for i, node in enumerate(graph.nodes)}
    m = len(graph.nodes)
    adj = np.zeros((m, m), dtype=bool)
    for edge in graph.edges:
        pair = sorted(edge)
        if len(pair) != 2:
            raise ValueError(f"malformed edge {edge}")
        a, b = index[pair[0]], index[pair[1]]
        adj[a, b] = True
        adj[b, a] = True
    return sorted(_component_sizes_adj(adj), reverse=True)


def max_component_fraction(graph: InteractionGraph) -> float:
    """Largest component size over node count, in (0, 1]."""
    if not graph.nodes:
        raise ValueError("graph has no nodes")
    return component_sizes(graph)[0] / len(graph.nodes)


def connectivity_stats(state: SwarmState, target: int, radius: float) -> tuple[int, int]:
    """(largest component size, node count) of the remaining-swarm graph.

    Fast path for the per-tick loop; avoids building edge sets.
    """
    n = state.n
    if not 0 <= target < n:
        raise IndexError(f"target id {target} out of range for swarm of {n}")
    if n < 2:
        raise ValueError("need at least 2 sheep to form a remaining-swarm graph")
    idx = np.array([i for i in range(n) if i != target], dtype=np.intp)
    adj = _pairwise_inside(state.positions[idx], radius)
    return max(_component_sizes_adj(adj)), len(idx)


def is_separated(state: SwarmState, target: int, radius: float) -> bool:
    """True iff the target has no sheep strictly inside its sensing disc."""
    return len(neighbor_set(state, target, radius)) == 0
