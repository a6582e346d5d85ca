"""Small reference graphs with known centralities."""

from __future__ import annotations

from .graphcore import DirectedGraph, from_edge_list

# Vertex 3 is a pure source feeding a bidirectional pair.
THREE_VERTEX_EDGES = ((1, 2), (2, 1), (3, 1), (3, 2))

# Vertices 1 and 3 have in-degree 2 and out-degree 1.  Both edge sets fit
# that degree signature and are isomorphic (swap vertices 2 and 4).
FOUR_VERTEX_A_EDGES = ((2, 1), (2, 3), (4, 1), (4, 3), (1, 2), (3, 4))
FOUR_VERTEX_B_EDGES = ((2, 1), (2, 3), (4, 1), (4, 3), (1, 4), (3, 2))


def three_vertex() -> DirectedGraph:
    return from_edge_list(3, THREE_VERTEX_EDGES)


def four_vertex_a() -> DirectedGraph:
    return from_edge_list(4, FOUR_VERTEX_A_EDGES)


def four_vertex_b() -> DirectedGraph:
    return from_edge_list(4, FOUR_VERTEX_B_EDGES)


def directed_cycle(n: int = 3) -> DirectedGraph:
    return from_edge_list(n, [(i, i % n + 1) for i in range(1, n + 1)])


def undirected_path(n: int) -> DirectedGraph:
    edges = [(i, i + 1) for i in range(1, n)] + [(i + 1, i) for i in range(1, n)]
    return from_edge_list(n, edges)
