"""Small named graphs used as structure graphs and fixtures."""

from __future__ import annotations

from .graph import DirectedGraph

__all__ = ["bowtie_graph", "cycle_graph", "hub_authority_graph", "path_graph"]


def path_graph(n: int) -> DirectedGraph:
    """Directed path ``0 -> 1 -> ... -> n-1``."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return DirectedGraph.from_edges(n, [(k, k + 1) for k in range(n - 1)])


def cycle_graph(n: int) -> DirectedGraph:
    """Directed cycle ``0 -> 1 -> ... -> n-1 -> 0``."""
    if n < 1:
        raise ValueError("cycle needs at least one vertex")
    return DirectedGraph.from_edges(n, [(k, (k + 1) % n) for k in range(n)])


def hub_authority_graph() -> DirectedGraph:
    """The single edge ``hub -> authority``."""
    return DirectedGraph.from_edges(2, [(0, 1)], labels=["hub", "authority"])


def bowtie_graph(left: int, right: int) -> DirectedGraph:
    """Directed bow-tie: ``left`` vertices point to a center that points to
    ``right`` vertices.

    Vertex 0 is the center, then come the left wing and the right wing.  The
    center has in-degree ``left`` and out-degree ``right``.
    """
    if left < 1 or right < 1:
        raise ValueError("both wings need at least one vertex")
    edges = [(k, 0) for k in range(1, left + 1)]
    edges += [(0, k) for k in range(left + 1, left + right + 1)]
    return DirectedGraph.from_edges(1 + left + right, edges)
