"""Path distances ``d_omega`` on the vertex set of a weighted graph."""
from __future__ import annotations

import heapq
import itertools
import math
from typing import Mapping

from .cellcomplex import WeightedGraph, as_graph, edge_key


def edge_length(omega: Mapping | None, u, v):
    return 1 if omega is None else omega[edge_key(u, v)]


def path_distance(g, omega: Mapping | None = None, source=None, skip_edge=None) -> dict:
    """Single-source shortest-path lengths with edge lengths ``omega`` (default 1).

    Unreachable vertices get ``math.inf``. ``skip_edge`` removes one edge
    from the graph for the search. Lengths may be exact rationals, in which
    case distances are exact too.
    """
    g = as_graph(g)
    skip = edge_key(*skip_edge) if skip_edge is not None else None
    dist = {v: math.inf for v in g.vertices}
    dist[source] = 0
    counter = itertools.count()
    heap = [(0, next(counter), source)]
    done = set()
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for w in g.neighbors(u):
            if skip is not None and edge_key(u, w) == skip:
                continue
            nd = d + edge_length(omega, u, w)
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, next(counter), w))
    return dist


def all_pairs_distance(g, omega: Mapping | None = None) -> dict:
    g = as_graph(g)
    return {s: path_distance(g, omega, s) for s in g.vertices}


def diameter(g, omega: Mapping | None = None):
    """Largest pairwise distance (``math.inf`` when disconnected)."""
    g = as_graph(g)
    best = 0
    for s, row in all_pairs_distance(g, omega).items():
        best = max([best] + list(row.values()))
    return best


def find_degenerate_edge(g, omega: Mapping):
    """First edge ``(v, w)`` (sorted order) that is not the unique shortest path, else None."""
    g = as_graph(g)
    for v, w in g.edges:
        alt = path_distance(g, omega, v, skip_edge=(v, w))[w]
        if not alt > omega[(v, w)]:
            return (v, w)
    return None


def is_nondegenerate(g, omega: Mapping) -> tuple[bool, tuple | None]:
    """``(True, None)`` iff every edge is the strict unique shortest path between its ends."""
    if any(not (val > 0) for val in omega.values()):
        raise ValueError("omega must be strictly positive")
    bad = find_degenerate_edge(g, omega)
    return bad is None, bad


class DegenerateOmegaError(ValueError):
    def __init__(self, edge):
        super().__init__(f"omega is degenerate: edge {edge} is not the unique shortest path")
        self.edge = edge


def bfs_eccentricities(g: WeightedGraph) -> dict:
    """Combinatorial eccentricity of every vertex by breadth-first search."""
    out = {}
    for s in g.vertices:
        seen = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in g.neighbors(u):
                    if w not in seen:
                        seen[w] = seen[u] + 1
                        nxt.append(w)
            frontier = nxt
        out[s] = max(seen.values()) if len(seen) == len(g.vertices) else math.inf
    return out
