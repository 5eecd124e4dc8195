"""Shared fixtures-as-functions for the test modules."""

from __future__ import annotations

import itertools
import random

from planartww.embedding import RotationSystem, components, trace_faces


def k4() -> RotationSystem:
    """Outer triangle 0,1,2 with 3 in the middle."""
    return RotationSystem.from_lists({0: [1, 3, 2], 1: [2, 3, 0], 2: [0, 3, 1], 3: [0, 1, 2]}, (0, 1))


def triangle() -> RotationSystem:
    return RotationSystem.from_lists({0: [1, 2], 1: [2, 0], 2: [0, 1]}, (0, 1))


def path(n: int) -> RotationSystem:
    rot = {v: [w for w in (v - 1, v + 1) if 0 <= w < n] for v in range(n)}
    return RotationSystem.from_lists(rot, (0, 1) if n > 1 else None)


def two_edges() -> RotationSystem:
    return RotationSystem.from_lists({0: [1], 1: [0], 2: [3], 3: [2]}, (0, 1))


def cut_vertices_bruteforce(adj) -> set[int]:
    """Vertices whose removal disconnects the graph, by exhaustive removal."""
    base = len(components(adj))
    out = set()
    for v in adj:
        rest = {u: [w for w in ns if w != v] for u, ns in adj.items() if u != v}
        if rest and len(components(rest)) > base:
            out.add(v)
    return out


def is_induced_subgraph(small: RotationSystem, big: RotationSystem) -> bool:
    sa, ba = small.adjacency(), big.adjacency()
    return all(v in ba and ba[v] & set(sa) == sa[v] for v in sa)


def all_faces_triangles(rs: RotationSystem) -> bool:
    return all(len(f) == 3 and f.is_cycle() for f in trace_faces(rs))


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def graph_from_mask(n: int, mask: int) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for i, (u, v) in enumerate(itertools.combinations(range(n), 2)):
        if mask >> i & 1:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def complete(n: int) -> dict[int, set[int]]:
    return {v: set(range(n)) - {v} for v in range(n)}
