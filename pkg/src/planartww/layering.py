"""BFS trees, the layerings they induce, and vertical paths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class LayeringError(ValueError):
    pass


@dataclass(frozen=True)
class BfsTree:
    root: int
    parent: Mapping[int, int]
    depth: Mapping[int, int]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.depth)

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in self.depth}
        for v, p in self.parent.items():
            ch[p].append(v)
        for lst in ch.values():
            lst.sort()
        return ch

    def leaves(self) -> list[int]:
        """Childless vertices other than the root (a lone root counts as a leaf)."""
        if len(self.depth) == 1:
            return [self.root]
        has_child = set(self.parent.values())
        return sorted(v for v in self.depth if v != self.root and v not in has_child)

    def path_to_root(self, v: int) -> list[int]:
        out = [v]
        while v != self.root:
            v = self.parent[v]
            out.append(v)
        return out

    def is_tree_edge(self, u: int, v: int) -> bool:
        return self.parent.get(u) == v or self.parent.get(v) == u

    def restrict(self, keep: Iterable[int]) -> BfsTree:
        """Drop vertices; the caller guarantees the survivors stay closed under ``parent``."""
        keep = set(keep)
        if self.root not in keep:
            raise LayeringError("cannot drop the root")
        parent = {v: p for v, p in self.parent.items() if v in keep}
        for v, p in parent.items():
            if p not in keep:
                raise LayeringError(f"dropping {p} orphans {v}")
        return BfsTree(self.root, parent, {v: d for v, d in self.depth.items() if v in keep})


def bfs_tree(adj: Mapping[int, Iterable[int]], root: int) -> BfsTree:
    """Breadth-first spanning tree; ties broken by ascending vertex id."""
    if root not in adj:
        raise LayeringError(f"root {root} not in graph")
    parent: dict[int, int] = {}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in depth:
                depth[w] = depth[v] + 1
                parent[w] = v
                queue.append(w)
    if len(depth) != len(adj):
        raise LayeringError("graph is disconnected")
    return BfsTree(root, parent, depth)


def bfs_distances(adj: Mapping[int, Iterable[int]], root: int) -> dict[int, int]:
    dist = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


@dataclass(frozen=True)
class Layering:
    """Ordered vertex partition, stored as a vertex -> layer index map."""

    index: Mapping[int, int] = field(default_factory=dict)

    @property
    def layers(self) -> list[frozenset[int]]:
        if not self.index:
            return []
        out: list[set[int]] = [set() for _ in range(max(self.index.values()) + 1)]
        for v, i in self.index.items():
            out[i].add(v)
        return [frozenset(s) for s in out]

    def __getitem__(self, v: int) -> int:
        return self.index[v]

    def violations(self, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
        return [(u, v) for u, v in edges if abs(self.index[u] - self.index[v]) > 1]

    def is_valid_for(self, edges: Iterable[tuple[int, int]]) -> bool:
        return not self.violations(edges)


def layering_of(t: BfsTree) -> Layering:
    return Layering(dict(t.depth))


def is_vertical(t: BfsTree, path: Sequence[int]) -> bool:
    """True iff ``path`` is a subpath of some leaf-to-root path of ``t``."""
    if not path or any(v not in t.depth for v in path):
        return False
    if len(path) == 1:
        return True
    up = all(t.parent.get(path[i]) == path[i + 1] for i in range(len(path) - 1))
    down = all(t.parent.get(path[i + 1]) == path[i] for i in range(len(path) - 1))
    return up or down
