"""Combinatorial plane embeddings given as rotation systems.

A rotation system lists, for every vertex, its neighbours in cyclic order.
Faces are traced with the rule: after the dart ``u -> v`` comes the dart
``v -> w`` where ``w`` follows ``u`` in the rotation at ``v``.  Under this
rule the face of a dart ``u -> v`` occupies the corner between ``u`` and its
successor at ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Dart = tuple[int, int]


class EmbeddingError(ValueError):
    """Inconsistent rotation system or an embedding that is not planar."""


@dataclass(frozen=True)
class FaceWalk:
    id: int
    darts: tuple[Dart, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        """Vertices in walk order (may repeat when the face is not a cycle)."""
        return tuple(u for u, _ in self.darts)

    def __len__(self) -> int:
        return len(self.darts)

    def is_cycle(self) -> bool:
        vs = self.vertices
        return len(vs) >= 3 and len(set(vs)) == len(vs)


@dataclass(frozen=True)
class RotationSystem:
    """Per-vertex cyclic neighbour orders plus a dart on the outer face."""

    rotation: Mapping[int, tuple[int, ...]]
    outer: Dart | None = None

    @classmethod
    def from_lists(cls, rotation: Mapping[int, Iterable[int]], outer: Dart | None = None) -> RotationSystem:
        return cls({v: tuple(ns) for v, ns in sorted(rotation.items())}, outer)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rotation)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, ns in self.rotation.items() for v in ns if u < v)

    @property
    def num_edges(self) -> int:
        return sum(len(ns) for ns in self.rotation.values()) // 2

    def adjacency(self) -> dict[int, frozenset[int]]:
        return {v: frozenset(ns) for v, ns in self.rotation.items()}

    def successor(self, v: int, u: int) -> int:
        ns = self.rotation[v]
        return ns[(ns.index(u) + 1) % len(ns)]

    def with_outer(self, dart: Dart | None) -> RotationSystem:
        return RotationSystem(self.rotation, dart)

    def restrict(self, keep: Iterable[int]) -> RotationSystem:
        """Delete all vertices outside ``keep``; rotations of survivors keep their order."""
        keep = set(keep)
        rot = {v: tuple(w for w in ns if w in keep) for v, ns in self.rotation.items() if v in keep}
        outer = self.outer if self.outer and self.outer[0] in keep and self.outer[1] in keep else None
        return RotationSystem(rot, outer)

    def check_structure(self) -> None:
        """Symmetric, loop-free, duplicate-free rotations over known vertices."""
        for v, ns in self.rotation.items():
            if len(set(ns)) != len(ns):
                raise EmbeddingError(f"rotation at {v} repeats a neighbour")
            for w in ns:
                if w == v:
                    raise EmbeddingError(f"loop at {v}")
                if w not in self.rotation:
                    raise EmbeddingError(f"rotation at {v} mentions unknown vertex {w}")
                if v not in self.rotation[w]:
                    raise EmbeddingError(f"neighbour {w} of {v} does not list {v} in its rotation")
        if self.outer is not None:
            u, v = self.outer
            if u not in self.rotation or v not in self.rotation[u]:
                raise EmbeddingError(f"outer dart {self.outer} is not an edge")

    def validate(self) -> list[FaceWalk]:
        """Raise EmbeddingError unless this is a valid genus-0 embedding.

        Each component with at least one edge must satisfy ``V - E + F = 2``.
        Returns the traced faces.
        """
        self.check_structure()
        faces = trace_faces(self)
        face_of = face_index(faces)
        comp = components(self.adjacency())
        for part in comp:
            if len(part) == 1:
                continue
            e = sum(len(self.rotation[v]) for v in part) // 2
            f = len({face_of[(v, w)] for v in part for w in self.rotation[v]})
            chi = len(part) - e + f
            if chi != 2:
                raise EmbeddingError(
                    f"Euler check failed: V - E + F = {len(part)} - {e} + {f} = {chi} != 2"
                    f" on the component containing {min(part)}"
                )
        return faces

    def is_valid(self) -> bool:
        try:
            self.validate()
        except EmbeddingError:
            return False
        return True


def components(adj: Mapping[int, Iterable[int]]) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        part = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    part.append(w)
                    queue.append(w)
        out.append(frozenset(part))
    return out


def trace_faces(rs: RotationSystem) -> list[FaceWalk]:
    """Partition the darts of ``rs`` into face walks.

    Faces are numbered in the order their first dart is met when scanning
    vertices by ascending id and darts in rotation order.
    """
    rot = rs.rotation
    # nxt[(a, b)] is the dart after a -> b on its face: b -> successor of a at b
    nxt: dict[Dart, Dart] = {}
    for b, ns in rot.items():
        k = len(ns)
        if len(set(ns)) != k:
            raise EmbeddingError(f"rotation at {b} repeats a neighbour")
        for i, a in enumerate(ns):
            nxt[(a, b)] = (b, ns[(i + 1) % k]) if k > 1 else (b, a)
    seen: set[Dart] = set()
    faces: list[FaceWalk] = []
    for u in sorted(rot):
        for v in rot[u]:
            start = (u, v)
            if start in seen:
                continue
            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                try:
                    d = nxt[d]
                except KeyError:
                    raise EmbeddingError(f"{d[1]} does not list {d[0]} in its rotation") from None
            if d != start:
                raise EmbeddingError(f"face walk from {start} does not close")
            faces.append(FaceWalk(len(faces), tuple(walk)))
    return faces


def face_index(faces: Sequence[FaceWalk]) -> dict[Dart, int]:
    return {d: f.id for f in faces for d in f.darts}


def outer_face_id(rs: RotationSystem, faces: Sequence[FaceWalk] | None = None) -> int:
    """Id of the face holding ``rs.outer`` (the first traced face if unset)."""
    faces = trace_faces(rs) if faces is None else faces
    if not faces:
        raise EmbeddingError("embedding has no faces")
    if rs.outer is None:
        return faces[0].id
    try:
        return face_index(faces)[rs.outer]
    except KeyError:
        raise EmbeddingError(f"outer dart {rs.outer} is not an edge") from None


# -- augmentation ------------------------------------------------------------


def star_augment(rs: RotationSystem) -> RotationSystem:
    """Add one fresh vertex inside every face, joined to the face's distinct vertices.

    A vertex that occurs several times on a face walk is joined only at its
    first corner, so the result stays simple.  Fresh ids continue after the
    largest existing id in face order.
    """
    faces = trace_faces(rs)
    rot = {v: list(ns) for v, ns in rs.rotation.items()}
    nxt = max(rot, default=-1) + 1
    for face in faces:
        f = nxt
        nxt += 1
        order = []
        used: set[int] = set()
        for a, b in face.darts:
            # corner at b between a and its successor; the face lies there
            if b in used:
                continue
            used.add(b)
            order.append(b)
            ns = rot[b]
            ns.insert(ns.index(a) + 1, f)
        rot[f] = order[::-1]
    out = RotationSystem.from_lists(rot, rs.outer)
    return out


def is_triangulation(rs: RotationSystem) -> bool:
    """Simple, connected, 2-connected, and every face a 3-cycle."""
    if len(rs.rotation) < 3:
        return False
    try:
        rs.check_structure()
        faces = trace_faces(rs)
    except EmbeddingError:
        return False
    if any(len(f) != 3 or not f.is_cycle() for f in faces):
        return False
    if len(components(rs.adjacency())) != 1:
        return False
    if not rs.is_valid():
        return False
    return not articulation_points(rs.adjacency())


def articulation_points(adj: Mapping[int, Iterable[int]]) -> set[int]:
    """Cut vertices of an undirected graph (iterative Hopcroft-Tarjan)."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    t = 0
    for s in sorted(adj):
        if s in disc:
            continue
        disc[s] = low[s] = t
        t += 1
        root_children = 0
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            v, parent, it = stack[-1]
            for w in it:
                if w not in disc:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, v, iter(adj[w])))
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if p == s:
                        root_children += 1
                    elif low[v] >= disc[p]:
                        cuts.add(p)
        if root_children > 1:
            cuts.add(s)
    return cuts


def _connect_components(rs: RotationSystem) -> RotationSystem:
    """Join every component (isolated vertices included) to one fresh hub vertex."""
    comps = components(rs.adjacency())
    rot = {v: list(ns) for v, ns in rs.rotation.items()}
    hub = max(rot) + 1
    spokes = []
    for part in comps:
        v = min(part)
        spokes.append(v)
        rot[v].insert(0, hub)
    rot[hub] = spokes
    return RotationSystem.from_lists(rot, rs.outer)


class TriangulationError(RuntimeError):
    pass


def make_triangulation(rs: RotationSystem, max_rounds: int = 3) -> RotationSystem:
    """Extend ``rs`` by fresh vertices only, until it is a 2-connected plane triangulation.

    A graph that is disconnected or has no edges first gets a hub vertex
    joined to the smallest vertex of each component; then star augmentation
    is repeated (at most ``max_rounds`` times) until every face is a
    triangle.  The input stays an induced subgraph of the output.
    """
    rs.validate()
    if not rs.rotation:
        raise EmbeddingError("cannot triangulate the empty graph")
    cur = rs
    if is_triangulation(cur):
        return cur
    if len(components(cur.adjacency())) > 1 or cur.num_edges == 0:
        cur = _connect_components(cur)
    for _ in range(max_rounds):
        cur = star_augment(cur)
        if is_triangulation(cur):
            return cur
    raise TriangulationError(f"no triangulation after {max_rounds} augmentation rounds")


# -- cycles ------------------------------------------------------------------


def cycle_sides(
    rs: RotationSystem,
    cycle: Sequence[int],
    outer: int,
    faces: Sequence[FaceWalk] | None = None,
) -> tuple[frozenset[int], frozenset[int]]:
    """Split the faces of ``rs`` along a simple cycle.

    Faces reachable from face ``outer`` in the dual without crossing an edge
    of ``cycle`` form the exterior; all others are interior.  Returns the
    interior face ids and the vertices strictly inside (those off the cycle
    and incident to no exterior face).
    """
    faces = trace_faces(rs) if faces is None else faces
    face_of = face_index(faces)
    k = len(cycle)
    cyc_edges = set()
    for i in range(k):
        u, v = cycle[i], cycle[(i + 1) % k]
        if (u, v) not in face_of:
            raise EmbeddingError(f"cycle edge {{{u}, {v}}} is not in the graph")
        cyc_edges.add(frozenset((u, v)))
    if not 0 <= outer < len(faces):
        raise EmbeddingError(f"unknown face id {outer}")
    exterior = {outer}
    queue = deque([outer])
    while queue:
        f = queue.popleft()
        for u, v in faces[f].darts:
            if frozenset((u, v)) in cyc_edges:
                continue
            g = face_of[(v, u)]
            if g not in exterior:
                exterior.add(g)
                queue.append(g)
    interior_faces = frozenset(f.id for f in faces if f.id not in exterior)
    on_cycle = set(cycle)
    touched = {u for f in exterior for u, _ in faces[f].darts}
    inside = frozenset(v for v in rs.rotation if v not in on_cycle and v not in touched and rs.rotation[v])
    return interior_faces, inside
