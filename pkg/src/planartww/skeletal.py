"""Layered skeletal trigraphs and the splendid-state checker.

A state bundles the trigraph ``h``, a plane skeleton (a 2-connected plane
subgraph of ``h`` given by its rotation system), a BFS tree of the skeleton,
a layering of ``h``, and one record per skeleton face holding the vertices
of ``h`` assigned to that face.

The checker names each rule it enforces:

``skeleton``      skeleton edges exist in ``h``, no red edge joins two skeleton
                  vertices, the skeleton is a connected genus-0 embedding whose
                  faces are all cycles.
``assignment``    face sets partition the non-skeleton vertices; every
                  component off the skeleton sits in one face and touches the
                  skeleton only on that face's boundary.
``layering``      every edge of ``h`` spans at most one layer boundary.
``layer-size``    empty skeleton: at most 4 vertices per layer.
``face-status``   at most one rich face, no face over the rich limit, every
                  empty face is a triangle.
``tree``          the tree spans the skeleton, is a shortest-path tree, and its
                  depths equal the layering on skeleton vertices.
``sink``          every non-empty face splits into two vertical paths meeting at
                  its sink plus one extra edge.
``below-sink``    the face set and boundary (minus the sink) lie strictly below
                  the sink; vertices one layer below it are black neighbours.
``rich-budget``   red-edge budgets 3 / 4 / 2 inside the rich face.
``red-degree``    maximum red degree is at most 11.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .embedding import Dart, EmbeddingError, RotationSystem, face_index, outer_face_id, trace_faces
from .layering import BfsTree, Layering, bfs_distances, bfs_tree
from .trigraph import Trigraph

MAX_RED_DEGREE = 11
EMPTY_SKELETON_LAYER_CAP = 4
RICH_LAYER_CAP = 3


class FaceStatus(str, Enum):
    EMPTY = "empty"
    REDUCED = "reduced"
    RICH = "rich"
    OVERFULL = "overfull"


class NotSplendidError(ValueError):
    """A state violates a rule the engine relies on."""

    def __init__(self, message: str, violations: Sequence[Violation] = ()) -> None:
        super().__init__(message)
        self.violations = list(violations)


def canonical_darts(darts: Sequence[Dart]) -> tuple[Dart, ...]:
    """Rotate a closed dart walk so that its smallest dart comes first."""
    i = min(range(len(darts)), key=darts.__getitem__)
    return tuple(darts[i:]) + tuple(darts[:i])


@dataclass(frozen=True)
class FaceRecord:
    id: int
    darts: tuple[Dart, ...]
    assigned: frozenset[int] = frozenset()
    sink: int | None = None
    status: FaceStatus = FaceStatus.EMPTY

    @cached_property
    def boundary(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.darts)

    @cached_property
    def key(self) -> tuple[Dart, ...]:
        return canonical_darts(self.darts)


@dataclass
class SkeletalState:
    """Snapshot of a layered skeletal trigraph; treat as immutable."""

    h: Trigraph
    layering: Layering
    skeleton: RotationSystem | None
    tree: BfsTree | None
    faces: tuple[FaceRecord, ...]
    part_map: Mapping[int, frozenset[int]]
    # engine bookkeeping, never copied by dataclasses.replace
    cache: object = field(default=None, init=False, repr=False, compare=False)
    focus: int | None = field(default=None, init=False, repr=False, compare=False)  # position of the only face that may be crowded
    skeleton_vertices: frozenset[int] = field(init=False)
    face_by_id: dict[int, FaceRecord] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.skeleton_vertices = frozenset(self.skeleton.rotation) if self.skeleton else frozenset()
        self.face_by_id = {f.id: f for f in self.faces}
        if len(self.face_by_id) != len(self.faces):
            raise ValueError("face ids must be unique")

    @property
    def has_skeleton(self) -> bool:
        return bool(self.skeleton_vertices)

    @property
    def measure(self) -> int:
        return len(self.h) + len(self.skeleton_vertices)

    def face(self, face_id: int) -> FaceRecord:
        return self.face_by_id[face_id]

    def outer_face(self) -> FaceRecord | None:
        if not self.skeleton or self.skeleton.outer is None:
            return None
        for f in self.faces:
            if self.skeleton.outer in f.darts:
                return f
        return None


# -- face helpers ------------------------------------------------------------


def layer_counts(vertices: Iterable[int], layer: Mapping[int, int]) -> Counter[int]:
    return Counter(layer[v] for v in vertices)


def status_of(assigned: Iterable[int], layer: Mapping[int, int]) -> FaceStatus:
    if not assigned:
        return FaceStatus.EMPTY
    counts = layer_counts(assigned, layer)
    if not counts:
        return FaceStatus.EMPTY
    top = max(counts.values())
    if top <= 1:
        return FaceStatus.REDUCED
    if top <= RICH_LAYER_CAP:
        return FaceStatus.RICH
    return FaceStatus.OVERFULL


def classify_face(state: SkeletalState, face: FaceRecord) -> FaceStatus:
    return status_of(face.assigned, state.layering.index)


def sink_of_cycle(boundary: Sequence[int], tree: BfsTree) -> int:
    """The vertex where the cycle splits into two descending tree paths.

    Raises NotSplendidError if no edge of the cycle leaves two vertical paths
    that meet in one vertex.
    """
    k = len(boundary)
    if k < 3 or len(set(boundary)) != k:
        raise NotSplendidError(f"face boundary {tuple(boundary)} is not a cycle")
    depth = tree.depth
    try:
        top = min(depth[v] for v in boundary)
    except KeyError as exc:
        raise NotSplendidError(f"boundary vertex {exc.args[0]} not in tree") from None
    tops = [i for i, v in enumerate(boundary) if depth[v] == top]
    if len(tops) != 1:
        raise NotSplendidError(f"cycle {tuple(boundary)} has {len(tops)} vertices closest to the root")
    i0 = tops[0]
    parent = tree.parent

    def run(step: int) -> int:
        n = 0
        cur = boundary[i0]
        while n < k - 1:
            nxt = boundary[(i0 + step * (n + 1)) % k]
            if parent.get(nxt) != cur:
                break
            cur = nxt
            n += 1
        return n

    p, q = run(1), run(-1)
    if p < 1 or q < 1 or p + q != k - 1:
        raise NotSplendidError(f"cycle {tuple(boundary)} is not two vertical paths plus one edge")
    return boundary[i0]


def face_sink(state: SkeletalState, face: FaceRecord) -> int:
    if state.tree is None:
        raise NotSplendidError("state has no skeleton tree")
    return sink_of_cycle(face.boundary, state.tree)


def make_face(face_id: int, darts: Sequence[Dart], assigned: frozenset[int], tree: BfsTree, layer: Mapping[int, int]) -> FaceRecord:
    status = status_of(assigned, layer)
    sink = None
    if status is not FaceStatus.EMPTY:
        try:
            sink = sink_of_cycle([u for u, _ in darts], tree)
        except NotSplendidError:
            sink = None
    return FaceRecord(face_id, tuple(darts), assigned, sink, status)


def initial_state(gplus: RotationSystem, root: int, n_original: int | None = None) -> SkeletalState:
    """The state whose trigraph and skeleton are both ``gplus``.

    The outer face is re-designated to a face incident to ``root``.
    ``part_map`` maps every vertex to itself.
    """
    gplus.validate()
    rot = gplus.rotation
    if not rot.get(root):
        raise EmbeddingError(f"root {root} has no neighbours")
    skel = gplus.with_outer((root, rot[root][0]))
    h = Trigraph(gplus.adjacency())
    tree = bfs_tree(rot, root)
    layering = Layering(dict(tree.depth))
    faces = tuple(
        make_face(f.id, f.darts, frozenset(), tree, layering.index) for f in trace_faces(skel)
    )
    part_map = {v: frozenset((v,)) for v in rot}
    return SkeletalState(h, layering, skel, tree, faces, part_map)


# -- checker -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


@dataclass
class SplendidReport:
    violations: list[Violation]
    max_red_degree: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return f"splendid (max red degree {self.max_red_degree})"
        return "not splendid:\n" + "\n".join(f"  {v}" for v in self.violations)


def check_splendid(state: SkeletalState, original: Iterable[int] | None = None) -> SplendidReport:
    """Check every rule of a splendid layered skeletal trigraph; never raises.

    ``original`` (optional) is the vertex set ``part_map`` must partition.
    """
    out: list[Violation] = []

    def bad(rule: str, detail: str) -> None:
        out.append(Violation(rule, detail))

    h = state.h
    layer = state.layering.index
    mrd = h.max_red_degree()

    # layering and bookkeeping
    if set(layer) != set(h.vertices):
        bad("layering", "layering does not cover exactly the vertices of h")
    else:
        for u, v in h.black_edges() + h.red_edges():
            if abs(layer[u] - layer[v]) > 1:
                bad("layering", f"edge {{{u}, {v}}} spans layers {layer[u]} and {layer[v]}")
    if set(state.part_map) != set(h.vertices):
        bad("assignment", "part_map keys differ from the vertices of h")
    else:
        seen: set[int] = set()
        total = 0
        for part in state.part_map.values():
            total += len(part)
            seen |= part
        if total != len(seen):
            bad("assignment", "part_map images overlap")
        if original is not None and seen != set(original):
            bad("assignment", "part_map images do not cover the original vertex set")

    if mrd > MAX_RED_DEGREE:
        bad("red-degree", f"max red degree {mrd} > {MAX_RED_DEGREE}")

    if not state.has_skeleton:
        for i, lay in enumerate(state.layering.layers):
            if len(lay) > EMPTY_SKELETON_LAYER_CAP:
                bad("layer-size", f"layer {i} holds {len(lay)} vertices")
        if state.faces:
            bad("faces", "empty skeleton with face records")
        return SplendidReport(out, mrd)

    _check_skeleton(state, bad)
    return SplendidReport(out, mrd)


def _check_skeleton(state: SkeletalState, bad) -> None:
    h = state.h
    layer = state.layering.index
    skel = state.skeleton
    assert skel is not None
    sv = state.skeleton_vertices
    rot = skel.rotation

    # skeleton is a subgraph of h whose vertex set induces only black edges
    for u in sv:
        if u not in h:
            bad("skeleton", f"skeleton vertex {u} is not in h")
            return
    for u, ns in rot.items():
        black = h.black_neighbors(u)
        for w in ns:
            if u < w and w not in black:
                bad("skeleton", f"skeleton edge {{{u}, {w}}} is not a black edge of h")
        for w in h.red_neighbors(u):
            if w in sv and u < w:
                bad("skeleton", f"red edge {{{u}, {w}}} between skeleton vertices")
    try:
        traced = skel.validate()
    except EmbeddingError as exc:
        bad("skeleton", str(exc))
        return
    if len(bfs_distances(rot, next(iter(sv)))) != len(sv):
        bad("skeleton", "skeleton is disconnected")
        return
    for f in traced:
        if not f.is_cycle():
            bad("skeleton", f"face walk {f.vertices} is not a cycle (skeleton not 2-connected)")
    if {canonical_darts(f.darts) for f in traced} != {f.key for f in state.faces}:
        bad("faces", "face records do not match the faces of the skeleton")
        return
    try:
        outer_face_id(skel, traced)
    except EmbeddingError as exc:
        bad("faces", str(exc))

    # face assignment
    assigned_to: dict[int, int] = {}
    for f in state.faces:
        for v in f.assigned:
            if v in assigned_to:
                bad("assignment", f"vertex {v} assigned to faces {assigned_to[v]} and {f.id}")
            assigned_to[v] = f.id
    off = set(h.vertices) - sv
    if set(assigned_to) != off:
        bad("assignment", "face sets do not cover exactly the non-skeleton vertices")
        return
    for f in state.faces:
        bset = set(f.boundary)
        for v in f.assigned:
            for w in h.neighbors(v):
                if w in sv:
                    if w not in bset:
                        bad("assignment", f"vertex {v} of face {f.id} touches skeleton vertex {w} off its boundary")
                elif assigned_to[w] != f.id:
                    bad("assignment", f"edge {{{v}, {w}}} joins the sets of faces {f.id} and {assigned_to[w]}")

    # face statuses
    statuses = [status_of(f.assigned, layer) for f in state.faces]
    for f, st in zip(state.faces, statuses):
        if st is not f.status:
            bad("faces", f"face {f.id} recorded as {f.status.value} but is {st.value}")
        if st is FaceStatus.OVERFULL:
            bad("face-status", f"face {f.id} has more than {RICH_LAYER_CAP} assigned vertices in a layer")
        if st is FaceStatus.EMPTY and len(f.darts) != 3:
            bad("face-status", f"empty face {f.id} has length {len(f.darts)}")
    rich = [f for f, st in zip(state.faces, statuses) if st in (FaceStatus.RICH, FaceStatus.OVERFULL)]
    if len(rich) > 1:
        bad("face-status", f"{len(rich)} rich faces: {[f.id for f in rich]}")

    # the tree
    tree = state.tree
    if tree is None:
        bad("tree", "non-empty skeleton without a tree")
        return
    if set(tree.depth) != sv:
        bad("tree", "tree does not span the skeleton")
        return
    for v, p in tree.parent.items():
        if p not in rot.get(v, ()):
            bad("tree", f"tree edge {{{v}, {p}}} is not a skeleton edge")
        elif tree.depth[p] != tree.depth[v] - 1:
            bad("tree", f"tree edge {{{v}, {p}}} does not descend one level")
    if tree.depth.get(tree.root) != 0 or tree.root in tree.parent:
        bad("tree", "bad root")
    dist = bfs_distances(rot, tree.root)
    for v in sv:
        if dist.get(v) != tree.depth[v]:
            bad("tree", f"depth of {v} is {tree.depth[v]} but its distance is {dist.get(v)}")
        if layer.get(v) != tree.depth[v]:
            bad("tree", f"layer of skeleton vertex {v} is {layer.get(v)}, tree depth {tree.depth[v]}")

    # sinks, vertical structure, placement below the sink
    for f, st in zip(state.faces, statuses):
        if st is FaceStatus.EMPTY:
            continue
        try:
            u = sink_of_cycle(f.boundary, tree)
        except NotSplendidError as exc:
            bad("sink", f"face {f.id}: {exc}")
            continue
        if f.sink != u:
            bad("faces", f"face {f.id} records sink {f.sink}, actual {u}")
        if max(layer_counts(f.boundary, layer).values()) > 2:
            bad("sink", f"face {f.id}: boundary meets a layer in more than two vertices")
        i = layer[u]
        for v in list(f.assigned) + [w for w in f.boundary if w != u]:
            if layer[v] <= i:
                bad("below-sink", f"face {f.id}: vertex {v} at layer {layer[v]} not below sink {u} at layer {i}")
        black = h.black_neighbors(u)
        for v in f.assigned:
            if layer[v] == i + 1 and v not in black:
                bad("below-sink", f"face {f.id}: no black edge from sink {u} to {v}")
        if st is not FaceStatus.REDUCED:
            _check_rich_budget(h, layer, f, bad)


def _check_rich_budget(h: Trigraph, layer: Mapping[int, int], f: FaceRecord, bad) -> None:
    by_layer: dict[int, set[int]] = {}
    for v in f.assigned:
        by_layer.setdefault(layer[v], set()).add(v)
    members: dict[int, set[int]] = {}
    for v in set(f.assigned) | set(f.boundary):
        members.setdefault(layer[v], set()).add(v)
    for i, xs in members.items():
        below = by_layer.get(i - 1, set())
        above = by_layer.get(i + 1, set())
        for v in xs:
            red = h.red_neighbors(v)
            same = len(red & (xs - {v}))
            near = len(red & (below | above))
            if same > 3:
                bad("rich-budget", f"face {f.id}: {v} has {same} red edges inside its layer")
            if near > 4:
                bad("rich-budget", f"face {f.id}: {v} has {near} red edges into adjacent layers")
            if len(above) > 1 and len(red & below) > 2:
                bad("rich-budget", f"face {f.id}: {v} has {len(red & below)} red edges upward with a crowded layer below")


# -- diagnostics -------------------------------------------------------------


def dump_state(state: SkeletalState) -> dict:
    """Structured summary of a state (faces, statuses, layer histogram)."""
    layers = state.layering.layers
    faces = []
    for f in state.faces:
        if f.status is FaceStatus.EMPTY:
            continue
        faces.append(
            {
                "id": f.id,
                "boundary": list(f.boundary),
                "sink": f.sink,
                "status": f.status.value,
                "assigned": sorted(f.assigned),
                "layer_counts": {str(k): c for k, c in sorted(layer_counts(f.assigned, state.layering.index).items())},
            }
        )
    status_hist = Counter(f.status.value for f in state.faces)
    return {
        "h_vertices": len(state.h),
        "skeleton_vertices": len(state.skeleton_vertices),
        "red_edges": len(state.h.red_edges()),
        "max_red_degree": state.h.max_red_degree(),
        "layer_sizes": [len(lay) for lay in layers],
        "face_status_counts": dict(sorted(status_hist.items())),
        "tree_root": state.tree.root if state.tree else None,
        "tree_leaves": len(state.tree.leaves()) if state.tree else 0,
        "nonempty_faces": faces,
    }
