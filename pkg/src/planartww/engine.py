"""Synthesis of width-11 contraction sequences for embedded planar graphs.

The engine walks a splendid layered skeletal trigraph down to a single
vertex.  Each step takes exactly one branch:

``B1``  empty skeleton: contract inside the highest layer, or its lone vertex
        into the layer above it.
``B2``  all faces empty or reduced and the tree has at most two leaves:
        drop the skeleton.
``B3``  a face is rich: contract two assigned vertices of its deepest crowded
        layer.
``B4``  otherwise: cut off the vertical path enclosed by a minimal
        fundamental cycle and merge the faces inside it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .embedding import Dart, RotationSystem, cycle_sides, make_triangulation, outer_face_id, trace_faces
from .layering import Layering
from .skeletal import (
    MAX_RED_DEGREE,
    FaceRecord,
    FaceStatus,
    SkeletalState,
    canonical_darts,
    check_splendid,
    initial_state,
    layer_counts,
    make_face,
    status_of,
)
from .trigraph import ContractionSequence, ContractionStep, Trigraph

StepHook = Callable[[dict], None]


class EngineError(RuntimeError):
    """An engine postcondition failed; this indicates a bug, not bad input."""

    def __init__(self, message: str, report=None) -> None:
        super().__init__(message if report is None else f"{message}\n{report}")
        self.report = report


@dataclass(frozen=True)
class CutChoice:
    edge: tuple[int, int]
    cycle: tuple[int, ...]  # oriented so that its darts' faces are the interior ones
    sink: int
    path: tuple[int, ...]  # from the enclosed leaf up to the vertex below the cycle
    interior_faces: frozenset[int]
    interior_vertices: frozenset[int]
    chords: tuple[tuple[int, int], ...] = ()
    face: int = -1  # dual node whose subtree is the inside
    attach: int = -1  # cycle vertex the path hangs from

    @property
    def darts(self) -> tuple[Dart, ...]:
        k = len(self.cycle)
        return tuple((self.cycle[i], self.cycle[(i + 1) % k]) for i in range(k))


# -- cut selection -----------------------------------------------------------


@dataclass
class CutIndex:
    """Dual spanning tree of the skeleton with per-subtree vertex and leaf counts.

    Dual nodes are face ids; a face's parent is across its non-tree edge
    ``via``.  A tree vertex is anchored at the dual LCA of the two faces
    beside its parent edge; it lies inside the fundamental cycle of ``via[f]``
    exactly when its anchor is in the dual subtree of ``f``.
    """

    outer: int
    parent: dict[int, int]
    via: dict[int, tuple[int, int]]
    kids: dict[int, set[int]]
    count: dict[int, int]
    leaf_count: dict[int, int]
    anchor: dict[int, int]
    anchored: dict[int, set[int]]
    children: dict[int, int]  # tree vertex -> number of tree children
    next_face: int  # fresh id for the next merged face

    @property
    def leaves(self) -> int:
        return self.leaf_count[self.outer]

    def is_leaf(self, v: int) -> bool:
        return self.children[v] == 0 and v in self.anchor

    def subtree(self, f: int) -> list[int]:
        out = [f]
        for g in out:
            out.extend(self.kids[g])
        return out

    def ancestors(self, f: int) -> Iterable[int]:
        while f != -1:
            yield f
            f = self.parent[f]

    def summary(self) -> tuple:
        return (self.outer, self.parent, self.via, self.count, self.leaf_count, self.anchor, self.children)


def build_cut_index(state: SkeletalState) -> CutIndex:
    """Build the index from scratch: dual BFS, then an Euler-tour LCA."""
    tree = state.tree
    face_of = {d: f.id for f in state.faces for d in f.darts}
    outer = face_of[state.skeleton.outer]
    parent = {outer: -1}
    via: dict[int, tuple[int, int]] = {}
    order = [outer]
    for f in order:
        for u, v in state.face_by_id[f].darts:
            if tree.parent.get(u) == v or tree.parent.get(v) == u:
                continue
            g = face_of[(v, u)]
            if g not in parent:
                parent[g] = f
                via[g] = (u, v) if u < v else (v, u)
                order.append(g)
    if len(order) != len(state.faces):
        raise EngineError("non-tree edges do not connect the dual")
    kids: dict[int, set[int]] = {f: set() for f in order}
    for f in order[1:]:
        kids[parent[f]].add(f)
    lca = _euler_lca(parent, kids, order, outer)
    leaves = set(tree.leaves())
    children = dict.fromkeys(tree.depth, 0)
    for p in tree.parent.values():
        children[p] += 1
    count = dict.fromkeys(order, 0)
    leaf_count = dict.fromkeys(order, 0)
    anchor: dict[int, int] = {}
    anchored: dict[int, set[int]] = {f: set() for f in order}
    for v, p in tree.parent.items():
        g = lca(face_of[(v, p)], face_of[(p, v)])
        anchor[v] = g
        anchored[g].add(v)
        count[g] += 1
        if v in leaves:
            leaf_count[g] += 1
    for f in reversed(order[1:]):
        count[parent[f]] += count[f]
        leaf_count[parent[f]] += leaf_count[f]
    nf = max(parent) + 1
    return CutIndex(outer, parent, via, kids, count, leaf_count, anchor, anchored, children, nf)


def _euler_lca(parent: dict[int, int], kids: dict[int, set[int]], order: list[int], root: int):
    children = {f: sorted(ks) for f, ks in kids.items()}
    depth = {root: 0}
    for f in order[1:]:
        depth[f] = depth[parent[f]] + 1
    first: dict[int, int] = {}
    euler: list[int] = []
    stack = [(root, 0)]
    while stack:
        f, i = stack.pop()
        if i == 0:
            first[f] = len(euler)
        euler.append(f)
        if i < len(children[f]):
            stack.append((f, i + 1))
            stack.append((children[f][i], 0))
    table = [euler]
    span = 1
    while 2 * span <= len(euler):
        prev = table[-1]
        row = []
        for j in range(len(euler) - 2 * span + 1):
            x, y = prev[j], prev[j + span]
            row.append(x if depth[x] <= depth[y] else y)
        table.append(row)
        span *= 2

    def lca(x: int, y: int) -> int:
        i, j = first[x], first[y]
        if i > j:
            i, j = j, i
        k = (j - i + 1).bit_length() - 1
        a, b = table[k][i], table[k][j - (1 << k) + 1]
        return a if depth[a] <= depth[b] else b

    return lca


def _index_after_cut(idx: CutIndex, choice: CutChoice, new_face: FaceRecord) -> CutIndex:
    """The index once the faces inside the cut merge into ``new_face``."""
    c = choice.face
    sub = idx.subtree(c)
    parent = dict(idx.parent)
    via = dict(idx.via)
    kids = dict(idx.kids)
    count = dict(idx.count)
    leaf_count = dict(idx.leaf_count)
    anchored = dict(idx.anchored)
    for f in sub:
        del parent[f], kids[f], count[f], leaf_count[f], anchored[f]
        via.pop(f, None)
    up = idx.parent[c]
    nf = new_face.id
    parent[nf] = up
    via[nf] = idx.via[c]
    kids[nf] = set()
    kids[up] = (kids[up] - {c}) | {nf}
    count[nf] = leaf_count[nf] = 0
    anchored[nf] = set()
    for g in idx.ancestors(up):
        count[g] -= len(choice.path)
        leaf_count[g] -= 1
    anchor = dict(idx.anchor)
    children = dict(idx.children)
    for v in choice.path:
        del anchor[v], children[v]
    w = choice.attach
    children[w] -= 1
    if children[w] == 0:
        for g in idx.ancestors(anchor[w]):
            leaf_count[g] += 1
    return CutIndex(idx.outer, parent, via, kids, count, leaf_count, anchor, anchored, children, nf + 1)


def _fundamental_cycle(tree, a: int, b: int) -> tuple[list[int], int]:
    """Cycle ``a, b, ..., top, ..., (above a)`` closed by the edge ``a - b``."""
    depth, parent = tree.depth, tree.parent
    pa, pb = [a], [b]
    x, y = a, b
    while depth[x] > depth[y]:
        x = parent[x]
        pa.append(x)
    while depth[y] > depth[x]:
        y = parent[y]
        pb.append(y)
    while x != y:
        x, y = parent[x], parent[y]
        pa.append(x)
        pb.append(y)
    return [a] + pb + pa[-2:0:-1], x


def cut_index(state: SkeletalState) -> CutIndex:
    idx = state.cache
    if not isinstance(idx, CutIndex):
        idx = build_cut_index(state)
        state.cache = idx
    return idx


def choose_cut_edge(state: SkeletalState, verify: bool = True) -> CutChoice:
    """Pick a non-tree skeleton edge whose fundamental cycle encloses exactly one leaf.

    Among all non-tree edges whose cycle strictly encloses some leaf of the
    tree (and never the root), one enclosing the fewest skeleton vertices is
    chosen, ties going to the smallest edge.  With ``verify`` the choice is
    re-derived through a fresh index and a dual reachability search.
    """
    if not state.has_skeleton or state.tree is None:
        raise EngineError("cut selection needs a skeleton")
    tree = state.tree
    rot = state.skeleton.rotation
    idx = cut_index(state)
    if idx.leaves < 3:
        raise EngineError(f"cut selection needs at least 3 leaves, tree has {idx.leaves}")

    best = None
    for f, e in idx.via.items():
        if idx.leaf_count[f] >= 1:
            key = (idx.count[f], e, f)
            if best is None or key < best:
                best = key
    if best is None:
        raise EngineError("no non-tree edge encloses a leaf")
    _, (a, b), c = best
    if (a, b) not in state.face(c).darts:
        a, b = b, a
    cycle, top = _fundamental_cycle(tree, a, b)
    inner_faces = frozenset(idx.subtree(c))
    inside = frozenset().union(*(idx.anchored[f] for f in inner_faces))

    path = tuple(sorted(inside, key=lambda v: -tree.depth[v]))
    chords = []
    k = len(cycle)
    on_cycle = set(cycle)
    for i, w in enumerate(cycle):
        p, q = cycle[i - 1], cycle[(i + 1) % k]
        for x in _between(rot[w], p, q):
            if x in on_cycle and w < x:
                chords.append((w, x))
    attach = tree.parent[path[-1]] if path else -1
    choice = CutChoice((min(a, b), max(a, b)), tuple(cycle), top, path, inner_faces, inside, tuple(sorted(chords)), c, attach)
    _assert_cut(state, choice, {v for v in inside if idx.is_leaf(v)})
    if verify:
        if build_cut_index(state).summary() != idx.summary():
            raise EngineError("incremental cut index disagrees with a fresh build")
        _verify_cut(state, choice)
    return choice


def _between(ns: tuple[int, ...], p: int, q: int) -> list[int]:
    """Neighbours strictly after ``p`` and before ``q`` in cyclic order."""
    k = len(ns)
    i = ns.index(p)
    out = []
    for s in range(1, k):
        x = ns[(i + s) % k]
        if x == q:
            return out
        out.append(x)
    raise EngineError(f"{q} not found after {p} in rotation")


def _assert_cut(state: SkeletalState, choice: CutChoice, enclosed: set[int]) -> None:
    tree = state.tree
    if len(enclosed) != 1:
        raise EngineError(f"cut {choice.edge} encloses {len(enclosed)} leaves")
    if tree.root in choice.interior_vertices:
        raise EngineError(f"cut {choice.edge} encloses the root")
    path = choice.path
    if not path or path[0] not in enclosed:
        raise EngineError(f"cut {choice.edge}: enclosed vertices do not start at the leaf")
    for x, y in zip(path, path[1:]):
        if tree.parent.get(x) != y:
            raise EngineError(f"cut {choice.edge}: enclosed vertices are not one vertical path")
    if tree.parent[path[-1]] not in choice.cycle:
        raise EngineError(f"cut {choice.edge}: enclosed path does not hang from the cycle")


def _verify_cut(state: SkeletalState, choice: CutChoice) -> None:
    """Recompute the inside of the cycle by plain dual reachability and compare."""
    skel = state.skeleton
    traced = trace_faces(skel)
    inner, inside = cycle_sides(skel, choice.cycle, outer_face_id(skel, traced), traced)
    if inside != choice.interior_vertices:
        raise EngineError(f"cut {choice.edge}: interior vertices disagree with dual search")
    want = {state.face(f).key for f in choice.interior_faces}
    got = {canonical_darts(traced[f].darts) for f in inner}
    if want != got:
        raise EngineError(f"cut {choice.edge}: interior faces disagree with dual search")


# -- transitions -------------------------------------------------------------


def _audit_red(h: Trigraph, c: int) -> None:
    worst = max([h.red_degree(c)] + [h.red_degree(w) for w in h.red_neighbors(c)])
    if worst > MAX_RED_DEGREE:
        raise EngineError(f"red degree {worst} exceeds {MAX_RED_DEGREE} after creating {c}")


def _contract(state: SkeletalState, a: int, b: int, target_layer: int):
    h, c = state.h.contract(a, b)
    _audit_red(h, c)
    layer = dict(state.layering.index)
    del layer[a], layer[b]
    layer[c] = target_layer
    parts = dict(state.part_map)
    parts[c] = parts.pop(a) | parts.pop(b)
    return h, c, Layering(layer), parts


def _b1(state: SkeletalState):
    layers = state.layering.layers
    i = len(layers) - 1
    top = sorted(layers[i])
    if len(top) > 1:
        a, b, tl = top[0], top[1], i
    else:
        a, b, tl = top[0], min(layers[i - 1]), i - 1
    h, c, lay, parts = _contract(state, a, b, tl)
    nxt = SkeletalState(h, lay, None, None, (), parts)
    return nxt, [ContractionStep(a, b, c)]


def _b2(state: SkeletalState):
    sizes = [len(x) for x in state.layering.layers]
    if max(sizes, default=0) > 4:
        raise EngineError(f"dropping the skeleton leaves a layer of size {max(sizes)}")
    return SkeletalState(state.h, state.layering, None, None, (), state.part_map), []


def _b3(state: SkeletalState, idx: int):
    f = state.faces[idx]
    layer = state.layering.index
    counts = layer_counts(f.assigned, layer)
    j = max(i for i, n in counts.items() if n > 1)
    a, b = sorted(v for v in f.assigned if layer[v] == j)[:2]
    h, c, lay, parts = _contract(state, a, b, j)
    assigned = (f.assigned - {a, b}) | {c}
    nf = FaceRecord(f.id, f.darts, assigned, f.sink, status_of(assigned, lay.index))
    faces = state.faces[:idx] + (nf,) + state.faces[idx + 1 :]
    nxt = SkeletalState(h, lay, state.skeleton, state.tree, faces, parts)
    nxt.cache, nxt.focus = state.cache, idx
    return nxt, [ContractionStep(a, b, c)]


def _b4(state: SkeletalState, verify: bool):
    choice = choose_cut_edge(state, verify=verify)
    q = set(choice.path)
    rot = dict(state.skeleton.rotation)
    for v in q:
        del rot[v]
    k = len(choice.cycle)
    for i, w in enumerate(choice.cycle):
        p, nx = choice.cycle[i - 1], choice.cycle[(i + 1) % k]
        drop = set(_between(rot[w], p, nx))
        if drop:
            rot[w] = tuple(x for x in rot[w] if x not in drop)
    skel = RotationSystem(rot, state.skeleton.outer)
    tree = state.tree.restrict(rot)
    layer = state.layering.index
    inner = [state.face(f) for f in choice.interior_faces]
    merged = frozenset(q).union(*(f.assigned for f in inner))
    kept = [f for f in state.faces if f.id not in choice.interior_faces]
    new = make_face(cut_index(state).next_face, choice.darts, merged, tree, layer)
    if new.status is not FaceStatus.EMPTY and new.sink != choice.sink:
        raise EngineError(f"merged face of cut {choice.edge} has sink {new.sink}, expected {choice.sink}")
    if max(layer_counts(merged, layer).values()) > 3:
        raise EngineError(f"merged face of cut {choice.edge} exceeds 3 vertices in a layer")
    idx = _index_after_cut(cut_index(state), choice, new)
    faces = tuple(kept) + (new,)
    nxt = SkeletalState(state.h, state.layering, skel, tree, faces, state.part_map)
    nxt.cache, nxt.focus = idx, len(faces) - 1
    return nxt, [], choice


_SETTLED = (FaceStatus.EMPTY, FaceStatus.REDUCED)


def _crowded(state: SkeletalState) -> list[int]:
    """Positions of faces that are neither empty nor reduced."""
    if state.focus is not None:
        return [state.focus] if state.faces[state.focus].status not in _SETTLED else []
    return [i for i, f in enumerate(state.faces) if f.status not in _SETTLED]


def step_detailed(state: SkeletalState, *, check: bool = False, verify_cut: bool | None = None):
    """One engine step; returns ``(next_state, emitted_steps, branch, cut_choice_or_None)``.

    ``verify_cut`` defaults to ``check``.
    """
    if verify_cut is None:
        verify_cut = check
    if len(state.h) <= 1:
        raise EngineError("nothing left to contract")
    choice = None
    if not state.has_skeleton:
        branch = "B1"
        nxt, emitted = _b1(state)
    else:
        crowded = _crowded(state)
        if not crowded and cut_index(state).leaves <= 2:
            branch = "B2"
            nxt, emitted = _b2(state)
        elif crowded:
            if len(crowded) > 1 or state.faces[crowded[0]].status is not FaceStatus.RICH:
                raise EngineError(f"faces {crowded} are beyond a single rich face")
            branch = "B3"
            nxt, emitted = _b3(state, crowded[0])
        else:
            branch = "B4"
            nxt, emitted, choice = _b4(state, verify_cut)
    if nxt.measure >= state.measure:
        raise EngineError(f"{branch} did not shrink |V(H)| + |V(S)|")
    if check:
        report = check_splendid(nxt)
        if not report.ok:
            raise EngineError(f"state after {branch} is not splendid", report)
    return nxt, emitted, branch, choice


def step(state: SkeletalState, *, check: bool = True) -> tuple[SkeletalState, list[ContractionStep]]:
    nxt, emitted, _, _ = step_detailed(state, check=check)
    return nxt, emitted


def run(
    state: SkeletalState,
    *,
    check: bool = False,
    on_step: StepHook | None = None,
    verify_cut: bool | None = None,
    branches: Counter | None = None,
) -> ContractionSequence:
    """Iterate engine steps until one vertex remains.

    ``check`` runs the full splendid checker after every step (and on the
    initial state).  ``on_step`` receives one record per step; ``branches``
    (if given) accumulates how often each branch fired.
    """
    if check:
        report = check_splendid(state)
        if not report.ok:
            raise EngineError("initial state is not splendid", report)
    seq = ContractionSequence(state.h.next_id)
    if min(state.h.vertices, default=0) < 0 or state.h.next_id != len(state.h):
        raise EngineError("initial trigraph must use vertex ids 0..n-1")
    k = 0
    while len(state.h) > 1:
        state, emitted, branch, choice = step_detailed(state, check=check, verify_cut=verify_cut)
        seq.steps.extend(emitted)
        if branches is not None:
            branches[branch] += 1
        if on_step is not None:
            rec = {
                "step": k,
                "branch": branch,
                "h_vertices": len(state.h),
                "skeleton_vertices": len(state.skeleton_vertices),
                "faces": dict(Counter(f.status.value for f in state.faces)),
                "max_red_degree": state.h.max_red_degree(),
                "contractions": [[s.a, s.b, s.result] for s in emitted],
            }
            if choice is not None:
                rec["cut"] = {
                    "edge": list(choice.edge),
                    "path": list(choice.path),
                    "chords": [list(c) for c in choice.chords],
                }
            on_step(rec)
        k += 1
    return seq


# -- end-to-end --------------------------------------------------------------


def restrict_sequence(seq: ContractionSequence, original: Iterable[int]) -> ContractionSequence:
    """Keep only the contractions that merge two parts both meeting ``original``.

    ``original`` must be ``{0, ..., k-1}``; the result is a sequence over it
    with fresh ids ``k, k+1, ...``.
    """
    original = set(original)
    k = len(original)
    if original != set(range(k)) or k > seq.n:
        raise ValueError("original vertex set must be 0..k-1 within the sequence's vertices")
    seq.alive_after()
    out = ContractionSequence(k)
    image: dict[int, int | None] = {v: (v if v < k else None) for v in range(seq.n)}
    for st in seq.steps:
        x, y = image.pop(st.a), image.pop(st.b)
        if x is not None and y is not None:
            image[st.result] = out.append(x, y).result
        else:
            image[st.result] = x if x is not None else y
    return out


@dataclass
class SynthesisResult:
    sequence: ContractionSequence
    gplus: RotationSystem | None = None
    gplus_sequence: ContractionSequence | None = None
    root: int | None = None
    branches: Counter = field(default_factory=Counter)
    cuts_checked: int = 0


def synthesize_planar_detailed(
    rs: RotationSystem,
    *,
    check: bool = False,
    on_step: StepHook | None = None,
) -> SynthesisResult:
    rs.validate()
    n = len(rs.rotation)
    if set(rs.rotation) != set(range(n)):
        raise ValueError("vertices must be 0..n-1")
    if n <= 3:
        seq = ContractionSequence(n)
        if n >= 2:
            cur = seq.append(0, 1).result
            for v in range(2, n):
                cur = seq.append(cur, v).result
        return SynthesisResult(seq)
    gplus = make_triangulation(rs)
    root = 0
    state = initial_state(gplus, root)
    result = SynthesisResult(ContractionSequence(n), gplus=state.skeleton, root=root)

    full = run(state, check=check, on_step=on_step, branches=result.branches)
    result.cuts_checked = result.branches["B4"]
    result.gplus_sequence = full
    result.sequence = restrict_sequence(full, range(n))
    return result


def synthesize_planar(rs: RotationSystem, *, check: bool = False, on_step: StepHook | None = None) -> ContractionSequence:
    """A contraction sequence of width at most 11 for the embedded graph ``rs``."""
    return synthesize_planar_detailed(rs, check=check, on_step=on_step).sequence
