"""JSON graph/sequence files and DOT export."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .embedding import EmbeddingError, RotationSystem, face_index, trace_faces
from .trigraph import ContractionSequence, ContractionStep, Trigraph


class FormatError(ValueError):
    pass


@dataclass
class GraphFile:
    """``{"n", "edges", "rotation"?, "outer_face"?, "red_edges"?}`` with 0-based ids."""

    n: int
    edges: list[tuple[int, int]]
    rotation: dict[int, list[int]] | None = None
    outer_face: list[int] | None = None
    red_edges: list[tuple[int, int]] = field(default_factory=list)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.edges + self.red_edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def trigraph(self) -> Trigraph:
        return Trigraph.from_edges(self.n, self.edges, self.red_edges)

    def rotation_system(self) -> RotationSystem:
        """The embedding, checked against the edge list and validated."""
        if self.rotation is None:
            raise FormatError("graph file has no rotation system")
        rot = {v: tuple(self.rotation.get(v, ())) for v in range(self.n)}
        if set(self.rotation) - set(rot):
            raise FormatError("rotation mentions vertices outside 0..n-1")
        outer = None
        if self.outer_face:
            if len(self.outer_face) < 2:
                raise FormatError("outer_face needs at least two vertices")
            outer = (self.outer_face[0], self.outer_face[1])
        rs = RotationSystem(rot, outer)
        rs.validate()
        want = sorted(tuple(sorted(e)) for e in self.edges + self.red_edges)
        if rs.edges() != want:
            raise FormatError("rotation system does not match the edge list")
        check_outer_face(self, rs)
        return rs

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.rotation is not None:
            out["rotation"] = {str(v): list(ns) for v, ns in sorted(self.rotation.items())}
        if self.outer_face is not None:
            out["outer_face"] = list(self.outer_face)
        if self.red_edges:
            out["red_edges"] = [list(e) for e in self.red_edges]
        return out

    @classmethod
    def from_json(cls, data: Any) -> GraphFile:
        try:
            n = int(data["n"])
            edges = [(int(u), int(v)) for u, v in data["edges"]]
            rotation = None
            if data.get("rotation") is not None:
                rotation = {int(v): [int(w) for w in ns] for v, ns in data["rotation"].items()}
            outer = data.get("outer_face")
            outer = [int(v) for v in outer] if outer is not None else None
            red = [(int(u), int(v)) for u, v in data.get("red_edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed graph file: {exc!r}") from None
        if n < 0:
            raise FormatError("n must be non-negative")
        for u, v in edges + red:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise FormatError(f"bad edge {[u, v]}")
        return cls(n, edges, rotation, outer, red)

    @classmethod
    def from_rotation(cls, rs: RotationSystem) -> GraphFile:
        n = len(rs.rotation)
        if set(rs.rotation) != set(range(n)):
            raise FormatError("vertices must be 0..n-1")
        outer = None
        if rs.outer is not None:
            faces = trace_faces(rs)
            outer = list(faces[face_index(faces)[rs.outer]].vertices)
        return cls(n, rs.edges(), {v: list(ns) for v, ns in rs.rotation.items()}, outer)


def sequence_to_json(seq: ContractionSequence) -> dict[str, Any]:
    return {"n": seq.n, "steps": [{"a": s.a, "b": s.b, "result": s.result} for s in seq.steps]}


def sequence_from_json(data: Any) -> ContractionSequence:
    try:
        seq = ContractionSequence(int(data["n"]), [ContractionStep(int(s["a"]), int(s["b"]), int(s["result"])) for s in data["steps"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed sequence file: {exc!r}") from None
    return seq


def _load(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def read_graph(path: str | Path) -> GraphFile:
    return GraphFile.from_json(_load(path))


def read_sequence(path: str | Path) -> ContractionSequence:
    return sequence_from_json(_load(path))


def write_json(path: str | Path, data: Any) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_graph(path: str | Path, g: GraphFile) -> None:
    write_json(path, g.to_json())


def write_sequence(path: str | Path, seq: ContractionSequence) -> None:
    write_json(path, sequence_to_json(seq))


def trigraph_to_dot(
    h: Trigraph,
    *,
    layers: dict[int, int] | None = None,
    bold: set[frozenset[int]] | None = None,
    name: str = "G",
) -> str:
    """DOT text; red edges carry ``color=red``, ``bold`` edges are drawn thick, layers become ranks."""
    bold = bold or set()
    lines = [f"graph {name} {{", "  node [shape=circle, width=0.3, fixedsize=true];"]
    for v in sorted(h.vertices):
        lines.append(f"  {v};")
    if layers:
        by: dict[int, list[int]] = {}
        for v, i in layers.items():
            by.setdefault(i, []).append(v)
        for i in sorted(by):
            lines.append(f"  {{ rank=same; {' '.join(str(v) for v in sorted(by[i]))} }}  // layer {i}")
    for u, v in h.black_edges():
        attr = " [penwidth=3]" if frozenset((u, v)) in bold else ""
        lines.append(f"  {u} -- {v}{attr};")
    for u, v in h.red_edges():
        lines.append(f"  {u} -- {v} [color=red];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def check_outer_face(g: GraphFile, rs: RotationSystem) -> None:
    if g.outer_face is None:
        return
    faces = trace_faces(rs)
    want = list(g.outer_face)
    for f in faces:
        vs = list(f.vertices)
        if len(vs) == len(want) and any(vs[i:] + vs[:i] == want for i in range(len(vs))):
            return
    raise EmbeddingError(f"outer_face {want} is not a face of the embedding")
