"""Trigraphs (graphs with black and red edges) and the contraction calculus.

Vertices are non-negative integers.  A vertex created by a contraction gets
the id ``next_id`` of the trigraph it was created in, so a sequence of
contractions over vertices ``0..n-1`` allocates ``n, n+1, ...`` in order and
can be replayed from its step list alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

_EMPTY: frozenset[int] = frozenset()


class ContractionError(ValueError):
    """Raised for contractions referring to unknown or identical vertices."""


class Trigraph:
    """An immutable trigraph.

    Black and red adjacency are stored as two disjoint symmetric relations.
    ``neighbors`` (no qualifier) means the union of both.
    """

    __slots__ = ("_black", "_red", "next_id")

    def __init__(
        self,
        black: Mapping[int, Iterable[int]],
        red: Mapping[int, Iterable[int]] | None = None,
        next_id: int | None = None,
    ) -> None:
        self._black: dict[int, frozenset[int]] = {v: frozenset(ns) for v, ns in black.items()}
        red = red or {}
        self._red: dict[int, frozenset[int]] = {v: frozenset(red.get(v, ())) for v in self._black}
        for v in red:
            if v not in self._black:
                raise ContractionError(f"red adjacency mentions unknown vertex {v}")
        if next_id is None:
            next_id = max(self._black, default=-1) + 1
        self.next_id = next_id
        self._validate()

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        red_edges: Iterable[tuple[int, int]] = (),
    ) -> Trigraph:
        """Build a trigraph on vertices ``0..n-1``."""
        black: dict[int, set[int]] = {v: set() for v in range(n)}
        red: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in edges:
            black[u].add(v)
            black[v].add(u)
        for u, v in red_edges:
            black[u].discard(v)
            black[v].discard(u)
            red[u].add(v)
            red[v].add(u)
        return cls(black, red, n)

    @classmethod
    def _unchecked(cls, black: dict[int, frozenset[int]], red: dict[int, frozenset[int]], next_id: int) -> Trigraph:
        g = object.__new__(cls)
        g._black = black
        g._red = red
        g.next_id = next_id
        return g

    def _validate(self) -> None:
        for v, ns in self._black.items():
            if v < 0:
                raise ContractionError(f"negative vertex id {v}")
            if v in ns or v in self._red[v]:
                raise ContractionError(f"loop at {v}")
            if ns & self._red[v]:
                raise ContractionError(f"pair both black and red at {v}")
            for w in ns:
                if w not in self._black or v not in self._black[w]:
                    raise ContractionError(f"black adjacency not symmetric on {{{v}, {w}}}")
            for w in self._red[v]:
                if w not in self._red or v not in self._red[w]:
                    raise ContractionError(f"red adjacency not symmetric on {{{v}, {w}}}")
        if self._black and self.next_id <= max(self._black):
            raise ContractionError("next_id must exceed every vertex id")

    # -- queries -----------------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._black)

    def __len__(self) -> int:
        return len(self._black)

    def __contains__(self, v: object) -> bool:
        return v in self._black

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._black))

    def _check(self, v: int) -> None:
        if v not in self._black:
            raise ContractionError(f"unknown vertex {v}")

    def black_neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._black[v]

    def red_neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._red[v]

    def neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._black[v] | self._red[v]

    def edge_color(self, u: int, v: int) -> str | None:
        """Return ``"black"``, ``"red"`` or ``None`` for the pair ``{u, v}``."""
        self._check(u)
        self._check(v)
        if v in self._black[u]:
            return "black"
        if v in self._red[u]:
            return "red"
        return None

    def black_edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, ns in self._black.items() for v in ns if u < v)

    def red_edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, ns in self._red.items() for v in ns if u < v)

    def adjacency(self) -> dict[int, frozenset[int]]:
        """Full (black or red) adjacency as a fresh dict."""
        return {v: self._black[v] | self._red[v] for v in self._black}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trigraph):
            return NotImplemented
        return self._black == other._black and self._red == other._red

    def __hash__(self) -> int:  # pragma: no cover - trigraphs are rarely hashed
        return hash((frozenset(self._black.items()), frozenset(self._red.items())))

    def __repr__(self) -> str:
        return f"Trigraph(n={len(self)}, black={len(self.black_edges())}, red={len(self.red_edges())})"

    # -- contraction -------------------------------------------------------

    def contract(self, a: int, b: int) -> tuple[Trigraph, int]:
        """Contract ``a`` and ``b`` into a fresh vertex; return the new trigraph and its id."""
        self._check(a)
        self._check(b)
        if a == b:
            raise ContractionError(f"cannot contract vertex {a} with itself")
        c = self.next_id
        black, red = self._black, self._red
        na = (black[a] | red[a]) - {b}
        nb = (black[b] | red[b]) - {a}
        new_red = ((red[a] | red[b]) - {a, b}) | (na ^ nb)
        new_black = (na | nb) - new_red

        nblack = dict(black)
        nred = dict(red)
        del nblack[a], nblack[b], nred[a], nred[b]
        for w in na | nb:
            bw = black[w] - {a, b}
            rw = red[w] - {a, b}
            if w in new_red:
                rw = rw | {c}
            else:
                bw = bw | {c}
            nblack[w] = bw
            nred[w] = rw
        nblack[c] = frozenset(new_black)
        nred[c] = frozenset(new_red)
        return Trigraph._unchecked(nblack, nred, c + 1), c

    def red_degree(self, v: int) -> int:
        self._check(v)
        return len(self._red[v])

    def max_red_degree(self) -> int:
        return max((len(r) for r in self._red.values()), default=0)

    def induced(self, keep: Iterable[int]) -> Trigraph:
        keep = frozenset(keep)
        black = {v: self._black[v] & keep for v in keep}
        red = {v: self._red[v] & keep for v in keep}
        return Trigraph._unchecked(black, red, self.next_id)


def contract(g: Trigraph, a: int, b: int) -> tuple[Trigraph, int]:
    return g.contract(a, b)


def red_degree(g: Trigraph, v: int) -> int:
    return g.red_degree(v)


def max_red_degree(g: Trigraph) -> int:
    return g.max_red_degree()


@dataclass(frozen=True)
class ContractionStep:
    a: int
    b: int
    result: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ContractionError(f"step merges {self.a} with itself")


@dataclass
class ContractionSequence:
    """Contractions over the initial vertex set ``0..n-1``.

    Step ``k`` must produce the id ``n + k``.
    """

    n: int
    steps: list[ContractionStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[ContractionStep]:
        return iter(self.steps)

    def alive_after(self, upto: int | None = None) -> set[int]:
        """Vertices alive after the first ``upto`` steps; raises on an invalid sequence."""
        alive = set(range(self.n))
        for k, st in enumerate(self.steps[:upto]):
            if st.a not in alive or st.b not in alive:
                raise ContractionError(f"step {k} uses a vertex that is not alive: {st}")
            if st.result != self.n + k:
                raise ContractionError(f"step {k} must produce id {self.n + k}, got {st.result}")
            alive -= {st.a, st.b}
            alive.add(st.result)
        return alive

    @property
    def is_full(self) -> bool:
        return len(self.alive_after()) <= 1

    def append(self, a: int, b: int) -> ContractionStep:
        st = ContractionStep(a, b, self.n + len(self.steps))
        self.steps.append(st)
        return st
