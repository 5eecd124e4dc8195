"""Replay of contraction sequences on plain graphs.

This module deliberately shares no contraction code with ``trigraph``: the
trigraph is a map ``vertex -> {neighbour: colour}`` and each merge is
evaluated straight from the neighbourhood formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .trigraph import ContractionSequence

BLACK = "b"
RED = "r"

ColouredAdjacency = dict[int, dict[int, str]]


class SequenceError(ValueError):
    """The sequence does not fit the graph (dangling ids, reuse, wrong fresh ids)."""


def merge_pair(adj: ColouredAdjacency, a: int, b: int, c: int) -> None:
    """Merge ``a`` and ``b`` into the new vertex ``c`` in place.

    N(c) = (N(a) | N(b)) - {a, b};
    red(c) = (red(a) | red(b) | (N(a) ^ N(b))) - {a, b}.
    """
    na = set(adj[a]) - {b}
    nb = set(adj[b]) - {a}
    red = {w for w, col in adj[a].items() if col == RED} | {w for w, col in adj[b].items() if col == RED}
    red = (red | (na ^ nb)) - {a, b}
    row = {}
    for w in na | nb:
        col = RED if w in red else BLACK
        row[w] = col
        nbr = adj[w]
        nbr.pop(a, None)
        nbr.pop(b, None)
        nbr[c] = col
    del adj[a], adj[b]
    adj[c] = row


def build_adjacency(n: int, edges: Iterable[tuple[int, int]], red_edges: Iterable[tuple[int, int]] = ()) -> ColouredAdjacency:
    adj: ColouredAdjacency = {v: {} for v in range(n)}
    for col, es in ((BLACK, edges), (RED, red_edges)):
        for u, v in es:
            if u == v or u not in adj or v not in adj:
                raise SequenceError(f"bad edge {(u, v)}")
            adj[u][v] = col
            adj[v][u] = col
    return adj


def red_pairs(adj: ColouredAdjacency) -> set[frozenset[int]]:
    return {frozenset((u, w)) for u, row in adj.items() for w, col in row.items() if col == RED}


def max_red(adj: ColouredAdjacency) -> int:
    return max((sum(1 for col in row.values() if col == RED) for row in adj.values()), default=0)


@dataclass
class ReplayResult:
    width: int
    trace: list[int] = field(default_factory=list)  # max red degree after 0, 1, ... steps
    alive: set[int] = field(default_factory=set)

    @property
    def is_full(self) -> bool:
        return len(self.alive) <= 1


def replay_states(
    n: int,
    edges: Iterable[tuple[int, int]],
    seq: ContractionSequence,
    red_edges: Iterable[tuple[int, int]] = (),
) -> Iterator[tuple[ColouredAdjacency, dict[int, frozenset[int]]]]:
    """Yield ``(adjacency, parts)`` before the first step and after each step.

    The yielded objects are live and change as the replay advances; copy
    them to keep a snapshot.
    """
    if seq.n != n:
        raise SequenceError(f"sequence is over {seq.n} vertices, graph has {n}")
    adj = build_adjacency(n, edges, red_edges)
    parts = {v: frozenset((v,)) for v in range(n)}
    yield adj, parts
    for k, st in enumerate(seq.steps):
        for v in (st.a, st.b):
            if v not in adj:
                raise SequenceError(f"step {k}: vertex {v} is not alive")
        if st.a == st.b:
            raise SequenceError(f"step {k}: merges {st.a} with itself")
        if st.result != n + k:
            raise SequenceError(f"step {k}: result must be {n + k}, got {st.result}")
        merge_pair(adj, st.a, st.b, st.result)
        parts[st.result] = parts.pop(st.a) | parts.pop(st.b)
        yield adj, parts


def replay(
    n: int,
    edges: Iterable[tuple[int, int]],
    seq: ContractionSequence,
    *,
    prefix: bool = False,
    red_edges: Iterable[tuple[int, int]] = (),
) -> ReplayResult:
    """Width of ``seq`` on the graph, counting the initial trigraph too.

    Unless ``prefix`` is set the sequence must end with a single vertex.
    """
    trace = []
    adj: ColouredAdjacency = {}
    reddeg: dict[int, int] = {}
    for adj, _ in replay_states(n, edges, seq, red_edges):
        if not trace:
            reddeg = {v: sum(1 for col in row.values() if col == RED) for v, row in adj.items()}
        else:
            st = seq.steps[len(trace) - 1]
            reddeg.pop(st.a, None)
            reddeg.pop(st.b, None)
            c = st.result
            reddeg[c] = sum(1 for col in adj[c].values() if col == RED)
            for w in adj[c]:
                reddeg[w] = sum(1 for col in adj[w].values() if col == RED)
        trace.append(max(reddeg.values(), default=0))
    if not prefix and len(adj) > 1:
        raise SequenceError(f"sequence leaves {len(adj)} vertices; not a full sequence")
    return ReplayResult(max(trace), trace, set(adj))
