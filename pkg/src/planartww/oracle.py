"""Exact twin-width of tiny graphs.

Starting from a plain graph, the trigraph reached by any contractions is
determined by the partition of the original vertices into parts: two parts
are joined by a black edge when all pairs between them are adjacent, by a red
edge when some but not all are, and not at all otherwise.  The solver
therefore searches over partitions (bitmask parts), which also serves as an
exact memo key.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from .trigraph import ContractionSequence, Trigraph

DEFAULT_CAP = 9
NAIVE_CAP = 6


class OracleCapError(ValueError):
    pass


def _masks(n: int, adj: Mapping[int, Iterable[int]]) -> list[int]:
    if set(adj) != set(range(n)):
        raise ValueError("vertices must be 0..n-1")
    out = [0] * n
    for v, ns in adj.items():
        for w in ns:
            out[v] |= 1 << w
    return out


def _red_degrees(parts: tuple[int, ...], nbr: list[int]) -> list[int]:
    k = len(parts)
    deg = [0] * k
    for i in range(k):
        pi = parts[i]
        si = bin(pi).count("1")
        for j in range(i + 1, k):
            pj = parts[j]
            e = 0
            x = pi
            while x:
                low = x & -x
                e += bin(nbr[low.bit_length() - 1] & pj).count("1")
                x ^= low
            if e and e != si * bin(pj).count("1"):
                deg[i] += 1
                deg[j] += 1
    return deg


def _merge(parts: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    rest = [p for k, p in enumerate(parts) if k != i and k != j]
    rest.append(parts[i] | parts[j])
    return tuple(sorted(rest))


def solve_exact(adj: Mapping[int, Iterable[int]], cap: int = DEFAULT_CAP) -> tuple[int, ContractionSequence]:
    """Return ``(twin-width, witness sequence)``.

    Iterative deepening on the width bound ``d``; children are tried in order
    of their own max red degree, and a partition known to fail at ``d`` is
    pruned at every bound ``<= d``.
    """
    n = len(adj)
    if n > cap:
        raise OracleCapError(f"{n} vertices exceeds the cap of {cap}")
    if n <= 1:
        return 0, ContractionSequence(n)
    nbr = _masks(n, adj)
    start = tuple(sorted(1 << v for v in range(n)))
    failed: dict[tuple[int, ...], int] = {}
    maxred: dict[tuple[int, ...], int] = {}
    choice: dict[tuple[int, ...], tuple[int, int]] = {}

    def mr(parts: tuple[int, ...]) -> int:
        if parts not in maxred:
            maxred[parts] = max(_red_degrees(parts, nbr), default=0)
        return maxred[parts]

    def feasible(parts: tuple[int, ...], d: int) -> bool:
        if mr(parts) > d:
            return False
        if len(parts) == 1:
            return True
        if failed.get(parts, -1) >= d:
            return False
        kids = []
        for i, j in combinations(range(len(parts)), 2):
            child = _merge(parts, i, j)
            kids.append((mr(child), i, j, child))
        kids.sort()
        for w, i, j, child in kids:
            if w > d:
                break
            if feasible(child, d):
                choice[parts] = (parts[i], parts[j])
                return True
        failed[parts] = d
        return False

    d = 0
    while not feasible(start, d):
        d += 1

    seq = ContractionSequence(n)
    ids = {1 << v: v for v in range(n)}
    parts = start
    while len(parts) > 1:
        pa, pb = choice[parts]
        st = seq.append(ids.pop(pa), ids.pop(pb))
        ids[pa | pb] = st.result
        parts = _merge(parts, parts.index(pa), parts.index(pb))
    return d, seq


def exact_twinwidth(adj: Mapping[int, Iterable[int]], cap: int = DEFAULT_CAP) -> int:
    return solve_exact(adj, cap)[0]


def exact_twinwidth_naive(adj: Mapping[int, Iterable[int]], cap: int = NAIVE_CAP) -> int:
    """Minimum width over every contraction sequence, enumerated without pruning or memo."""
    n = len(adj)
    if n > cap:
        raise OracleCapError(f"{n} vertices exceeds the naive cap of {cap}")

    def best(g: Trigraph) -> int:
        here = g.max_red_degree()
        if len(g) <= 1:
            return here
        vs = sorted(g.vertices)
        return max(here, min(best(g.contract(a, b)[0]) for a, b in combinations(vs, 2)))

    return best(Trigraph(adj))
