from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planartww.trigraph import (
    ContractionError,
    ContractionSequence,
    ContractionStep,
    Trigraph,
    contract,
    max_red_degree,
    red_degree,
)


def p3() -> Trigraph:
    return Trigraph({1: {2}, 2: {1, 3}, 3: {2}})


def red_stars(*sizes: int) -> Trigraph:
    n = sum(k + 1 for k in sizes)
    red = []
    c = 0
    for k in sizes:
        red += [(c, c + i) for i in range(1, k + 1)]
        c += k + 1
    return Trigraph.from_edges(n, [], red_edges=red)


def test_p3_false_twins_stay_black():
    g, c = contract(p3(), 1, 3)
    assert c == 4
    assert g.black_edges() == [(2, 4)]
    assert g.red_edges() == []


def test_p3_contract_adjacent_pair_makes_red():
    g, c = contract(p3(), 1, 2)
    assert c == 4
    assert g.red_edges() == [(3, 4)]
    assert g.black_edges() == []
    assert red_degree(g, 4) == 1
    assert max_red_degree(g) == 1


def test_k4_contractions_stay_black():
    k4 = Trigraph({v: {w for w in range(4) if w != v} for v in range(4)})
    for order in itertools.permutations(range(4)):
        g = k4
        cur = order[0]
        for v in order[1:]:
            g, cur = g.contract(cur, v)
            assert g.red_edges() == []


def test_red_degree_examples():
    assert red_degree(Trigraph({0: set()}), 0) == 0
    assert red_degree(red_stars(5), 0) == 5
    assert max_red_degree(red_stars(3, 5)) == 5
    assert max_red_degree(Trigraph({})) == 0
    assert max_red_degree(Trigraph({0: {1}, 1: {0}})) == 0


def test_errors():
    g = p3()
    with pytest.raises(ContractionError):
        g.contract(1, 1)
    with pytest.raises(ContractionError):
        g.contract(1, 9)
    with pytest.raises(ContractionError):
        g.red_degree(9)
    with pytest.raises(ContractionError):
        Trigraph({0: {1}, 1: {0}}, {0: {1}, 1: {0}})
    with pytest.raises(ContractionError):
        Trigraph({0: {1}, 1: set()})
    with pytest.raises(ContractionError):
        Trigraph({0: {0}})


def test_original_is_not_mutated():
    g = p3()
    before = (g.black_edges(), g.red_edges())
    g.contract(1, 2)
    assert (g.black_edges(), g.red_edges()) == before


def test_edge_color_and_induced():
    g, _ = p3().contract(1, 2)
    assert g.edge_color(3, 4) == "red"
    assert g.edge_color(4, 3) == "red"
    h = Trigraph.from_edges(4, [(0, 1), (1, 2)], red_edges=[(2, 3)])
    assert h.edge_color(0, 1) == "black"
    assert h.edge_color(0, 2) is None
    sub = h.induced({1, 2, 3})
    assert sub.vertices == {1, 2, 3}
    assert sub.red_edges() == [(2, 3)]


def formula(g: Trigraph, a: int, b: int) -> tuple[set, set]:
    na, nb = set(g.neighbors(a)) - {b}, set(g.neighbors(b)) - {a}
    red = (set(g.red_neighbors(a)) | set(g.red_neighbors(b)) | (na ^ nb)) - {a, b}
    return na | nb, red


def random_trigraph(rng: random.Random, n: int, p: float = 0.5, q: float = 0.3) -> Trigraph:
    black: dict[int, set[int]] = {v: set() for v in range(n)}
    red: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            side = red if rng.random() < q else black
            side[u].add(v)
            side[v].add(u)
    return Trigraph(black, red)


def test_contract_matches_formula_on_random_trigraphs():
    rng = random.Random(7)
    for _ in range(300):
        g = random_trigraph(rng, rng.randint(2, 7))
        a, b = rng.sample(sorted(g.vertices), 2)
        h, c = g.contract(a, b)
        nbrs, red = formula(g, a, b)
        assert h.neighbors(c) == nbrs
        assert h.red_neighbors(c) == red
        assert h.vertices == (g.vertices - {a, b}) | {c}
        for u in g.vertices - {a, b}:
            for w in g.vertices - {a, b}:
                assert h.edge_color(u, w) == g.edge_color(u, w)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_contract_is_symmetric(seed, n):
    rng = random.Random(seed)
    g = random_trigraph(rng, n)
    a, b = rng.sample(range(n), 2)
    assert g.contract(a, b) == g.contract(b, a)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_vertex_count_drops_by_one(seed, n):
    rng = random.Random(seed)
    g = random_trigraph(rng, n)
    a, b = rng.sample(range(n), 2)
    h, c = g.contract(a, b)
    assert len(h) == len(g) - 1
    for u in h.vertices:
        assert not ({a, b} & h.neighbors(u))


def test_true_twins_never_create_red():
    rng = random.Random(3)
    for _ in range(200):
        g = random_trigraph(rng, rng.randint(3, 7), q=0.0)
        for a, b in itertools.combinations(sorted(g.vertices), 2):
            if g.neighbors(a) - {b} == g.neighbors(b) - {a}:
                h, _ = g.contract(a, b)
                assert h.red_edges() == []


def test_sequence_bookkeeping():
    seq = ContractionSequence(3)
    assert seq.append(0, 1) == ContractionStep(0, 1, 3)
    assert seq.alive_after() == {2, 3}
    assert not seq.is_full
    seq.append(3, 2)
    assert seq.is_full
    with pytest.raises(ValueError):
        ContractionSequence(3, [ContractionStep(0, 0, 3)])
    with pytest.raises(ValueError):
        ContractionSequence(3, [ContractionStep(0, 1, 7)]).alive_after()
    with pytest.raises(ValueError):
        ContractionSequence(3, [ContractionStep(0, 1, 3), ContractionStep(0, 2, 4)]).alive_after()
