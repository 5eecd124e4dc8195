"""Acceptance suite: one test per criterion, summarised at the end of the run."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import pytest
from conftest import ACCEPTANCE
from helpers import all_faces_triangles, complete, cut_vertices_bruteforce, graph_from_mask, is_induced_subgraph, random_graph

from planartww import engine
from planartww.corpus import default_corpus
from planartww.embedding import components, make_triangulation
from planartww.engine import synthesize_planar_detailed
from planartww.oracle import exact_twinwidth, exact_twinwidth_naive
from planartww.trigraph import Trigraph
from planartww.verifier import RED, build_adjacency, merge_pair, replay, replay_states

pytestmark = pytest.mark.slow

MAX_WIDTH = 11
CHECK_MAX_N = 200
RESTRICT_MAX_N = 50
EXACT_MAX_N = 8


def record(k: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[k] = (ok, detail)
    assert ok, detail


@dataclass
class Run:
    name: str
    n: int
    checked: bool
    width: int | None = None
    step_red: int = 0
    gplus_width: int | None = None
    error: str | None = None
    rs: object = field(default=None, repr=False)
    result: object = field(default=None, repr=False)


@dataclass
class CutStats:
    calls: int = 0
    dual_checked: int = 0
    bad: list = field(default_factory=list)


@pytest.fixture(scope="module")
def corpus_runs():
    """Synthesize every corpus instance once; check mode for n <= 200."""
    stats = CutStats()
    orig = engine.choose_cut_edge

    def audited(state, verify=True):
        choice = orig(state, verify)
        stats.calls += 1
        stats.dual_checked += verify
        inside_leaves = set(state.tree.leaves()) & choice.interior_vertices
        if len(inside_leaves) != 1 or state.tree.root in choice.interior_vertices:
            stats.bad.append((choice.edge, sorted(inside_leaves)))
        return choice

    runs = []
    t0 = time.perf_counter()
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(engine, "choose_cut_edge", audited)
        for inst in default_corpus():
            rs = inst.build()
            run = Run(inst.name, len(rs.rotation), inst.n <= CHECK_MAX_N)
            steps = []
            try:
                res = synthesize_planar_detailed(rs, check=run.checked, on_step=lambda r: steps.append(r["max_red_degree"]))
            except engine.EngineError as exc:
                run.error = str(exc)
                runs.append(run)
                continue
            run.width = replay(run.n, rs.edges(), res.sequence).width
            run.step_red = max(steps, default=0)
            if res.gplus is not None:
                run.gplus_width = replay(len(res.gplus.rotation), res.gplus.edges(), res.gplus_sequence).width
            if run.n <= RESTRICT_MAX_N:
                run.rs, run.result = rs, res
            runs.append(run)
    return runs, stats, time.perf_counter() - t0


def test_criterion_1_width_bound_on_corpus(corpus_runs):
    runs, _, seconds = corpus_runs
    bad = [(r.name, r.width, r.error) for r in runs if r.error or r.width > MAX_WIDTH]
    worst = max((r.width for r in runs if r.width is not None), default=None)
    families = {r.name.split("-")[0] for r in runs}
    ok = len(runs) >= 200 and not bad and families == {"stacked", "grid", "wheel", "cycle", "random"}
    record(1, ok, f"{len(runs) - len(bad)}/{len(runs)} instances width <= {MAX_WIDTH}, max width {worst}, {seconds:.0f}s; failures {bad[:5]}")


def test_criterion_2_splendid_every_step(corpus_runs):
    runs, _, _ = corpus_runs
    checked = [r for r in runs if r.checked]
    bad = [(r.name, r.error, r.step_red, r.gplus_width) for r in checked if r.error or r.step_red > MAX_WIDTH or (r.gplus_width or 0) > MAX_WIDTH]
    worst = max(max(r.step_red, r.gplus_width or 0) for r in checked)
    want = sum(1 for i in default_corpus() if i.n <= CHECK_MAX_N)
    ok = len(checked) == want and not bad
    record(2, ok, f"{len(checked) - len(bad)}/{want} instances with n <= {CHECK_MAX_N} splendid at every step, max audited red degree {worst}; failures {bad[:5]}")


def test_criterion_3_contraction_formula_equivalence():
    rng = random.Random(3)
    cases = mismatches = 0
    for n in range(2, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(2 ** len(pairs)):
            edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
            for _ in range(3):
                red = [e for e in edges if rng.random() < 0.5]
                black = [e for e in edges if e not in red]
                g = Trigraph.from_edges(n, black, red)
                for a, b in pairs:
                    h, c = g.contract(a, b)
                    adj = build_adjacency(n, black, red)
                    merge_pair(adj, a, b, n)
                    cases += 1
                    want = Trigraph(
                        {v: {w for w, col in row.items() if col != RED} for v, row in adj.items()},
                        {v: {w for w, col in row.items() if col == RED} for v, row in adj.items()},
                    )
                    mismatches += c != n or h != want
    record(3, mismatches == 0, f"{cases} contractions on all graphs with 2..5 vertices, {mismatches} mismatches")


def test_criterion_4_cut_postcondition(corpus_runs):
    runs, stats, _ = corpus_runs
    # the engine raises on a violated postcondition, so errors count as failures too
    errors = [r.name for r in runs if r.error]
    ok = stats.calls > 0 and not stats.bad and not errors
    record(4, ok, f"{stats.calls} cut choices, {stats.dual_checked} cross-checked by dual search, {len(stats.bad)} violations")


def _projection_violations(run: Run) -> int:
    """Prefixes where a restricted red edge has no red image in the full replay."""
    n, res = run.n, run.result
    big = len(res.gplus.rotation)
    full = replay_states(big, res.gplus.edges(), res.gplus_sequence)
    part = replay_states(n, run.rs.edges(), res.sequence)
    adj_f, parts_f = next(full)
    adj_r, parts_r = next(part)
    bad = 0

    def compare() -> int:
        owner = {v: x for x, p in parts_f.items() for v in p}
        for x, row in adj_r.items():
            if set(parts_r[x]) != parts_f[owner[min(parts_r[x])]] & set(range(n)):
                return 1
            for y, col in row.items():
                if col == RED and adj_f[owner[min(parts_r[x])]].get(owner[min(parts_r[y])]) != RED:
                    return 1
        return 0

    bad += compare()
    for st in res.gplus_sequence.steps:
        kept = min(parts_f[st.a]) < n and min(parts_f[st.b]) < n
        adj_f, parts_f = next(full)
        if kept:
            adj_r, parts_r = next(part)
        bad += compare()
    return bad


def test_criterion_5_restriction_soundness(corpus_runs):
    runs, _, _ = corpus_runs
    pool = [r for r in runs if r.result is not None and r.result.gplus is not None]
    wider = [r.name for r in pool if r.width > r.gplus_width]
    projected = [r.name for r in pool if _projection_violations(r)]
    ok = len(pool) >= 50 and not wider and not projected
    record(5, ok, f"{len(pool)} instances with n <= {RESTRICT_MAX_N}: {len(wider)} wider than G+, {len(projected)} with a prefix projection violation")


def _connected_representatives(max_n: int):
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        index = {e: i for i, e in enumerate(pairs)}
        seen = set()
        for mask in range(2 ** len(pairs)):
            if mask in seen:
                continue
            orbit = set()
            for perm in itertools.permutations(range(n)):
                m = 0
                for i, (u, v) in enumerate(pairs):
                    if mask >> i & 1:
                        m |= 1 << index[tuple(sorted((perm[u], perm[v])))]
                orbit.add(m)
            seen |= orbit
            adj = graph_from_mask(n, mask)
            if len(components(adj)) == 1:
                yield adj


def test_criterion_6_exact_oracle(corpus_runs):
    runs, _, _ = corpus_runs
    reps = list(_connected_representatives(5))
    small = [a for a in reps if exact_twinwidth(a) != exact_twinwidth_naive(a)]
    rng = random.Random(6)
    rand = 0
    for _ in range(500):
        adj = random_graph(rng, 6, rng.choice([0.2, 0.4, 0.5, 0.6, 0.8]))
        rand += exact_twinwidth(adj) != exact_twinwidth_naive(adj)
    cliques = [k for k in range(1, 10) if exact_twinwidth(complete(k)) != 0]
    planar = [r for r in runs if r.n <= EXACT_MAX_N and r.width is not None]
    above = [r.name for r in planar if exact_twinwidth(r.rs.adjacency()) > r.width]
    ok = len(reps) == 31 and not small and not rand and not cliques and planar and not above
    record(
        6,
        ok,
        f"{len(reps)} connected classes ({len(small)} mismatches), 500 random 6-vertex graphs ({rand} mismatches), "
        f"cliques {len(cliques)} nonzero, {len(planar)} corpus graphs with exact > synthesized: {len(above)}",
    )


def _triangulation_problems(rs) -> list[str]:
    out = []
    try:
        rs.validate()
    except Exception as exc:
        return [f"input: {exc}"]
    g = make_triangulation(rs)
    try:
        g.validate()
    except Exception as exc:
        return [f"G+: {exc}"]
    adj = g.adjacency()
    if any(v in g.rotation[v] or len(set(g.rotation[v])) != len(g.rotation[v]) for v in g.rotation):
        out.append("not simple")
    if len(components(adj)) != 1 or cut_vertices_bruteforce(adj):
        out.append("not 2-connected")
    if not all_faces_triangles(g):
        out.append("non-triangular face")
    if not is_induced_subgraph(rs, g):
        out.append("input not induced")
    return out


def test_criterion_7_embedding_machinery():
    bad = {}
    insts = default_corpus()
    for inst in insts:
        problems = _triangulation_problems(inst.build())
        if problems:
            bad[inst.name] = problems
    record(7, not bad, f"{len(insts) - len(bad)}/{len(insts)} generator outputs and triangulations pass; failures {dict(list(bad.items())[:3])}")
