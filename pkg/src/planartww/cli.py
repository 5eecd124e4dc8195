"""Command-line interface.

Exit codes: 0 success or pass, 1 verification/check failure, 2 input error.
File formats are described in docs/FORMATS.md.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .corpus import FAMILIES, Instance, RunRecord, default_corpus, run_instance
from .embedding import EmbeddingError, TriangulationError, make_triangulation
from .engine import EngineError, step_detailed, synthesize_planar_detailed
from .formats import (
    FormatError,
    GraphFile,
    read_graph,
    read_sequence,
    sequence_to_json,
    trigraph_to_dot,
    write_graph,
    write_json,
    write_sequence,
)
from .oracle import DEFAULT_CAP, OracleCapError, solve_exact
from .skeletal import check_splendid, dump_state, initial_state
from .trigraph import Trigraph
from .verifier import RED, SequenceError, replay, replay_states

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

INPUT_ERRORS = (FormatError, EmbeddingError, SequenceError, OracleCapError, OSError, ValueError)


class InputError(Exception):
    pass


def _emit_json(data, out: str | None) -> None:
    if out is None or out == "-":
        json.dump(data, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        write_json(out, data)


def _emit_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _plain_graph(path: str) -> GraphFile:
    g = read_graph(path)
    if g.red_edges:
        raise InputError(f"{path}: expected a plain graph, found red_edges")
    return g


# -- subcommands -------------------------------------------------------------


def cmd_synth(args: argparse.Namespace) -> int:
    g = _plain_graph(args.graph)
    rs = g.rotation_system()
    trace_fh: TextIO | None = None
    if args.trace == "-":
        trace_fh = sys.stderr
    elif args.trace:
        trace_fh = open(args.trace, "w")
    hook: Callable[[dict], None] | None = None
    if trace_fh is not None:
        def hook(rec: dict) -> None:
            trace_fh.write(json.dumps(rec, sort_keys=True) + "\n")
    try:
        res = synthesize_planar_detailed(rs, check=args.check_splendid_every_step, on_step=hook)
    except EngineError as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if trace_fh is not None and trace_fh is not sys.stderr:
            trace_fh.close()
    _emit_json(sequence_to_json(res.sequence), args.output)
    if args.emit_gplus:
        out = Path(args.emit_gplus)
        out.mkdir(parents=True, exist_ok=True)
        if res.gplus is not None:
            write_graph(out / "gplus.json", GraphFile.from_rotation(res.gplus))
            write_sequence(out / "gplus_sequence.json", res.gplus_sequence)
        else:
            write_graph(out / "gplus.json", g)
            write_sequence(out / "gplus_sequence.json", res.sequence)
    steps = sum(res.branches.values())
    print(f"synthesized {len(res.sequence)} contractions over {g.n} vertices ({steps} engine steps)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    seq = read_sequence(args.sequence)
    res = replay(g.n, g.edges, seq, prefix=args.prefix, red_edges=g.red_edges)
    ok = res.width <= args.max_width
    report = {
        "width": res.width,
        "max_width": args.max_width,
        "steps": len(seq),
        "full": res.is_full,
        "pass": ok,
    }
    if args.show_trace:
        report["trace"] = res.trace
    print(json.dumps(report))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_exact(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    if g.red_edges:
        raise InputError("exact solver takes plain graphs only")
    width, seq = solve_exact(g.adjacency(), cap=args.cap)
    print(f"twin-width {width}")
    if args.output:
        write_sequence(args.output, seq)
    else:
        print(json.dumps(sequence_to_json(seq)))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    fam = args.family
    p = args.params
    try:
        if fam == "grid":
            if len(p) != 2:
                raise InputError("grid takes W H")
            rs = FAMILIES[fam](int(p[0]), int(p[1]))
        elif fam in ("wheel", "cycle"):
            if len(p) != 1:
                raise InputError(f"{fam} takes N")
            rs = FAMILIES[fam](int(p[0]))
        elif fam == "stacked":
            if len(p) != 1:
                raise InputError("stacked takes N")
            rs = FAMILIES[fam](int(p[0]), args.seed)
        else:
            if len(p) != 1:
                raise InputError("random-planar takes N (edge deletion probability via --p)")
            rs = FAMILIES[fam](int(p[0]), args.p, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit_json(GraphFile.from_rotation(rs).to_json(), args.output)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    if args.engine_steps is not None:
        return _export_engine_state(g, args)
    h = g.trigraph()
    if args.sequence:
        seq = read_sequence(args.sequence)
        upto = len(seq) if args.upto is None else args.upto
        if not 0 <= upto <= len(seq):
            raise InputError(f"--upto must lie in 0..{len(seq)}")
        adj = None
        for k, (adj, _) in enumerate(replay_states(g.n, g.edges, seq, g.red_edges)):
            if k == upto:
                break
        black = {v: {w for w, c in row.items() if c != RED} for v, row in adj.items()}
        red = {v: {w for w, c in row.items() if c == RED} for v, row in adj.items()}
        h = Trigraph(black, red, next_id=g.n + upto)
    _emit_text(trigraph_to_dot(h), args.output)
    return EXIT_OK


def _export_engine_state(g: GraphFile, args: argparse.Namespace) -> int:
    rs = g.rotation_system()
    if g.n < 4:
        raise InputError("engine states exist only for graphs with at least 4 vertices")
    state = initial_state(make_triangulation(rs), 0)
    for _ in range(args.engine_steps):
        if len(state.h) <= 1:
            break
        state = step_detailed(state)[0]
    if args.json:
        data = dump_state(state)
        data["splendid"] = check_splendid(state).ok
        _emit_json(data, args.output)
        return EXIT_OK
    bold = set()
    if state.skeleton is not None:
        bold = {frozenset(e) for e in state.skeleton.edges()}
    _emit_text(trigraph_to_dot(state.h, layers=dict(state.layering.index), bold=bold), args.output)
    return EXIT_OK


def _corpus_job(job: tuple[Instance, bool, str | None]) -> RunRecord:
    inst, check, out = job
    rec = run_instance(inst, check=check)
    if out:
        d = Path(out)
        write_graph(d / f"{inst.name}.graph.json", GraphFile.from_rotation(inst.build()))
        write_sequence(d / f"{inst.name}.seq.json", rec.sequence)
    rec.sequence = None
    return rec


def cmd_corpus(args: argparse.Namespace) -> int:
    insts = [i for i in default_corpus() if (args.filter or "") in i.name]
    if args.max_n is not None:
        insts = [i for i in insts if i.n <= args.max_n]
    if args.list:
        for i in insts:
            print(f"{i.name}\t{i.family}\t{list(i.params)}")
        return EXIT_OK
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    jobs = [(i, args.check, args.out) for i in insts]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            records = list(pool.map(_corpus_job, jobs))
    else:
        records = map(_corpus_job, jobs)
    failed = 0
    total = 0
    for rec in records:
        total += 1
        failed += not rec.ok
        status = "ok" if rec.ok else "FAIL"
        print(f"{status}\t{rec.name}\tn={rec.n}\tG+={rec.gplus_vertices}\twidth={rec.width}\t{rec.seconds:.2f}s", flush=True)
    print(f"{total - failed}/{total} instances within width 11")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="planartww",
        description="Synthesize and verify width-11 contraction sequences for embedded planar graphs.",
        epilog="Exit codes: 0 success/pass, 1 verification failure, 2 input error.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a contraction sequence for a graph file")
    p.add_argument("graph", help="graph JSON with a rotation system")
    p.add_argument("-o", "--output", help="sequence file to write (default: stdout)")
    p.add_argument("--check-splendid-every-step", action="store_true", help="run the full state checker after each engine step")
    p.add_argument("--trace", metavar="PATH", help="write one JSON record per engine step ('-' for stderr)")
    p.add_argument("--emit-gplus", metavar="DIR", help="also write the triangulation and its unrestricted sequence into DIR")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="replay a sequence and compare its width with a bound")
    p.add_argument("graph")
    p.add_argument("sequence")
    p.add_argument("--max-width", type=int, default=11, help="pass iff the replayed width is at most this (default 11)")
    p.add_argument("--prefix", action="store_true", help="accept sequences that stop before one vertex remains")
    p.add_argument("--show-trace", action="store_true", help="include the per-step max red degree")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exact", help="exact twin-width of a tiny graph with a witness sequence")
    p.add_argument("graph")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"largest vertex count accepted (default {DEFAULT_CAP})")
    p.add_argument("-o", "--output", help="write the witness sequence here instead of stdout")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("gen", help="generate an embedded planar graph")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("params", nargs="+", help="grid: W H; others: N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5, help="edge deletion probability for random-planar")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export", help="DOT (or JSON) snapshot of a graph, a replay prefix, or an engine state")
    p.add_argument("graph")
    p.add_argument("--sequence", help="replay this sequence first")
    p.add_argument("--upto", type=int, help="number of sequence steps to replay (default: all)")
    p.add_argument("--engine-steps", type=int, metavar="K", help="show the engine state after K steps instead")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="DOT output (default)")
    fmt.add_argument("--json", action="store_true", help="structured state dump (with --engine-steps)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("corpus", help="run the built-in corpus")
    p.add_argument("--check", action="store_true", help="run the state checker after every step")
    p.add_argument("--filter", help="only instances whose name contains this")
    p.add_argument("--max-n", type=int, help="only instances with at most this many vertices")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write graph and sequence files per instance into this directory")
    p.add_argument("--list", action="store_true", help="list the instances and exit")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "json", False) and getattr(args, "engine_steps", None) is None:
        print("error: --json needs --engine-steps", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, TriangulationError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
