"""Command-line entry point: ``rigidmlt <command> [options] [input]``.

Graphs are read from a file or stdin, as graph6 (one graph per line) or as an
edge list (``n m`` then m lines ``u v``).  Exit status is 0 on success, 1 on a
parse error and 2 when a size cap is hit or a check fails.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Iterator

from .census import run_census
from .fixtures import FIXTURE_NAMES, verify_fixture
from .graph import CapExceeded, Graph, GraphFormatError, parse_edge_list, parse_graph6
from .mlt import mlt_bounds
from .rigidity import DEFAULT_TRIALS, find_circuit_edges, gcr, generic_rank
from .stress import (
    analyze_stress,
    circuit_psd_witness,
    global_rigidity_test,
    random_framework,
    stress_basis,
)

DEFAULT_SEED = 0
EXIT_OK, EXIT_PARSE, EXIT_CHECK = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _graphs(args) -> Iterator[tuple[str, Graph | None, str | None]]:
    text = _read_text(args.input)
    if args.format == "edgelist":
        try:
            yield "1", parse_edge_list(text), None
        except GraphFormatError as exc:
            yield "1", None, str(exc)
        return
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s == ">>graph6<<":
            continue
        try:
            yield str(i), parse_graph6(s), None
        except GraphFormatError as exc:
            yield str(i), None, str(exc)


def _need_dim(args) -> int:
    if args.dim is None:
        raise _Fail(EXIT_PARSE, f"{args.command} needs --dim")
    if args.dim < 1:
        raise _Fail(EXIT_PARSE, "--dim must be >= 1")
    return args.dim


def _cmd_gcr(g: Graph, args) -> tuple[dict, str]:
    k = gcr(g, args.seed, args.trials)
    # gcr 1 means independent at d = 0, i.e. no edges
    rec = {"n": g.n, "m": g.m, "gcr": k, "zero_dim_convention": k == 1, "seed": args.seed}
    return rec, f"gcr {k}"


def _cmd_mlt(g: Graph, args) -> tuple[dict, str]:
    rep = mlt_bounds(g, args.seed, args.trials)
    status = "exact" if rep.exact else "open"
    return rep.to_json(), f"mlt in [{rep.mlt_lower}, {rep.mlt_upper}] ({status}), gcr {rep.gcr}, cone depth {rep.cone_depth}"


def _cmd_rigid(g: Graph, args) -> tuple[dict, str]:
    d = _need_dim(args)
    prof = generic_rank(g, d, args.seed, args.trials)
    rec = {"dim": d, "rigid": prof.rigid, "independent": prof.independent, "rank": prof.rank,
           "target_rigid": prof.target_rigid, "n": g.n, "m": g.m, "seed": args.seed}
    return rec, f"{'rigid' if prof.rigid else 'flexible'} in dimension {d} (rank {prof.rank} of {prof.target_rigid})"


def _cmd_circuit(g: Graph, args) -> tuple[dict, str]:
    d = _need_dim(args)
    edges = find_circuit_edges(g, d, args.seed, args.trials)
    rec = {"dim": d, "circuit": None if edges is None else [list(e) for e in edges], "seed": args.seed}
    text = "independent" if edges is None else " ".join(f"{u}-{v}" for u, v in edges)
    return rec, text


def _cmd_globally_rigid(g: Graph, args) -> tuple[dict, str]:
    d = _need_dim(args)
    verdict = global_rigidity_test(g, d, args.seed, args.trials)
    return {"dim": d, "verdict": verdict.value, "seed": args.seed}, verdict.value


def _cmd_stress(g: Graph, args) -> tuple[dict, str]:
    d = _need_dim(args)
    if args.witness:
        try:
            w = circuit_psd_witness(g, d, args.seed, args.witness_trials)
        except ValueError as exc:
            raise _Fail(EXIT_CHECK, str(exc)) from None
        rec = {"dim": d, "witness": None if w is None else w.to_json(), "seed": args.seed}
        if w is None:
            return rec, "no PSD stress found"
        return rec, f"PSD stress of rank {w.report.rank} ({'certified' if w.certified else 'heuristic'})"
    f = random_framework(g, d, args.seed)
    generic = generic_rank(g, d, args.seed, args.trials).rank
    stresses = [analyze_stress(f, w, generic) for w in stress_basis(f)]
    rec = {
        "dim": d,
        "framework": f.to_json(),
        "stress_dim": len(stresses),
        "stresses": [dict(r.to_json(), weights=[str(x) for x in r.stress.weights]) for r in stresses],
        "seed": args.seed,
    }
    return rec, f"stress space of dimension {len(stresses)}" + "".join(
        f"\n  rank {r.rank} inertia (+{r.inertia.n_plus}, -{r.inertia.n_minus}, 0:{r.inertia.n_zero})" for r in stresses
    )


_GRAPH_COMMANDS = {
    "gcr": _cmd_gcr,
    "mlt": _cmd_mlt,
    "rigid": _cmd_rigid,
    "circuit": _cmd_circuit,
    "globally-rigid": _cmd_globally_rigid,
    "stress": _cmd_stress,
}


def _emit(args, rec: dict, text: str) -> None:
    print(json.dumps(rec) if args.output == "json" else text, flush=True)


def _run_graph_command(args) -> int:
    handler = _GRAPH_COMMANDS[args.command]
    code = EXIT_OK
    for label, g, err in _graphs(args):
        if g is None:
            print(f"error: input {label}: {err}", file=sys.stderr)
            code = max(code, EXIT_PARSE)
            continue
        try:
            rec, text = handler(g, args)
        except CapExceeded as exc:
            print(f"error: input {label}: {exc}", file=sys.stderr)
            code = EXIT_CHECK
            continue
        _emit(args, rec, text)
    return code


def _run_verify(args) -> int:
    names = FIXTURE_NAMES if args.fixture is None else (args.fixture,)
    points = None
    if args.points is not None:
        if args.fixture is None:
            raise _Fail(EXIT_PARSE, "--points needs --fixture")
        try:
            points = json.loads(_read_text(args.points))
        except json.JSONDecodeError as exc:
            raise _Fail(EXIT_PARSE, f"--points: {exc}") from None
    t0 = time.perf_counter()
    reports = [verify_fixture(n, points) for n in names]
    elapsed = time.perf_counter() - t0
    passed = sum(r.passed for r in reports)
    for r in reports:
        for msg in r.failures:
            print(f"fixture mismatch: {msg}", file=sys.stderr)
    if args.output == "json":
        print(json.dumps({"fixtures": [r.to_json() for r in reports], "passed": passed,
                          "total": len(reports), "elapsed_seconds": round(elapsed, 3)}))
    else:
        for r in reports:
            print(f"{r.name}: {'pass' if r.passed else 'FAIL'}")
        print(f"{passed}/{len(reports)} fixtures pass in {elapsed:.2f}s")
    return EXIT_OK if passed == len(reports) else EXIT_CHECK


def _run_census(args) -> int:
    text = _read_text(args.input)

    def warn(msg):
        print(f"warning: {msg}", file=sys.stderr)

    summary = run_census(
        text.splitlines(),
        emit=lambda line: print(line),
        seed=args.seed,
        trials=args.trials,
        jobs=args.jobs,
        cone_samples=args.cone_samples,
        sandwich_samples=args.sandwich_samples,
        warn=warn,
    )
    print(json.dumps(summary.to_json()))
    if summary.total_violations:
        print(f"error: {summary.total_violations} invariant violations", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _positive(value: str) -> int:
    k = int(value)
    if k < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return k


def _seed(value: str) -> int:
    k = int(value, 0)
    if not 0 <= k < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return k


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--trials", type=_positive, default=DEFAULT_TRIALS, help="random frameworks per rank test")
    common.add_argument("--output", choices=("json", "text"), default="json")

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("input", nargs="?", default="-", help="input file (default stdin)")
    graph_in.add_argument("--format", choices=("graph6", "edgelist"), default="graph6")
    graph_in.add_argument("--dim", type=int, default=None, help="dimension d")

    p = argparse.ArgumentParser(prog="rigidmlt", description="Generic rigidity, stresses and MLT bounds for small graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "gcr": "generic completion rank",
        "mlt": "certified bounds on the maximum likelihood threshold",
        "rigid": "generic d-rigidity (needs --dim)",
        "circuit": "extract a d-circuit (needs --dim)",
        "globally-rigid": "certify global d-rigidity (needs --dim)",
        "stress": "equilibrium stresses at a random framework (needs --dim)",
    }
    for name, h in helps.items():
        sp = sub.add_parser(name, parents=[common, graph_in], help=h)
        if name == "stress":
            sp.add_argument("--witness", action="store_true", help="search for a PSD stress on a d-circuit")
            sp.add_argument("--witness-trials", type=_positive, default=64)

    vp = sub.add_parser("verify-fixtures", parents=[common], help="check the built-in exact fixtures")
    vp.add_argument("--fixture", choices=FIXTURE_NAMES, default=None)
    vp.add_argument("--points", default=None, help="JSON file of replacement coordinates for --fixture")

    cp = sub.add_parser("census", parents=[common], help="run the pipeline over a graph6 stream (JSONL)")
    cp.add_argument("input", nargs="?", default="-")
    cp.add_argument("--jobs", type=_positive, default=1)
    cp.add_argument("--cone-samples", type=int, default=200)
    cp.add_argument("--sandwich-samples", type=int, default=200)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-fixtures":
            return _run_verify(args)
        if args.command == "census":
            return _run_census(args)
        return _run_graph_command(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
