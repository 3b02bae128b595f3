"""Command-line front end: ``rcmatch generate | match | experiment``.

Exit status: 0 success or pass, 1 tolerance failure, 2 usage or IO error.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .construct import validate_matching, write_matching
from .genmodel import OddDegreeSum, ResampleLimitExceeded, read_degrees, regular_sequence, sample_configuration
from .multigraph import GraphError, read_edgelist, write_edgelist
from .rng import stream

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_LIMIT = 200


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rcmatch", description="Reduce-Construct matching on random multigraphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--backend", choices=("python", "compiled"), default=None,
                   help="kernel implementation (default: compiled when built)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a loop-free configuration-model multigraph")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--regular", nargs=2, type=int, metavar=("N", "K"))
    src.add_argument("--degrees", metavar="FILE", help="one degree per line")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--simple", action="store_true", help="also reject parallel edges")
    g.add_argument("--out", default="-", help="edge-list path (default: stdout)")

    m = sub.add_parser("match", help="run Reduce-Construct on an edge-list file")
    m.add_argument("graph")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--fallback", action="store_true", help="use the exact matcher unless the result is near-perfect")
    m.add_argument("--verify", action="store_true", help=f"compare with the exact size (n <= {VERIFY_LIMIT})")
    m.add_argument("--double-edge", choices=("match", "contract"), default="match")
    m.add_argument("--out", help="matching file (u v edge_id per line)")
    m.add_argument("--log", help="action log as JSON lines")

    e = sub.add_parser("experiment", help="run a batch of seeded trials")
    e.add_argument("name", choices=("perfect-rate", "runtime-scaling", "drift", "remA", "excess", "survival"))
    e.add_argument("--trials", type=int, default=10)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--n", type=_int_list, default=[10000], help="comma-separated vertex counts")
    e.add_argument("--k", type=_int_list, default=[3], help="comma-separated degrees")
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--out", help="output directory (default: $RCMATCH_OUT/<name> or rcmatch-out/<name>)")
    return p


def cmd_generate(args) -> int:
    if args.regular:
        n, k = args.regular
        if n < 0 or k < 3:
            raise UsageError("--regular needs N >= 0 and K >= 3")
        seq = regular_sequence(n, k)
    else:
        seq = read_degrees(args.degrees)
    g = sample_configuration(seq, stream(args.seed, 0), simple=args.simple, backend=args.backend)
    if args.out == "-":
        write_edgelist(g, sys.stdout)
    else:
        write_edgelist(g, args.out)
        print(f"wrote {g.num_vertices} vertices, {g.num_edges} edges to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_match(args) -> int:
    from .oracle import max_matching_exact
    from .pipeline import reduce_construct
    from .reduce import Monitors

    g = read_edgelist(args.graph)
    res = reduce_construct(g, stream(args.seed, 1), monitors=Monitors(double_edge=args.double_edge),
                           backend=args.backend)
    M = res.matching
    seconds = res.seconds
    if args.fallback and len(M) != g.num_vertices // 2:
        t0 = time.perf_counter()
        exact = max_matching_exact(g)
        seconds += time.perf_counter() - t0
        if len(exact) > len(M):
            M = exact
    chk = validate_matching(M, g)
    if not chk.valid:
        print("error: produced matching is not valid", file=sys.stderr)
        return EXIT_FAIL
    counts = res.trace.kind_counts()
    counts.pop("initial", None)
    print(f"vertices={g.num_vertices} edges={g.num_edges}")
    print(f"size={chk.size} perfect={'true' if chk.perfect else 'false'} source={M.source}")
    print(f"time={seconds:.6f}s")
    print("hyperactions " + (" ".join(f"{k}={v}" for k, v in counts.items()) or "none"))
    status = EXIT_OK
    if args.verify:
        if g.num_vertices > VERIFY_LIMIT:
            raise UsageError(f"--verify needs at most {VERIFY_LIMIT} vertices, graph has {g.num_vertices}")
        best = len(max_matching_exact(g))
        same = best == chk.size
        print(f"verify exact={best} {'match' if same else 'MISMATCH'}")
        status = EXIT_OK if same else EXIT_FAIL
    if args.out:
        write_matching(M, g, args.out)
    if args.log:
        res.log.to_jsonl(args.log)
    return status


def cmd_experiment(args) -> int:
    from .experiments import run_experiment, summary_lines

    if args.trials < 1 or args.threads < 1:
        raise UsageError("--trials and --threads must be positive")
    try:
        res = run_experiment(args.name, ns=args.n, ks=args.k, trials=args.trials, seed=args.seed,
                             threads=args.threads, out_dir=args.out, backend=args.backend)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for line in summary_lines(res):
        print(line)
    print(f"results in {res.out_dir}")
    return EXIT_OK if res.passed else EXIT_FAIL


COMMANDS = {"generate": cmd_generate, "match": cmd_match, "experiment": cmd_experiment}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except OddDegreeSum as exc:
        print(f"error: OddDegreeSum: {exc}", file=sys.stderr)
    except (UsageError, ResampleLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (OSError, GraphError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
