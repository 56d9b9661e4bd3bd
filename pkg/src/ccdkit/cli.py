"""Command line entry point: ``ccd-bench run`` and ``ccd-bench gen``.

The file format does not carry the query kind, so both subcommands take
``--kind vf|ee`` and operate on single-kind files.  ``run`` exits with
status 2 when a conservative method (ours or irf) reports any false
negative, so a pipeline can use it as a regression guard.
"""

from __future__ import annotations

import argparse
import sys

from .bench import METHOD_NAMES, emit_report, format_report, run_benchmark
from .core import QueryKind, SolverConfig
from .dataset import Profile, gen_handcrafted, gen_random, parse_queries, write_queries

_KINDS = {"vf": QueryKind.VERTEX_FACE, "ee": QueryKind.EDGE_EDGE}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccd-bench",
        description="Benchmark conservative CCD methods on labeled query sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run methods over a dataset file")
    run.add_argument("--dataset", required=True, help="query CSV (may be .gz)")
    run.add_argument("--kind", required=True, choices=sorted(_KINDS),
                     help="query kind stored in the file")
    run.add_argument("--methods", default=",".join(METHOD_NAMES),
                     help="comma-separated subset of %s" % (METHOD_NAMES,))
    run.add_argument("--delta", type=float, default=1e-6,
                     help="codomain tolerance (default 1e-6)")
    run.add_argument("--max-checks", type=int, default=1_000_000,
                     help="box-evaluation budget (default 1e6)")
    run.add_argument("--separation", type=float, default=0.0,
                     help="minimum separation distance d (default 0)")
    run.add_argument("--tmax", type=float, default=1.0,
                     help="upper end of the time interval (default 1)")
    run.add_argument("--seed", type=int, default=None,
                     help="echoed into the report for provenance")
    run.add_argument("--degenerate-as", choices=("collision", "no_collision"),
                     default="no_collision",
                     help="how a degenerate univariate verdict is scored")
    run.add_argument("--out", default=None,
                     help="report path (default: print to stdout)")
    run.add_argument("--format", choices=("json", "csv"), default="json")

    gen = sub.add_parser("gen", help="generate a labeled dataset file")
    gen.add_argument("--profile", required=True, choices=("handcrafted", "random"))
    gen.add_argument("--kind", required=True, choices=sorted(_KINDS),
                     help="emit only this query kind")
    gen.add_argument("--n", type=int, default=1000,
                     help="record count for --profile random (default 1000)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--flavor", choices=("simulation-like", "adversarial"),
                     default="simulation-like",
                     help="random set flavor (default simulation-like)")
    gen.add_argument("--positive-fraction", type=float, default=None,
                     help="override the flavor's collision fraction")
    gen.add_argument("--out", required=True, help="output CSV path (.gz compresses)")
    return ap


def _cmd_run(args) -> int:
    queries = parse_queries(args.dataset, _KINDS[args.kind])
    methods = [m for m in args.methods.split(",") if m.strip()]
    cfg = SolverConfig(delta=args.delta, max_checks=args.max_checks,
                       separation=args.separation, t_max=args.tmax)
    report = run_benchmark(queries, methods, cfg, seed=args.seed,
                           degenerate_as=args.degenerate_as)
    if args.out is None:
        sys.stdout.write(format_report(report, args.format))
    else:
        emit_report(report, args.format, args.out)
        for m in report.methods:
            print(f"{m.name}: avg {m.avg_time_us:.2f} us, "
                  f"fp {m.fp_count}, fn {m.fn_count}, early {m.early_count}")
        print(f"report written to {args.out}")
    guard = [m for m in report.methods if m.name in ("ours", "irf") and m.fn_count]
    if guard:
        for m in guard:
            print(f"error: conservative method {m.name} has "
                  f"{m.fn_count} false negatives", file=sys.stderr)
        return 2
    return 0


def _cmd_gen(args) -> int:
    kind = _KINDS[args.kind]
    if args.profile == "handcrafted":
        queries = [lq for lq in gen_handcrafted() if lq.kind is kind]
        dropped = 0
    else:
        flavor = (Profile.SIMULATION_LIKE if args.flavor == "simulation-like"
                  else Profile.ADVERSARIAL)
        queries, dropped = gen_random(args.n, args.seed, flavor,
                                      positive_fraction=args.positive_fraction,
                                      kind=kind)
    write_queries(queries, args.out)
    pos = sum(lq.truth for lq in queries)
    print(f"wrote {len(queries)} records ({pos} colliding) to {args.out}"
          + (f", dropped {dropped} undecided" if dropped else ""))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_gen(args)


if __name__ == "__main__":
    sys.exit(main())
