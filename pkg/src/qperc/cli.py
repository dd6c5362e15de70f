"""Command-line front end.

Subcommands compose through files (or stdin/stdout with ``-``):
generate -> preprocess -> sweep -> threshold, plus degree-stats,
walk-verify and the reproduce bundles. Every file written gets a sibling
``<name>.manifest.json`` recording the exact invocation.

Exit codes: 0 success, 2 usage error, 3 input parse error,
4 reproduction-check failure, 5 file I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .generators import FAMILIES, GeneratorSpec
from .graph import GraphParseError, degree_stats, parse, serialize
from .percolation import (
    BIDIRECTIONAL_RULES,
    NoThresholdError,
    PercolationConfig,
    PercolationCurve,
    estimate_threshold,
    sweep,
)
from .preprocess import POLICIES, qswap_directed, qswap_undirected, walk_rewrite
from .recipes import FIGURES, run_figure, write_figure
from .walk import GHZ_STEP_COINS, ghz_generation_fidelity

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CLAIMS = 4
EXIT_IO = 5


class _UsageError(Exception):
    pass


def _default_seed() -> int:
    return int(os.environ.get("QPERC_SEED", "0"))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_output(path: str, text: str, subcommand: str, params: dict, inputs: list):
    if path == "-":
        sys.stdout.write(text)
        return
    out = Path(path)
    out.write_text(text)
    manifest = {
        "tool": "qperc",
        "version": __version__,
        "subcommand": subcommand,
        "params": params,
        "inputs": inputs,
        "outputs": [str(out)],
    }
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _generator_spec(args) -> GeneratorSpec:
    params = {}
    if args.family == "ws":
        params = {"n": args.n, "k": args.k, "beta": args.beta}
    elif args.family == "kleinberg":
        params = {"side": args.side, "z": args.z, "clustering_exp": args.clustering_exp}
    elif args.family == "er":
        params = {"n": args.n, "mean_degree": args.mean_degree}
    elif args.family == "square-lattice":
        params = {"side": args.side}
    elif args.family == "ring-regular":
        params = {"n": args.n, "k": args.k}
    missing = [key for key, value in params.items() if value is None]
    if missing:
        raise _UsageError(f"family {args.family!r} needs --{', --'.join(missing)}")
    return GeneratorSpec(args.family, args.lambda1, args.seed, params)


def _cmd_generate(args) -> int:
    g = _generator_spec(args).build()
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out") and v is not None}
    _write_output(args.out, serialize(g), "generate", params, [])
    return EXIT_OK


def _cmd_degree_stats(args) -> int:
    g = parse(_read_text(args.infile))
    st = degree_stats(g)
    print(f"mean_k,{st.mean_k:.6f}")
    print(f"mean_k2,{st.mean_k2:.6f}")
    sections = [("degree", st)]
    if g.directed:
        sections += [("in_degree", st.in_stats), ("out_degree", st.out_stats)]
    for prefix, stats in sections:
        for degree in sorted(stats.histogram):
            print(f"{prefix}_{degree},{stats.histogram[degree]}")
    return EXIT_OK


def _cmd_preprocess(args) -> int:
    g = parse(_read_text(args.infile))
    if args.op == "qswap":
        if args.q is not None:
            out, report = qswap_undirected(g, args.q, args.seed, args.policy)
        elif args.q_in is not None or args.q_out is not None:
            out, report = qswap_directed(g, args.q_in, args.q_out, args.seed, args.policy)
        else:
            raise _UsageError("qswap needs --q or --q-in/--q-out")
    else:
        mode = "triangle-independent" if args.mode == "triangle" else "atomic-ghz"
        out, report = walk_rewrite(g, mode, args.seed)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out") and v is not None}
    _write_output(args.out, serialize(out), "preprocess", params, [args.infile])
    print("centers_swapped,edges_consumed,edges_created,nodes_isolated")
    print(report.as_csv_line())
    return EXIT_OK


def _cmd_sweep(args) -> int:
    g = parse(_read_text(args.infile))
    count = int(round((args.p_max - args.p_min) / args.p_step)) + 1
    p_values = tuple(np.round(np.linspace(args.p_min, args.p_max, count), 10))
    cfg = PercolationConfig(
        p_values=p_values,
        trials_per_point=args.trials,
        seed=args.seed,
        bidirectional_rule=args.rule,
        coupled=args.coupled,
    )
    curve = sweep(g, cfg)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out") and v is not None}
    _write_output(args.out, curve.to_csv(), "sweep", params, [args.infile])
    return EXIT_OK


def _cmd_threshold(args) -> int:
    try:
        curve = PercolationCurve.from_csv(_read_text(args.infile))
    except ValueError as exc:
        raise GraphParseError(str(exc), 1) from None
    try:
        print(f"{estimate_threshold(curve, args.method, args.theta):.6f}")
    except NoThresholdError:
        print("no-threshold")
    return EXIT_OK


def _cmd_walk_verify(args) -> int:
    norm = np.hypot(args.a, args.b)
    if norm == 0:
        raise _UsageError("need (a, b) != (0, 0)")
    fidelity = ghz_generation_fidelity(args.a / norm, args.b / norm)
    print(f"step_coins,{','.join(str(c) for c in GHZ_STEP_COINS)}")
    print(f"fidelity,{fidelity:.15f}")
    return EXIT_OK if fidelity >= 1.0 - 1e-10 else 1


def _cmd_reproduce(args) -> int:
    if args.figure not in FIGURES:
        raise _UsageError(f"unknown figure id {args.figure!r}; expected one of {FIGURES}")
    start = time.time()
    result = run_figure(args.figure, seed=args.seed, trials=args.trials)
    written = write_figure(result, args.out_dir)
    for desc, ok in result.claims:
        print(f"{'PASS' if ok else 'FAIL'} {desc}")
    print(f"wrote {len(written)} files to {args.out_dir} in {time.time() - start:.1f}s")
    return EXIT_OK if result.all_claims_pass else EXIT_CLAIMS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qperc",
        description="Entanglement percolation in small-world quantum networks",
    )
    parser.add_argument("--version", action="version", version=f"qperc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a network family")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--side", type=int)
    p.add_argument("--z", type=int)
    p.add_argument("--clustering-exp", type=float, dest="clustering_exp")
    p.add_argument("--mean-degree", type=float, dest="mean_degree")
    p.add_argument("--lambda1", type=float, default=0.75)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("degree-stats", help="degree histogram and moments of a graph file")
    p.add_argument("--in", dest="infile", default="-")
    p.set_defaults(func=_cmd_degree_stats)

    p = sub.add_parser("preprocess", help="apply q-swap or quantum-walk rewrite")
    p.add_argument("--op", required=True, choices=("qswap", "walk"))
    p.add_argument("--q", type=int)
    p.add_argument("--q-in", type=int, dest="q_in")
    p.add_argument("--q-out", type=int, dest="q_out")
    p.add_argument("--mode", choices=("triangle", "ghz"), default="triangle")
    p.add_argument("--policy", choices=POLICIES, default="endpoint-ok")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--in", dest="infile", default="-")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("sweep", help="Monte Carlo GCC-vs-SCP sweep to CSV")
    p.add_argument("--in", dest="infile", default="-")
    p.add_argument("--p-min", type=float, default=0.0, dest="p_min")
    p.add_argument("--p-max", type=float, default=1.0, dest="p_max")
    p.add_argument("--p-step", type=float, default=0.01, dest="p_step")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--rule", choices=BIDIRECTIONAL_RULES, default="doubled")
    p.add_argument("--coupled", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("threshold", help="estimate percolation threshold from a sweep CSV")
    p.add_argument("--in", dest="infile", default="-")
    p.add_argument("--method", choices=("gcc-crossing", "susceptibility-peak"),
                   default="gcc-crossing")
    p.add_argument("--theta", type=float, default=0.05)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("walk-verify", help="check GHZ generation by the two-step quantum walk")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.set_defaults(func=_cmd_walk_verify)

    p = sub.add_parser("reproduce", help="run a named figure experiment bundle")
    p.add_argument("figure", help=f"one of {', '.join(FIGURES)}")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--out-dir", default=".", dest="out_dir")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
