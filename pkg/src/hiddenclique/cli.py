"""Command-line interface.

Subcommands: generate (write an instance), solve (recover on one instance),
experiment (seeded Monte Carlo grid), tune (optimize knobs for a clique
constant), calibrate (reproduce the critical constants). Exit codes:
0 success, 1 recovery failure, 2 invalid input, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .analytics import CliqueParams, DenseParams, critical_c
from .errors import HiddenCliqueError, InvalidParams
from .formats import load_instance, planted_from_meta, save_instance
from .graph import generate_planted
from .harness import (
    ExperimentConfig,
    calibrate_constants,
    run_experiment,
    summarize,
    tune_params,
    _build_cells,
)
from .solver import SolveMode, amplify, solve

EXIT_OK = 0
EXIT_RECOVERY_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_IO_ERROR = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiddenclique",
        description="Plant and recover hidden cliques/dense subgraphs in random graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a planted instance to disk")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--p", type=float, default=0.5)
    gen.add_argument("--q", type=float, default=1.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--format", choices=("bits", "edges"), default="bits")

    sol = sub.add_parser("solve", help="recover the planted set of one instance")
    sol.add_argument("instance", help="graph file (HCBM or HCG-EDGES)")
    sol.add_argument(
        "--mode",
        choices=("basic", "variant", "dense", "kucera", "amplify"),
        default="basic",
    )
    sol.add_argument("--alpha", type=float)
    sol.add_argument("--beta", type=float)
    sol.add_argument("--eta", type=float)
    sol.add_argument("--k", type=int, help="planted size (defaults to the sidecar)")
    sol.add_argument("--seed", type=int, default=0, help="solver randomness seed")
    sol.add_argument("--p", type=float, help="background edge probability (dense)")
    sol.add_argument("--q", type=float, help="planted edge probability (dense)")
    sol.add_argument("--r", type=int, default=2, help="amplification anchor size")
    sol.add_argument("--max-trials", type=int, default=100)

    exp = sub.add_parser("experiment", help="run a seeded Monte Carlo grid")
    exp.add_argument("--config", help="JSON file mirroring ExperimentConfig")
    exp.add_argument("--mode", default="basic")
    exp.add_argument("--n", type=int, nargs="+", dest="n_values")
    exp.add_argument("--c", type=float, nargs="+", dest="c_values")
    exp.add_argument("--k", type=int, nargs="+", dest="k_values")
    exp.add_argument("--p", type=float, nargs="+", dest="p_values")
    exp.add_argument("--q", type=float, nargs="+", dest="q_values")
    exp.add_argument("--trials", type=int, default=100)
    exp.add_argument("--master-seed", type=int, default=0)
    exp.add_argument("--workers", type=int, default=1)
    exp.add_argument("--out", dest="output")
    exp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    exp.add_argument("--no-timings", action="store_true")

    tune = sub.add_parser("tune", help="optimize knobs for a clique constant")
    tune.add_argument("--c", type=float, required=True)
    tune.add_argument("--mode", choices=("basic", "variant", "dense"), default="basic")
    tune.add_argument("--n", type=int, help="instance size for floor-aware tuning")
    tune.add_argument("--p", type=float, default=0.3)
    tune.add_argument("--q", type=float, default=0.8)

    cal = sub.add_parser("calibrate", help="reproduce the critical constants")
    cal.add_argument("--mode", choices=("basic", "variant"), default="basic")

    return parser


def _cmd_generate(args) -> int:
    inst = generate_planted(args.n, args.k, args.p, args.q, args.seed)
    save_instance(inst, args.out, fmt=args.format)
    print(json.dumps({"path": args.out, "n": inst.n, "k": inst.k, "seed": inst.seed}))
    return EXIT_OK


def _cmd_solve(args) -> int:
    graph, meta = load_instance(args.instance)
    planted = planted_from_meta(graph, meta) if meta else None
    k = args.k if args.k is not None else (meta["k"] if meta else None)
    if k is None:
        raise InvalidParams("no --k given and the instance has no sidecar")
    p = args.p if args.p is not None else (meta["p"] if meta else 0.5)
    q = args.q if args.q is not None else (meta["q"] if meta else 1.0)
    dense = DenseParams(p, q) if args.mode == "dense" else None

    params = None
    if args.mode != "kucera":
        c_eff = k / (max(1, graph.n) ** 0.5)
        if args.alpha is None or args.beta is None:
            tune_mode = "basic" if args.mode in ("amplify", "kucera") else args.mode
            c_tune = c_eff * (2.0 ** (args.r / 2.0)) if args.mode == "amplify" else c_eff
            n_tune = max(2, graph.n >> args.r) if args.mode == "amplify" else graph.n
            params, _ = tune_params(tune_mode, c_tune, n=n_tune, dense=dense)
        else:
            params = CliqueParams(
                alpha=args.alpha,
                beta=args.beta,
                c=c_eff,
                eta=args.eta,
            )

    if args.mode == "amplify":
        result = amplify(
            graph,
            k,
            args.r,
            params,
            seed=args.seed,
            max_trials=args.max_trials,
            planted=planted,
        )
    else:
        result = solve(
            graph,
            k,
            params,
            mode=args.mode,
            seed=args.seed,
            planted=planted,
            dense=dense,
        )

    payload = {
        "mode": result.mode.value,
        "failure": result.failure,
        "success": result.success,
        "trials": result.trials,
        "candidate": (
            [int(v) for v in result.candidate.indices()]
            if result.candidate is not None
            else None
        ),
        "trace": [
            {
                "level": row.level,
                "n": row.n_alive,
                "k": row.k_alive,
                "sample": row.sample_size,
            }
            for row in result.trace
        ],
        "timings_ms": result.timings_ms,
        "params": (
            {
                "alpha": params.alpha,
                "beta": params.beta,
                "eta": params.eta,
                "c": params.c,
            }
            if params
            else None
        ),
    }
    print(json.dumps(payload))
    recovered = result.failure is None and (result.success is None or result.success)
    return EXIT_OK if recovered else EXIT_RECOVERY_FAILURE


def _cmd_experiment(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = ExperimentConfig.from_json(fh.read())
        if args.output:
            config = replace(config, output=args.output)
    else:
        config = ExperimentConfig(
            mode=args.mode,
            n_values=tuple(args.n_values or (1000,)),
            c_values=tuple(args.c_values) if args.c_values else None,
            k_values=tuple(args.k_values) if args.k_values else None,
            p_values=tuple(args.p_values or (0.5,)),
            q_values=tuple(args.q_values or (1.0,)),
            trials=args.trials,
            master_seed=args.master_seed,
            workers=args.workers,
            output=args.output,
            fmt=args.fmt,
            include_timings=not args.no_timings,
        )
    records = run_experiment(config)
    summary = summarize(records, _build_cells(config))
    print(json.dumps({"summary": summary}, sort_keys=True))
    return EXIT_OK


def _cmd_tune(args) -> int:
    dense = DenseParams(args.p, args.q) if args.mode == "dense" else None
    params, rates = tune_params(args.mode, args.c, n=args.n, dense=dense)
    ct = critical_c(params.alpha, params.beta, eta=params.eta, dense=dense)
    payload = {
        "alpha": params.alpha,
        "beta": params.beta,
        "eta": params.eta,
        "tau": rates.tau,
        "rho": rates.rho,
        "growth": rates.growth,
        "critical_c": ct,
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    print(json.dumps(calibrate_constants(args.mode), sort_keys=True))
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "experiment": _cmd_experiment,
    "tune": _cmd_tune,
    "calibrate": _cmd_calibrate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except HiddenCliqueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
