"""Command-line interface: thresholds, cores, orientation, XOR systems, sweeps.

Every subcommand is a pure function of its flags (randomness always flows
from an explicit --seed), numeric output uses C-locale formatting, and
analytic thresholds print with 10 decimal places.

Exit codes: 0 success, 2 flag/usage errors, 3 domain or numerical failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import NumericalError, SubcriticalDensityError, UnsupportedCaseError
from .experiments import (
    METHODS,
    SweepConfig,
    fit_sigmoid,
    format_records_csv,
    parse_records_csv,
    run_sweep,
)
from .hypergraph import peel, sample_mixed, sample_regular
from .orientation import matching_orient, selfless_orient, verify
from .thresholds import (
    DegreeSpec,
    mixed_predict_core,
    mixed_threshold,
    orientation_threshold,
    predict_core,
)
from .xorsat import from_hypergraph, rank_and_solve

__all__ = ["main", "build_parser"]


def _add_size_options(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=int, help="fixed number of choices per key (edge size)")
    grp.add_argument(
        "--spec",
        type=str,
        help='degree distribution as JSON, e.g. \'{"3": 0.5, "4": 0.5}\' '
        'or \'{"weights": {...}}\'',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuckoo-thresholds",
        description="Load thresholds for k-ary cuckoo hashing: analytic "
        "fixed-point solutions and simulation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "threshold",
        help="analytic appearance point and load threshold",
        description="Solve the fixed-point equations and print c_star, "
        "beta_star and the load threshold with 10 decimal places.",
    )
    _add_size_options(p)
    p.add_argument("--ell", type=int, default=2, help="core order (default 2)")

    p = sub.add_parser(
        "core",
        help="predicted ell-core make-up, optionally checked by simulation",
        description="Print the asymptotic core prediction at density c; with "
        "--m also sample hypergraphs, peel them and report empirical values.",
    )
    _add_size_options(p)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--c", type=float, required=True, help="edge density n/m")
    p.add_argument("--m", type=int, help="simulate at this node count")
    p.add_argument("--trials", type=int, default=5, help="simulated instances")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser(
        "orient",
        help="orient one random instance (greedy or exact matching)",
        description="Sample one hypergraph and try to orient it.",
    )
    _add_size_options(p)
    p.add_argument("--ell", type=int, default=1, help="bucket capacity (default 1)")
    p.add_argument("--m", type=int, required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int, help="edge count")
    grp.add_argument("--c", type=float, help="edge density; n = round(c*m)")
    p.add_argument(
        "--method", choices=("selfless", "matching"), default="selfless"
    )
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser(
        "xorsat",
        help="rank/satisfiability of one random XOR system",
        description="Sample a hypergraph, attach random right-hand sides and "
        "solve the induced GF(2) system.",
    )
    _add_size_options(p)
    p.add_argument("--m", type=int, required=True, help="variable count")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int, help="equation count")
    grp.add_argument("--c", type=float, help="equation density; n = round(c*m)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump", type=str, help="write the system to this file")

    p = sub.add_parser(
        "sweep",
        help="failure-rate sweep over a density grid (CSV, optional fit)",
        description="Run trials of the selected methods at each grid density "
        "and write one CSV row per (density, method). Defaults give an "
        "81-point grid and 100 trials.",
    )
    _add_size_options(p)
    p.add_argument("--ell", type=int, default=1, help="bucket capacity (default 1)")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--center", type=float, required=True, help="grid midpoint")
    p.add_argument("--half-width", type=float, default=0.004)
    p.add_argument("--step", type=float, default=0.0001)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument(
        "--methods",
        type=str,
        default="selfless",
        help=f"comma-separated subset of {','.join(METHODS)}",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", type=str, help="CSV path (default: stdout)")
    p.add_argument(
        "--fit",
        action="store_true",
        help="append a sigmoid-fit JSON line per method",
    )
    p.add_argument("--config", type=str, help="read sweep settings from a JSON file")

    p = sub.add_parser(
        "fit",
        help="sigmoid fit of an existing sweep CSV",
        description="Fit 1/(1+exp(-(c-a)/b)) to the failure rates of one "
        "method in a sweep CSV and print the fit as JSON.",
    )
    p.add_argument("--csv", type=str, required=True, help="sweep CSV path")
    p.add_argument(
        "--method", type=str, help="method column to fit (default: the only one)"
    )
    return parser


def _parse_spec(text: str) -> DegreeSpec:
    return DegreeSpec.from_json(text)


def _fit_json(method: str, records) -> str:
    points = [(r.c, r.rate) for r in records if r.method == method]
    fit = fit_sigmoid(points)
    return json.dumps(
        {
            "method": method,
            "a": fit.a,
            "b": fit.b,
            "sum_res": fit.sum_res,
            "converged": fit.converged,
        }
    )


def _cmd_threshold(args) -> int:
    if args.k is not None:
        result = orientation_threshold(args.k, args.ell)
    else:
        result = mixed_threshold(_parse_spec(args.spec), args.ell)
    print(f"c_star      = {result.c_star:.10f}")
    print(f"beta_star   = {result.beta_star:.10f}")
    print(f"c_threshold = {result.c_threshold:.10f}")
    print(f"residual    = {result.residual:.3e}")
    return 0


def _cmd_core(args) -> int:
    spec = _parse_spec(args.spec) if args.spec is not None else None
    if spec is None:
        pred = predict_core(args.k, args.ell, args.c)
    else:
        pred = mixed_predict_core(spec, args.ell, args.c)
    print(f"beta          = {pred.beta:.10f}")
    print(f"node_fraction = {pred.node_fraction:.10f}")
    print(f"edge_fraction = {pred.edge_fraction:.10f}")
    print(f"edge_density  = {pred.edge_density:.10f}")
    if args.m is not None:
        n = int(round(args.c * args.m))
        node_sum = edge_sum = 0.0
        for trial in range(args.trials):
            seed = args.seed + trial
            if spec is None:
                g = sample_regular(args.m, n, args.k, seed)
            else:
                g = sample_mixed(args.m, n, spec, seed)
            stats, _ = peel(g, args.ell)
            node_sum += stats.core_nodes / args.m
            edge_sum += stats.core_edges / n if n else 0.0
        print(f"simulated node_fraction = {node_sum / args.trials:.10f}")
        print(f"simulated edge_fraction = {edge_sum / args.trials:.10f}")
    return 0


def _cmd_orient(args) -> int:
    n = args.n if args.n is not None else int(round(args.c * args.m))
    if args.spec is not None:
        g = sample_mixed(args.m, n, _parse_spec(args.spec), args.seed)
    else:
        g = sample_regular(args.m, n, args.k, args.seed)
    if args.method == "selfless":
        o = selfless_orient(g, args.ell, args.seed)
    else:
        o = matching_orient(g, args.ell)
    if o.success:
        print(f"success: oriented {g.n} edges over {g.m} nodes (ell={args.ell})")
        print(f"verified: {verify(g, o, args.ell)}")
    elif o.failure_step is not None:
        print(f"failure at step {o.failure_step} of {g.n}")
    else:
        print(f"failure: no orientation exists (ell={args.ell})")
    return 0


def _cmd_xorsat(args) -> int:
    n = args.n if args.n is not None else int(round(args.c * args.m))
    if args.spec is not None:
        g = sample_mixed(args.m, n, _parse_spec(args.spec), args.seed)
    else:
        g = sample_regular(args.m, n, args.k, args.seed)
    system = from_hypergraph(g, args.seed)
    rank, satisfiable, _ = rank_and_solve(system)
    print(f"rows = {system.num_rows}")
    print(f"vars = {system.num_vars}")
    print(f"rank = {rank}")
    print(f"satisfiable = {satisfiable}")
    if args.dump:
        with open(args.dump, "w", newline="\n") as fh:
            fh.write(system.to_text())
        print(f"wrote {args.dump}")
    return 0


def _sweep_config(args) -> SweepConfig:
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        spec = None
        if data.get("spec") is not None:
            spec = DegreeSpec.from_json(json.dumps(data["spec"]))
        return SweepConfig(
            m=data["m"],
            ell=data["ell"],
            center=data["center"],
            half_width=data["half_width"],
            step=data["step"],
            trials=data["trials"],
            master_seed=data.get("master_seed", 0),
            k=data.get("k"),
            spec=spec,
            methods=tuple(data.get("methods", ["selfless"])),
            jobs=data.get("jobs", 1),
        )
    spec = _parse_spec(args.spec) if args.spec is not None else None
    return SweepConfig(
        m=args.m,
        ell=args.ell,
        center=args.center,
        half_width=args.half_width,
        step=args.step,
        trials=args.trials,
        master_seed=args.seed,
        k=args.k,
        spec=spec,
        methods=tuple(args.methods.split(",")),
        jobs=args.jobs,
    )


def _cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    result = run_sweep(cfg)
    csv_text = format_records_csv(result.records)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.fit:
        for method in cfg.methods:
            print(_fit_json(method, result.records))
    return 0


def _cmd_fit(args) -> int:
    with open(args.csv) as fh:
        records = parse_records_csv(fh.read())
    methods = sorted({r.method for r in records})
    if args.method is not None:
        if args.method not in methods:
            raise ValueError(f"method {args.method!r} not in CSV (has {methods})")
        method = args.method
    elif len(methods) == 1:
        method = methods[0]
    else:
        raise ValueError(f"CSV holds methods {methods}; pick one with --method")
    print(_fit_json(method, records))
    return 0


_COMMANDS = {
    "threshold": _cmd_threshold,
    "core": _cmd_core,
    "orient": _cmd_orient,
    "xorsat": _cmd_xorsat,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (
        UnsupportedCaseError,
        SubcriticalDensityError,
        NumericalError,
        ValueError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
