"""Command-line interface.

Subcommands: estimate (run the adaptive selection on a data file), simulate
(Monte-Carlo MSE row for a distribution), sweep (RMSE-versus-k curve CSV),
bounds (second-order diagnostic table), sample (write draws to a file).

Every run echoes its fully resolved configuration as one JSON line on stderr
so the exact invocation can be replayed.  Exit codes: 0 success, 2 usage or
I/O problems, 3 estimation infeasible (no admissible candidate).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bounds import (
    SecondOrderParams,
    adaptive_error_bound,
    c2_of,
    check_grid_conditions,
    kstar_lower_bound,
    kstar_under_envelope,
    n0_upper_bound,
    oracle_error_bound,
)
from .deviation import Exact, MonteCarlo
from .distributions import parse_distribution
from .experiments import (
    MSE_CSV_HEADER,
    RMSE_CSV_HEADER,
    ExperimentConfig,
    mse_csv_row,
    rmse_curve,
    run_mse_experiment,
)
from .grids import NoAdmissibleK, k0_upper_bound as _k0_upper, parse_grid_spec
from .hill import order_sample
from .seeding import generator
from .selection import DEFAULT_SEED, EavConfig, NoAdmissibleCandidate, estimate as run_estimate

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_INFEASIBLE = 3


def _echo_config(name: str, resolved: dict) -> None:
    print(f"config: {json.dumps({'command': name, **resolved}, sort_keys=True)}", file=sys.stderr)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_mode(text: str, seed: int):
    if text == "exact":
        return Exact()
    if text == "mc":
        return MonteCarlo(seed=seed)
    if text.startswith("mc:"):
        return MonteCarlo(draws=int(text.split(":", 1)[1]), seed=seed)
    raise ValueError(f"unknown quantile mode {text!r} (use exact | mc[:<draws>])")


def _read_data(path: str) -> np.ndarray:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    values = []
    for idx, ln in enumerate(lines, start=1):
        if not ln:
            continue
        try:
            values.append(float(ln))
        except ValueError:
            raise ValueError(f"{path}:{idx}: not a decimal number: {ln!r}")
    if not values:
        raise ValueError(f"{path}: no observations")
    return np.array(values)


def _cmd_estimate(args) -> int:
    data = _read_data(args.data)
    mode = _parse_mode(args.mode, args.seed)
    grid = parse_grid_spec(args.grid, len(data))
    _echo_config(
        "estimate",
        {
            "data": args.data,
            "n_raw": len(data),
            "delta": args.delta,
            "grid": grid.describe(),
            "mode": mode.describe(),
            "seed": args.seed,
            "format": args.format,
        },
    )
    sample = order_sample(data)
    if sample.dropped:
        print(
            f"warning: dropped {sample.dropped} non-positive observation(s)",
            file=sys.stderr,
        )
    config = EavConfig(grid=grid, delta=args.delta, mode=mode)
    est = run_estimate(sample, config)
    result = est.result
    doc = result.to_dict()
    doc["delta_grid"] = est.table.delta_grid
    if not args.trace:
        doc.pop("trace")
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        print("k_hat,gamma_hat,k0,delta,delta_grid,grid,hit_grid_max")
        print(
            ",".join(
                [
                    str(result.k_hat),
                    _fmt(result.gamma_hat),
                    str(result.k0),
                    _fmt(result.delta),
                    _fmt(est.table.delta_grid),
                    grid.describe(),
                    str(result.hit_grid_max).lower(),
                ]
            )
        )
    else:
        print(f"k_hat      {result.k_hat}")
        print(f"gamma_hat  {result.gamma_hat:.6g}")
        print(f"k0         {result.k0}")
        print(f"delta      {result.delta:g}")
        print(f"delta_grid {est.table.delta_grid:.6g}")
        print(f"grid       {grid.describe()} ({len(grid.points)} points)")
        print(f"hit_grid_max {result.hit_grid_max}")
        if args.trace:
            print("trace (k, S, margin, violating_j):")
            for t in result.trace:
                print(f"  {t.k:8d}  S={t.s}  margin={t.margin:+.4g}  j={t.violating_j}")
    return _EXIT_OK


def _cmd_simulate(args) -> int:
    spec = parse_distribution(args.dist)
    mode = _parse_mode(args.mode, args.seed)
    grid = parse_grid_spec(args.grid, args.n)
    cfg = ExperimentConfig(
        spec=spec,
        n=args.n,
        replications=args.reps,
        delta=args.delta,
        grid=grid,
        mode=mode,
        root_seed=args.seed,
        jobs=args.jobs,
    )
    _echo_config(
        "simulate",
        {
            "dist": spec.describe(),
            "n": args.n,
            "reps": args.reps,
            "delta": args.delta,
            "grid": grid.describe(),
            "mode": mode.describe(),
            "seed": args.seed,
            "jobs": args.jobs,
            "format": args.format,
        },
    )
    summary = run_mse_experiment(cfg)
    if args.format == "json":
        doc = summary.to_dict()
        doc.update(
            {
                "distribution": spec.describe(),
                "n": args.n,
                "N": args.reps,
                "delta": args.delta,
                "grid": grid.describe(),
                "mode": mode.describe(),
                "mse_x100": summary.mse_hat * 100.0,
                "stderr_x100": summary.stderr * 100.0,
            }
        )
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        print(MSE_CSV_HEADER)
        print(mse_csv_row(cfg, summary))
    else:
        print(f"distribution {spec.describe()}  gamma={summary.gamma_true:g}")
        print(f"mse*100      {summary.mse_hat * 100.0:.4f} (stderr*100 {summary.stderr * 100.0:.4f})")
        print(f"k            [{summary.k_min:.0f}, {summary.k_max:.0f}]  mean {summary.k_mean:.1f}")
    return _EXIT_OK


def _cmd_sweep(args) -> int:
    spec = parse_distribution(args.dist)
    grid = parse_grid_spec(args.grid, args.n)
    _echo_config(
        "sweep",
        {
            "dist": spec.describe(),
            "n": args.n,
            "reps": args.reps,
            "grid": grid.describe(),
            "seed": args.seed,
            "jobs": args.jobs,
            "format": args.format,
        },
    )
    curve = rmse_curve(spec, args.n, args.reps, grid, root_seed=args.seed, jobs=args.jobs)
    if args.format == "json":
        print(json.dumps([{"k": k, "rmse": r} for k, r in curve], indent=2))
    else:
        print(RMSE_CSV_HEADER)
        for k, r in curve:
            print(f"{k},{_fmt(r)}")
    return _EXIT_OK


def _cmd_bounds(args) -> int:
    p = SecondOrderParams(gamma=args.gamma, rho=args.rho, C=args.C, beta=args.beta,
                          c1=args.c1, c2=args.c2)
    grid = parse_grid_spec(args.grid, args.n)
    size = grid.nominal_size
    _echo_config(
        "bounds",
        {
            "gamma": args.gamma,
            "rho": args.rho,
            "C": args.C,
            "beta": args.beta,
            "c1": args.c1,
            "c2": args.c2,
            "delta": args.delta,
            "n": args.n,
            "grid": grid.describe(),
            "format": args.format,
        },
    )
    delta_grid = args.delta / size
    fields: dict[str, object] = {
        "delta_grid": delta_grid,
        "C2": c2_of(p),
        "k0_upper": _k0_upper(size, args.delta),
    }
    try:
        lower = kstar_lower_bound(delta_grid, args.n, p)
        fields["kstar_lower"] = lower.value
        fields["kstar_lower_vacuous"] = lower.vacuous
    except ValueError:
        fields["kstar_lower"] = "n/a: delta out of range"
    try:
        fields["n0_upper"] = n0_upper_bound(args.delta, size, p)
    except ValueError:
        fields["n0_upper"] = "n/a: delta out of range"
    try:
        fields["oracle_bound"] = oracle_error_bound(delta_grid, args.n, p)
        expo = 1.0 - 2.0 * p.rho
        v_star = (
            (1.0 + math.sqrt(2.0)) * math.sqrt(p.beta * c2_of(p))
            * math.sqrt(1.0 + math.log(4.0 / delta_grid))
            * p.gamma ** (-1.0 / expo) * args.n ** (p.rho / expo)
        )
        fields["v_star_bound"] = v_star
        fields["adaptive_bound"] = (
            adaptive_error_bound(p.gamma, v_star) if v_star < 1.0 / 6.0
            else "n/a: V* bound >= 1/6"
        )
    except ValueError:
        fields["oracle_bound"] = "n/a: delta out of range"
        fields["adaptive_bound"] = "n/a: delta out of range"
    try:
        fields["kstar_envelope"] = kstar_under_envelope(grid, args.n, delta_grid, p)
    except ValueError as exc:
        fields["kstar_envelope"] = f"n/a: {exc}"
    conditions = check_grid_conditions(grid, args.n, delta_grid, p)
    fields["grid_wide"] = conditions.wide
    fields["grid_fine"] = conditions.fine
    fields["beta_observed"] = conditions.beta_observed

    warning = "c1, c2 are user-supplied stand-ins, not universal constants"
    if args.format == "json":
        print(json.dumps({**fields, "warning": warning}, indent=2))
    elif args.format == "csv":
        keys = list(fields)
        print(",".join(keys))
        print(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in (fields[k] for k in keys)))
        print(f"# warning: {warning}", file=sys.stderr)
    else:
        for key, value in fields.items():
            shown = _fmt(value) if isinstance(value, float) else value
            print(f"{key:22s} {shown}")
        print(f"warning: {warning}", file=sys.stderr)
    return _EXIT_OK


def _cmd_sample(args) -> int:
    spec = parse_distribution(args.dist)
    _echo_config(
        "sample",
        {"dist": spec.describe(), "n": args.n, "seed": args.seed, "out": args.out or "-"},
    )
    values = spec.sample(args.n, generator(args.seed))
    text = "\n".join(_fmt(v) for v in values) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eavhill",
        description="Adaptive selection of the extreme sample size for Hill tail-index estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run the adaptive selection on a data file")
    est.add_argument("data", help="newline-delimited decimal observations")
    est.add_argument("--delta", type=float, default=0.9)
    est.add_argument("--grid", default="geometric:1.1")
    est.add_argument("--mode", default="mc:2000", help="exact | mc[:<draws>]")
    est.add_argument("--seed", type=int, default=DEFAULT_SEED)
    est.add_argument("--trace", action="store_true", help="include the stopping trace")
    est.add_argument("--format", choices=("csv", "json", "text"), default="json")
    est.set_defaults(handler=_cmd_estimate)

    sim = sub.add_parser("simulate", help="Monte-Carlo MSE of the adaptive estimator")
    sim.add_argument("--dist", required=True)
    sim.add_argument("--n", type=int, default=10000)
    sim.add_argument("--reps", type=int, default=500)
    sim.add_argument("--delta", type=float, default=0.9)
    sim.add_argument("--grid", default="geometric:1.1")
    sim.add_argument("--mode", default="mc:2000")
    sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    sim.set_defaults(handler=_cmd_simulate)

    swp = sub.add_parser("sweep", help="RMSE of the fixed-k Hill estimator along the grid")
    swp.add_argument("--dist", required=True)
    swp.add_argument("--n", type=int, default=10000)
    swp.add_argument("--reps", type=int, default=500)
    swp.add_argument("--grid", default="geometric:1.1")
    swp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    swp.add_argument("--jobs", type=int, default=1)
    swp.add_argument("--format", choices=("csv", "json"), default="csv")
    swp.set_defaults(handler=_cmd_sweep)

    bnd = sub.add_parser("bounds", help="second-order diagnostic bound calculators")
    bnd.add_argument("--gamma", type=float, required=True)
    bnd.add_argument("--rho", type=float, required=True)
    bnd.add_argument("--C", type=float, required=True)
    bnd.add_argument("--beta", type=float, default=1.1)
    bnd.add_argument("--delta", type=float, default=0.9)
    bnd.add_argument("--n", type=int, default=10000)
    bnd.add_argument("--grid", default="geometric:1.1")
    bnd.add_argument("--c1", type=float, default=1.0)
    bnd.add_argument("--c2", type=float, default=2.0)
    bnd.add_argument("--format", choices=("csv", "json", "text"), default="text")
    bnd.set_defaults(handler=_cmd_bounds)

    smp = sub.add_parser("sample", help="draw observations and write one per line")
    smp.add_argument("--dist", required=True)
    smp.add_argument("--n", type=int, required=True)
    smp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    smp.add_argument("--out", default=None, help="output path (default: stdout)")
    smp.set_defaults(handler=_cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (NoAdmissibleK, NoAdmissibleCandidate) as exc:
        print(f"error: estimation infeasible: {exc}", file=sys.stderr)
        return _EXIT_INFEASIBLE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
