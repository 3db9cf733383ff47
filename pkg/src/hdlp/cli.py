"""Command-line entry points: simulate, replicate, irf.

Every command writes a manifest next to its outputs recording the resolved
arguments, package version, SHA-256 digests of inputs and outputs, and wall
time.  Result files themselves contain no timing, so a rerun with the same
arguments reproduces them byte for byte.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .dgp import benchmark_dgp, simulate_var
from .errors import HdlpError
from .inference import irf_with_bands
from .lp import select_lag
from .montecarlo import (McScenario, run_scenario, summary_csv_rows,
                         summary_json_dict)
from .panel import CsvOptions, load_csv, standardize, write_csv
from .solver import PenaltyConfig

FMT = "{:.17g}"  # round-trippable cell format for all numeric CSV output


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _write_manifest(path: str, command: str, arguments: dict,
                    inputs: dict[str, str], outputs: dict[str, str],
                    wall_time: float) -> None:
    doc = {
        "command": command,
        "package_version": __version__,
        "arguments": arguments,
        "inputs": {name: _digest(p) for name, p in inputs.items()},
        "outputs": {name: _digest(p) for name, p in outputs.items()},
        "wall_time_s": wall_time,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _penalty_config(args) -> PenaltyConfig:
    return PenaltyConfig(gamma_scale=args.gamma_scale, zeta=args.zeta,
                         xi_scale=args.xi_scale, eta_scale=args.eta_scale)


def _add_penalty_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--gamma-scale", type=float, default=1.75,
                     help="penalty level multiplier (default 1.75)")
    sub.add_argument("--zeta", type=float, default=1.0,
                     help="adaptive weight exponent (default 1.0)")
    sub.add_argument("--xi-scale", type=float, default=4.25,
                     help="lag criterion multiplier (default 4.25)")
    sub.add_argument("--eta-scale", type=float, default=2.0,
                     help="covariance threshold multiplier (default 2.0)")


def cmd_simulate(args, parser: argparse.ArgumentParser) -> int:
    t0 = time.perf_counter()
    if args.n < 2 or args.n % 2:
        parser.error("--n must be an even integer >= 2")
    if args.t < 2:
        parser.error("--t must be >= 2")
    series = simulate_var(benchmark_dgp(args.n), args.t,
                          burn_in=args.burn_in, seed=args.seed)
    write_csv(series, args.out)
    _write_manifest(
        args.out + ".manifest.json", "simulate",
        {"n": args.n, "t": args.t, "seed": args.seed,
         "burn_in": args.burn_in, "out": args.out},
        inputs={}, outputs={os.path.basename(args.out): args.out},
        wall_time=time.perf_counter() - t0)
    print(f"wrote {args.out}: {series.values.shape[0]} rows "
          f"({series.pad} presample), {series.n_vars} columns")
    return 0


def cmd_replicate(args, parser: argparse.ArgumentParser) -> int:
    t0 = time.perf_counter()
    if args.n < 2 or args.n % 2:
        parser.error("--n must be an even integer >= 2")
    try:
        scenario = McScenario(
            n_vars=args.n, n_obs=args.t, n_rep=args.r,
            horizons=tuple(args.horizons), p_max=args.p_max,
            h_select=tuple(args.h_select), base_seed=args.seed,
            config=_penalty_config(args), burn_in=args.burn_in)
    except ValueError as exc:
        parser.error(str(exc))
    summary = run_scenario(scenario, workers=args.workers)
    os.makedirs(args.out_dir, exist_ok=True)
    json_path = os.path.join(args.out_dir, "summary.json")
    csv_path = os.path.join(args.out_dir, "summary.csv")
    with open(json_path, "w") as fh:
        json.dump(summary_json_dict(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(csv_path, "w") as fh:
        fh.write("N,T,metric,h,value\n")
        for n_vars, t_obs, metric, h, value in summary_csv_rows(summary):
            fh.write(f"{n_vars},{t_obs},{metric},{h},{FMT.format(value)}\n")
    _write_manifest(
        os.path.join(args.out_dir, "manifest.json"), "replicate",
        {"n": args.n, "t": args.t, "r": args.r, "horizons": args.horizons,
         "h_select": args.h_select, "p_max": args.p_max, "seed": args.seed,
         "burn_in": args.burn_in, "workers": args.workers,
         "gamma_scale": args.gamma_scale, "zeta": args.zeta,
         "xi_scale": args.xi_scale, "eta_scale": args.eta_scale},
        inputs={},
        outputs={"summary.json": json_path, "summary.csv": csv_path},
        wall_time=time.perf_counter() - t0)
    print(f"replications: {summary.n_used} used, {summary.n_failed} failed; "
          f"summary in {args.out_dir}")
    return 0


def cmd_irf(args, parser: argparse.ArgumentParser) -> int:
    t0 = time.perf_counter()
    if args.p is None and not args.select_lag:
        parser.error("give --p or --select-lag")
    if args.p is not None and args.select_lag:
        parser.error("--p and --select-lag are mutually exclusive")
    if not 0.0 < args.level < 1.0:
        parser.error("--level must be in (0, 1)")
    options = CsvOptions(
        header=(False if args.no_header else "auto"),
        skip_date_column=args.date_column)
    series = load_csv(args.data, options)
    if args.standardize:
        series = standardize(series)
    config = _penalty_config(args)
    if args.select_lag:
        p = select_lag(series, args.h_select, args.p_max, config).p_hat
    else:
        p = args.p
        if p < 1:
            parser.error("--p must be >= 1")
    bands = irf_with_bands(series, p, args.horizons, level=args.level,
                           config=config, residual_stage=args.residual_stage)
    labels = series.labels or tuple(
        f"x{j + 1}" for j in range(series.n_vars))
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "irf.csv")
    json_path = os.path.join(args.out_dir, "irf.json")
    with open(csv_path, "w") as fh:
        fh.write("h,response_var,shock_var,estimate,se,lower,upper,selected\n")
        for band in bands:
            for i in range(series.n_vars):
                for j in range(series.n_vars):
                    sel = not math.isnan(band.se[i, j])
                    cells = [str(band.horizon), labels[i], labels[j],
                             FMT.format(band.point[i, j])]
                    cells += ([FMT.format(band.se[i, j]),
                               FMT.format(band.lower[i, j]),
                               FMT.format(band.upper[i, j])]
                              if sel else ["", "", ""])
                    cells.append("1" if sel else "0")
                    fh.write(",".join(cells) + "\n")
    doc = {
        "lags": p, "level": args.level, "labels": list(labels),
        "horizons": [band.horizon for band in bands],
        "irf": [{
            "h": band.horizon,
            "point": band.point.tolist(),
            "se": _nan_to_none(band.se),
            "lower": _nan_to_none(band.lower),
            "upper": _nan_to_none(band.upper),
        } for band in bands],
    }
    with open(json_path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(
        os.path.join(args.out_dir, "manifest.json"), "irf",
        {"data": args.data, "p": p, "selected_lag": bool(args.select_lag),
         "horizons": args.horizons, "level": args.level,
         "standardize": args.standardize, "no_header": args.no_header,
         "date_column": args.date_column,
         "residual_stage": args.residual_stage,
         "gamma_scale": args.gamma_scale, "zeta": args.zeta,
         "xi_scale": args.xi_scale, "eta_scale": args.eta_scale},
        inputs={os.path.basename(args.data): args.data},
        outputs={"irf.csv": csv_path, "irf.json": json_path},
        wall_time=time.perf_counter() - t0)
    print(f"wrote {csv_path} and {json_path} (p={p}, "
          f"horizons {','.join(str(b.horizon) for b in bands)})")
    return 0


def _nan_to_none(arr: np.ndarray) -> list:
    return [[None if math.isnan(v) else v for v in row] for row in arr]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdlp",
        description="Sparse local projection impulse responses")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate",
                           help="write one simulated benchmark path as CSV")
    p_sim.add_argument("--n", type=int, required=True,
                       help="number of variables (even)")
    p_sim.add_argument("--t", type=int, required=True,
                       help="in-sample length")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--burn-in", type=int, default=500)
    p_sim.add_argument("--out", default="data.csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("replicate",
                           help="run a Monte Carlo scenario and summarize")
    p_rep.add_argument("--n", type=int, required=True)
    p_rep.add_argument("--t", type=int, required=True)
    p_rep.add_argument("--r", type=int, default=100,
                       help="replications (default 100)")
    p_rep.add_argument("--horizons", type=_int_list, default=[1, 5, 10])
    p_rep.add_argument("--h-select", type=_int_list, default=[1, 2])
    p_rep.add_argument("--p-max", type=int, default=5)
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--burn-in", type=int, default=500)
    p_rep.add_argument("--workers", type=int, default=None,
                       help="process count (default $HDLP_WORKERS or 1)")
    p_rep.add_argument("--out-dir", default="mc-out")
    _add_penalty_flags(p_rep)
    p_rep.set_defaults(func=cmd_replicate)

    p_irf = sub.add_parser("irf",
                           help="estimate impulse responses with bands")
    p_irf.add_argument("--data", required=True, help="input CSV")
    p_irf.add_argument("--no-header", action="store_true",
                       help="file has no header row")
    p_irf.add_argument("--date-column", action="store_true",
                       help="skip a leading date column")
    p_irf.add_argument("--standardize", action="store_true",
                       help="scale each variable to unit variance first")
    p_irf.add_argument("--p", type=int, default=None, help="lag order")
    p_irf.add_argument("--select-lag", action="store_true",
                       help="choose the lag order by criterion")
    p_irf.add_argument("--p-max", type=int, default=5)
    p_irf.add_argument("--h-select", type=_int_list, default=[1])
    p_irf.add_argument("--horizons", type=_int_list, default=[1, 5, 10])
    p_irf.add_argument("--level", type=float, default=0.90)
    p_irf.add_argument("--residual-stage", choices=("lasso", "adaptive"),
                       default="lasso",
                       help="residuals for the long-run covariance")
    p_irf.add_argument("--out-dir", default="irf-out")
    _add_penalty_flags(p_irf)
    p_irf.set_defaults(func=cmd_irf)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except HdlpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
