"""Command-line front end: ``mmwave-inr {run,sweep,table1,compare-arrays}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .engine import compare_arrays, density_sweep, run_campaign
from .output import (write_comparison, write_ecdf_csv, write_iterations_csv, write_json,
                     write_plot_script, write_sweep_csv, write_table1_csv, campaign_summary,
                     state_table_rows)
from .params import ALIGNMENT_MODES, ArrayShape, ConfigError, SimulationConfig, load_config

log = logging.getLogger("mmwave_inr")


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _nonnegative_float(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be unsigned")
    return v


def _array(text: str) -> ArrayShape:
    try:
        return ArrayShape.parse(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config (default: shipped default.json)")
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    p.add_argument("--lambda-bs", type=_positive_float, help="BS density [1/km^2]")
    p.add_argument("--lambda-ue", type=_nonnegative_float, help="UE density [1/km^2]")
    p.add_argument("--freq", type=float, choices=(28.0, 73.0), help="carrier [GHz]")
    p.add_argument("--iterations", type=_positive_int)
    p.add_argument("--seed", type=_seed, help="master seed")
    p.add_argument("--bs-array", type=_array, help="BS array RxC, e.g. 8x8")
    p.add_argument("--ue-array", type=_array, help="UE array RxC, e.g. 4x4")
    p.add_argument("--region-radius-m", type=_positive_float)
    p.add_argument("--alignment", choices=ALIGNMENT_MODES)
    p.add_argument("--threads", type=_positive_int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmwave-inr", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single campaign: iteration CSV, ECDF CSV, summary JSON")
    _common(p)

    p = sub.add_parser("sweep", help="SINR/INR percentiles vs BS density")
    _common(p)
    p.add_argument("--densities", type=_positive_float, nargs="*", default=[30.0, 60.0, 90.0, 120.0])
    p.add_argument("--freqs", type=float, nargs="+", choices=(28.0, 73.0))
    p.add_argument("--ue-per-bs", type=_positive_float,
                   help="tie UE density to BS density (default: keep --lambda-ue)")

    p = sub.add_parser("table1", help="interferer-state probabilities per INR-ECDF interval")
    _common(p)
    p.add_argument("--split-quantile", type=float, default=0.12)

    p = sub.add_parser("compare-arrays", help="paired 8x8/4x4 vs 16x16/8x8 campaigns")
    _common(p)
    p.add_argument("--large-bs-array", type=_array, default=ArrayShape(16, 16))
    p.add_argument("--large-ue-array", type=_array, default=ArrayShape(8, 8))
    return parser


def resolve_config(args: argparse.Namespace) -> SimulationConfig:
    config = load_config(args.config)
    overrides = {
        "lambda_bs_per_km2": args.lambda_bs, "lambda_ue_per_km2": args.lambda_ue,
        "carrier_frequency_ghz": args.freq, "iterations": args.iterations,
        "master_seed": args.seed, "bs_array": args.bs_array, "ue_array": args.ue_array,
        "region_radius_m": args.region_radius_m, "beam_alignment": args.alignment,
    }
    return config.replace(**{k: v for k, v in overrides.items() if v is not None})


def cmd_run(args, config: SimulationConfig) -> None:
    res = run_campaign(config, args.threads)
    out = args.out
    write_iterations_csv(res, out / "iterations.csv")
    write_ecdf_csv(res, out / "ecdf.csv")
    write_json(campaign_summary(res), out / "summary.json")
    write_plot_script(out / "plot_ecdf.py", config, "ecdf", ["ecdf.csv"])
    log.info("median INR %.2f dB, regime %s", res.inr_ecdf.percentile(50), res.regime.value)


def cmd_sweep(args, config: SimulationConfig) -> None:
    rows = density_sweep(config, args.densities, args.freqs, args.ue_per_bs, args.threads)
    write_sweep_csv(rows, config, args.out / "sweep.csv")
    write_plot_script(args.out / "plot_sweep.py", config, "sweep", ["sweep.csv"])


def cmd_table1(args, config: SimulationConfig) -> None:
    res = run_campaign(config, args.threads, split_quantile=args.split_quantile)
    write_table1_csv(res, args.out / "table1.csv")
    for row in state_table_rows(res.state_table):
        log.info("interval %.0f%%-%.0f%%: LoS %.3f NLoS %.3f outage %.3f",
                 100 * row[0], 100 * row[1], *row[4:])


def cmd_compare_arrays(args, config: SimulationConfig) -> None:
    if args.freq is None:
        config = config.replace(carrier_frequency_ghz=73.0)
    base = (config.scenario.bs_array, config.scenario.ue_array)
    cmp = compare_arrays(config, base, (args.large_bs_array, args.large_ue_array), args.threads)
    write_comparison(cmp, args.out)
    write_plot_script(args.out / "plot_ecdf.py", config, "ecdf",
                      ["ecdf_baseline.csv", "ecdf_enlarged.csv"])
    log.info("median INR delta %.2f dB, median SINR delta %.2f dB",
             cmp.median_inr_delta_db, cmp.median_sinr_delta_db)


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "table1": cmd_table1,
            "compare-arrays": cmd_compare_arrays}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and not args.densities:
        parser.error("empty density list")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = resolve_config(args)
    except ConfigError as e:
        parser.error(str(e))
    try:
        os.makedirs(args.out, exist_ok=True)
        COMMANDS[args.command](args, config)
    except OSError as e:
        print(f"mmwave-inr: I/O error on {e.filename}: {e.strerror}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"mmwave-inr: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
