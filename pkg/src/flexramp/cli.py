"""Command-line entry points: ``run-da``, ``validate``, ``report``.

Exit codes: 0 on success, 1 for input problems (missing files, malformed
data, bad configuration), 2 when a solve fails.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .damarket import MODES, check_solution, max_violation, production_cost
from .errors import FlexrampError, ParseError, SolveError, ValidationError
from .evaluate import clear_da_for_mode, evaluate_designs
from .io import (RunConfig, read_aggregate_json, read_per_scenario_csv,
                 write_aggregate_json, write_da_solution_csv,
                 write_da_summary_json, write_per_scenario_csv,
                 write_prices_csv, write_scenarios_csv, write_settlement_csv)
from .pricing import compute_settlements, fix_and_price, verify_pricing_identities
from .requirements import load_profile_csv
from .rtuc import generate_scenarios
from .solver import SolveOptions
from .system import load_system

log = logging.getLogger("flexramp.cli")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVE = 2


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags below override it")
    p.add_argument("--system", help="system JSON file")
    p.add_argument("--profile", help="net-load profile CSV")
    p.add_argument("--mode", action="append", dest="modes", choices=MODES,
                   help="market design to run (repeatable)")
    p.add_argument("--z", type=float, help="uncertainty envelope multiplier")
    p.add_argument("--sigma-fraction", type=float, dest="sigma_fraction",
                   help="forecast-error sigma as a fraction of hourly net load")
    p.add_argument("--voll", type=float, help="value of lost load, $/MWh")
    p.add_argument("--scenarios", type=int, help="Monte-Carlo scenario count")
    p.add_argument("--seed", type=int, help="base random seed")
    p.add_argument("--mip-gap", type=float, dest="mip_gap",
                   help="relative MIP gap tolerance")
    p.add_argument("--fs-bid-multiplier", type=float, dest="fs_bid_multiplier",
                   help="fast-start energy bid scaling in real time")
    p.add_argument("--voll-sweep", dest="voll_sweep",
                   help="comma-separated penalty prices for the sensitivity sweep")
    p.add_argument("--sigma-sweep", dest="sigma_sweep",
                   help="comma-separated sigma fractions for the sensitivity sweep")
    p.add_argument("--outdir", help="artifact output directory")
    p.add_argument("--workers", type=int, help="parallel scenario workers")
    p.add_argument("--terminal", choices=("zero", "repeat"),
                   help="last-hour ramp requirement rule")
    p.add_argument("--spike-threshold", type=float, dest="spike_threshold",
                   help="price level counted as a spike, $/MWh")
    p.add_argument("--time-limit", type=float, dest="time_limit",
                   help="per-solve time limit in seconds")


def _parse_sweep(text):
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"bad sweep list {text!r}: {exc}") from exc


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    cfg.override(system=args.system, profile=args.profile, modes=args.modes,
                 z=args.z, sigma_fraction=args.sigma_fraction, voll=args.voll,
                 scenarios=args.scenarios, seed=args.seed, mip_gap=args.mip_gap,
                 fs_bid_multiplier=args.fs_bid_multiplier,
                 voll_sweep=_parse_sweep(args.voll_sweep),
                 sigma_sweep=_parse_sweep(args.sigma_sweep),
                 outdir=args.outdir, workers=args.workers, terminal=args.terminal,
                 spike_threshold=args.spike_threshold, time_limit=args.time_limit)
    cfg.validate_paths()
    for mode in cfg.modes:
        if mode not in MODES:
            raise ValidationError(f"unknown market design {mode!r}")
    return cfg


def _load_inputs(cfg: RunConfig):
    system = load_system(cfg.system)
    profile = load_profile_csv(cfg.profile, z=cfg.z,
                               sigma_fraction=cfg.sigma_fraction)
    options = SolveOptions(mip_gap=cfg.mip_gap, time_limit=cfg.time_limit)
    return system, profile, options


def cmd_run_da(args) -> int:
    cfg = _config_from_args(args)
    system, profile, options = _load_inputs(cfg)
    os.makedirs(cfg.outdir, exist_ok=True)

    for mode in cfg.modes:
        da, sol = clear_da_for_mode(system, profile, mode, cfg.terminal,
                                    options, soften_frp=cfg.soften_frp)
        audit = check_solution(da, sol)
        if max_violation(audit) > 1e-5:
            worst = max(audit, key=audit.get)
            raise SolveError(f"mode {mode}: solution audit failed at {worst} "
                             f"(violation {audit[worst]:.3e})")
        prices = fix_and_price(da, sol, options)
        identities = verify_pricing_identities(da, sol, prices)
        settlement = compute_settlements(da, sol, prices)

        def path(stem):
            return os.path.join(cfg.outdir, f"{stem}_{mode}.csv")

        write_da_solution_csv(path("da_solution"), da, sol)
        write_prices_csv(path("da_prices"), da, prices)
        write_settlement_csv(path("da_settlement"), settlement)
        write_da_summary_json(os.path.join(cfg.outdir, f"da_summary_{mode}.json"),
                              mode, sol, settlement, identities,
                              production_cost(system, sol))
        log.info("mode %s: objective %.2f, status %s", mode, sol.objective,
                 sol.status)
        print(f"run-da {mode}: objective {sol.objective:.2f} "
              f"(gap {sol.mip_gap:.2e}, {sol.status})")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _config_from_args(args)
    system, profile, options = _load_inputs(cfg)
    os.makedirs(cfg.outdir, exist_ok=True)

    scenarios = generate_scenarios(profile, cfg.scenarios, seed=cfg.seed)
    result = evaluate_designs(
        system, profile, scenarios, cfg.modes, voll=cfg.voll,
        fs_bid_multiplier=cfg.fs_bid_multiplier,
        spike_threshold=cfg.spike_threshold, terminal=cfg.terminal,
        options=options, workers=cfg.workers, voll_sweep=cfg.voll_sweep,
        sigma_sweep=cfg.sigma_sweep, seed=cfg.seed)

    write_scenarios_csv(os.path.join(cfg.outdir, "scenarios.csv"), scenarios)
    write_per_scenario_csv(os.path.join(cfg.outdir, "per_scenario.csv"),
                           result.modes)
    write_aggregate_json(os.path.join(cfg.outdir, "aggregate.json"), result)
    for mode in sorted(result.modes):
        mm = result.modes[mode]
        print(f"validate {mode}: {mm.n_scenarios} scenarios, "
              f"avg violation {float(mm.violation_mwh.mean()):.4f} MWh, "
              f"avg cost {float(mm.cost_incl.mean()):.2f} $")
    return EXIT_OK


# -- report ---------------------------------------------------------------------

def _fmt_row(cells) -> str:
    return "| " + " | ".join(str(c) for c in cells) + " |"


def _stats_table(agg: dict) -> list:
    lines = ["## Design comparison", ""]
    header = ["design", "DA objective $", "avg violation MWh", "max violation MWh",
              "scenarios w/ violation", "avg cost (incl. penalty) $",
              "avg FS increase", "price spikes"]
    lines.append(_fmt_row(header))
    lines.append(_fmt_row(["---"] * len(header)))
    for mode in sorted(agg["modes"]):
        m = agg["modes"][mode]
        vs, cs, fs = m["violation"], m["cost"], m["fs_commitment_increase"]
        spikes = m["spike_count_total"]
        lines.append(_fmt_row([
            mode, f"{m['da_objective']:.2f}", f"{vs['average']:.4f}",
            f"{vs['max']:.4f}", vs["count_with_violation"],
            f"{cs['incl_penalty']['average']:.2f}", f"{fs['average']:.3f}",
            spikes]))
    lines.append("")
    return lines


def _pairwise_table(agg: dict) -> list:
    pairwise = agg.get("pairwise", {})
    if not pairwise:
        return []
    metrics = sorted(next(iter(pairwise.values())))
    lines = ["## Scenario-level comparison (count of scenarios where the "
             "left design does at least as well)", ""]
    lines.append(_fmt_row(["pair"] + metrics))
    lines.append(_fmt_row(["---"] * (len(metrics) + 1)))
    for pair in sorted(pairwise):
        lines.append(_fmt_row([pair] + [pairwise[pair][m] for m in metrics]))
    lines.append("")
    return lines


def _sweep_tables(agg: dict) -> list:
    lines = []
    for axis, rows in sorted(agg.get("sweeps", {}).items()):
        if not rows:
            continue
        lines += [f"## Sensitivity: {axis}", ""]
        modes = sorted(rows[0]["modes"])
        lines.append(_fmt_row([axis] + [f"{m} avg viol MWh" for m in modes]
                              + [f"{m} avg cost $" for m in modes]))
        lines.append(_fmt_row(["---"] * (1 + 2 * len(modes))))
        for row in rows:
            cells = [row.get(axis, row.get("voll", row.get("sigma_fraction")))]
            cells += [f"{row['modes'][m]['avg_violation_mwh']:.4f}" for m in modes]
            cells += [f"{row['modes'][m]['avg_cost_incl']:.2f}" for m in modes]
            lines.append(_fmt_row(cells))
        lines.append("")
    return lines


def _write_scatter_csvs(outdir: str, per_scenario: dict) -> None:
    import csv as _csv
    for stem, ycol in (("scatter_violation_cost", "cost_incl_penalty"),
                       ("scatter_violation_fs", "fs_increase")):
        path = os.path.join(outdir, f"{stem}.csv")
        with open(path, "w", newline="") as fh:
            fh.write(f"# schema: flexramp/{stem.replace('_', '-')}/v1\n")
            w = _csv.writer(fh)
            w.writerow(["mode", "scenario", "violation_mwh", ycol])
            for mode in sorted(per_scenario):
                cols = per_scenario[mode]
                for i, sid in enumerate(cols["scenario"]):
                    w.writerow([mode, sid, repr(cols["violation_mwh"][i]),
                                repr(float(cols[ycol][i]))])


def cmd_report(args) -> int:
    artifacts = args.artifacts
    agg_path = os.path.join(artifacts, "aggregate.json")
    per_path = os.path.join(artifacts, "per_scenario.csv")
    missing = [p for p in (agg_path, per_path) if not os.path.exists(p)]
    if missing:
        raise ParseError("missing validation artifacts: " + ", ".join(missing))
    agg = read_aggregate_json(agg_path)
    per_scenario = read_per_scenario_csv(per_path)

    outdir = args.out or artifacts
    os.makedirs(outdir, exist_ok=True)

    lines = ["# Flexible ramping design validation", ""]
    lines.append(f"Penalty price: {agg['voll']:.0f} $/MWh; spike threshold: "
                 f"{agg['spike_threshold']:.0f} $/MWh; fast-start bid "
                 f"multiplier: {agg['fs_bid_multiplier']:g}.")
    lines.append("")
    lines += _stats_table(agg)
    lines += _pairwise_table(agg)
    lines += _sweep_tables(agg)
    lines += ["## Scatter data", "",
              "Per-scenario points are in `scatter_violation_cost.csv` and "
              "`scatter_violation_fs.csv`.", ""]

    report_path = os.path.join(outdir, "report.md")
    with open(report_path, "w") as fh:
        fh.write("\n".join(lines))
    _write_scatter_csvs(outdir, per_scenario)
    print(f"report: wrote {report_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flexramp",
        description="Day-ahead clearing and real-time validation of flexible "
                    "ramping market designs.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_da = sub.add_parser("run-da", help="clear the day-ahead market per design")
    _add_config_args(p_da)
    p_da.set_defaults(func=cmd_run_da)

    p_val = sub.add_parser("validate",
                           help="Monte-Carlo real-time validation of each design")
    _add_config_args(p_val)
    p_val.set_defaults(func=cmd_validate)

    p_rep = sub.add_parser("report", help="summarize validation artifacts")
    p_rep.add_argument("--artifacts", required=True,
                       help="directory with validate outputs")
    p_rep.add_argument("--out", help="report output directory (default: artifacts)")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except SolveError as exc:
        print(f"solve error: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    except FlexrampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVE


if __name__ == "__main__":
    sys.exit(main())
