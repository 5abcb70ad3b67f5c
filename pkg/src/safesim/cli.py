"""Command-line front end: single runs, percentile tables, policy comparisons.

Exit codes: 0 success, 1 runtime failure (e.g. unwritable output),
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import run_ensemble, run_simulation, summarize_trajectories
from .policies import PolicyError, make_policy, policy_names
from .reports import (
    write_compare_csv,
    write_metric_svgs,
    write_severity_csv,
    write_table2_csv,
    write_trajectory_csv,
)
from .scenario import Scenario, ScenarioError, load_scenario_file

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _add_common(parser: argparse.ArgumentParser, with_reps: bool) -> None:
    parser.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    parser.add_argument("--seed", type=int, default=42, help="base random seed (default 42)")
    parser.add_argument(
        "--horizon",
        type=int,
        default=None,
        help="days to simulate (default: the scenario's horizon_days)",
    )
    parser.add_argument(
        "--out-dir", default=".", help="directory for output files (default: current directory)"
    )
    if with_reps:
        parser.add_argument(
            "--reps", type=int, default=100, help="number of replications (default 100)"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="safesim",
        description="Simulate a workplace safety environment and benchmark observer-allocation policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one seeded simulation and write trajectory.csv")
    _add_common(p_run, with_reps=False)
    p_run.add_argument(
        "--policy",
        default="none",
        help=f"allocation policy ({', '.join(policy_names())}; weighted:w1,w2,...)",
    )

    p_table = sub.add_parser(
        "table2",
        help="incident-count percentiles without feedback; writes table2.csv",
    )
    _add_common(p_table, with_reps=True)

    p_cmp = sub.add_parser(
        "compare",
        help="compare policies over replicated runs; writes CSVs and SVG plots",
    )
    _add_common(p_cmp, with_reps=True)
    p_cmp.add_argument(
        "--policy",
        action="append",
        required=True,
        dest="policies",
        help="policy to compare (repeatable); the no-observation baseline is always included",
    )

    return parser


def _safe_label(policy_spec: str) -> str:
    return policy_spec.replace(":", "_").replace(",", "-").replace("/", "-")


def _prepare_out_dir(path: str) -> Path:
    out_dir = Path(path)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario_file(args.scenario)
    policy = make_policy(args.policy)
    out_dir = _prepare_out_dir(args.out_dir)
    trajectory = run_simulation(scenario, policy, seed=args.seed, horizon=args.horizon)
    write_trajectory_csv(trajectory, out_dir / "trajectory.csv")
    print(f"wrote {out_dir / 'trajectory.csv'}")
    return EXIT_OK


def cmd_table2(args: argparse.Namespace) -> int:
    scenario = load_scenario_file(args.scenario).without_incident_feedback()
    out_dir = _prepare_out_dir(args.out_dir)
    summary = run_ensemble(
        scenario, make_policy("none"), n_reps=args.reps, base_seed=args.seed, horizon=args.horizon
    )
    write_table2_csv(summary, out_dir / "table2.csv")
    print(f"wrote {out_dir / 'table2.csv'}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    scenario = load_scenario_file(args.scenario)
    specs = ["none"] + [s for s in args.policies if s != "none"]
    policies = [(spec, make_policy(spec)) for spec in specs]
    out_dir = _prepare_out_dir(args.out_dir)

    compare_csvs: list[tuple[str, Path]] = []
    severity_rows = []
    for spec, policy in policies:
        trajectories = [
            run_simulation(scenario, policy, seed=args.seed + i, horizon=args.horizon)
            for i in range(args.reps)
        ]
        summary = summarize_trajectories(trajectories, args.seed)
        csv_path = out_dir / f"compare_{_safe_label(spec)}.csv"
        write_compare_csv(summary, csv_path)
        compare_csvs.append((spec, csv_path))
        severity_rows.append((spec, trajectories[0].incident_totals().sum(axis=0)))
        print(f"wrote {csv_path}")

    write_severity_csv(severity_rows, out_dir / "severity_counts.csv")
    print(f"wrote {out_dir / 'severity_counts.csv'}")
    write_metric_svgs(compare_csvs, scenario, out_dir)
    print(f"wrote {out_dir / 'expected_loss.svg'}")
    print(f"wrote {out_dir / 'tail_probability.svg'}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "table2":
            return cmd_table2(args)
        return cmd_compare(args)
    except (ScenarioError, PolicyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
