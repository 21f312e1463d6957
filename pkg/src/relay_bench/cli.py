"""Command-line entry point: calibrate, evaluate, rollout, compare and plot."""

from __future__ import annotations

import argparse
import json
import logging
import shlex
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import pandas as pd

from . import plotting
from .calibration import CalibrationConfig, calibrate, load_table, read_table, table_path
from .config import RunConfig
from .errors import ConfigError, RelayBenchError
from .evaluation import (
    CellReport,
    EvaluationReport,
    MetricsTable,
    aggregate,
    check_reference,
    compare,
    episode_seed,
    evaluate,
    read_results,
    read_trajectory,
    run_episode,
    step_states,
    write_results,
    write_trajectory,
)
from .game import SCENARIOS, ScenarioParams
from .policy import PolicySpec
from .policy.handles import POLICY_KINDS

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVELS = [logging.WARNING, logging.INFO, logging.DEBUG]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument(
        "--scenario",
        nargs="+",
        choices=sorted(SCENARIOS),
        help="Scenario cell(s)",
    )
    common.add_argument("--agents", type=int, nargs="+", help="Agent count(s) K")
    common.add_argument("--episodes", type=int, help="Episodes per (scenario, K) cell")
    common.add_argument("--seed", type=int, help="Master seed")
    common.add_argument("--c-time", type=float, help="Horizon multiplier c_time")
    common.add_argument("--policy", choices=POLICY_KINDS, help="Policy under evaluation")
    common.add_argument("--policy-cmd", help="Command line of an external policy")
    common.add_argument("--encoding", help="Observation encoding for an external policy")
    common.add_argument("--action-mode", help="discrete or continuous external actions")
    common.add_argument("--label", help="Policy name written to results")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--calibration-dir", help="Budget table directory (default: <out>/calibration)")
    common.add_argument("--record", action="store_true", default=None, help="Write trajectory logs")
    common.add_argument("--workers", type=int, help="Worker processes")
    common.add_argument("--grid-points", type=int, help="Calibration grid size")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="relay-bench", description="Message-relay game benchmark")
    commands = parser.add_subparsers(dest="command", required=True)

    cal = commands.add_parser("calibrate", parents=[common], help="Fit terminal budget tables")
    cal.add_argument("--force", action="store_true", help="Refit tables that are already current")

    commands.add_parser("evaluate", parents=[common], help="Evaluate a policy over seeded episodes")

    roll = commands.add_parser("rollout", parents=[common], help="Play one seeded episode with a trajectory log")
    roll.add_argument("--episode", type=int, default=0, help="Episode index under the master seed")

    cmp_ = commands.add_parser("compare", parents=[common], help="Pair two results files episode by episode")
    cmp_.add_argument("results_a", help="Results file of policy a")
    cmp_.add_argument("results_b", help="Results file of policy b")
    cmp_.add_argument("--labels", nargs=2, default=("a", "b"), metavar=("A", "B"))

    plot = commands.add_parser("plot", parents=[common], help="Render figures")
    plot.add_argument("--budget", action="store_true", help="Budget curves for --agents")
    plot.add_argument("--results", nargs="+", default=[], help="Results files for value histograms")
    plot.add_argument("--normalize", action="store_true", help="Divide value histograms by their median")
    plot.add_argument("--paired", help="Paired file written by compare")
    plot.add_argument("--trajectory", nargs="+", default=[], help="Trajectory logs")
    plot.add_argument("--format", default="png", help="Image format (png, pdf, svg)")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """Config file (if any) overridden by the flags given on the command line."""
    config = RunConfig.load(args.config) if args.config else RunConfig()
    policy = config.policy
    if any(v is not None for v in (args.policy, args.policy_cmd, args.encoding, args.action_mode, args.label)):
        kind = args.policy or ("external" if args.policy_cmd else policy.kind)
        policy = PolicySpec(
            kind=kind,
            command=tuple(shlex.split(args.policy_cmd)) if args.policy_cmd else policy.command,
            encoding=args.encoding or policy.encoding,
            action_mode=args.action_mode or policy.action_mode,
            label=args.label or policy.label,
        )
    return config.with_overrides(
        scenarios=tuple(args.scenario) if args.scenario else None,
        agents=tuple(args.agents) if args.agents else None,
        episodes=args.episodes,
        seed=args.seed,
        c_time=args.c_time,
        policy=policy,
        out=args.out,
        calibration_dir=args.calibration_dir,
        record=args.record,
        workers=args.workers,
        grid_points=args.grid_points,
    )


def _write_json(data: dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, allow_nan=True) + "\n", encoding="utf-8")
    return path


def command_calibrate(config: RunConfig, force: bool = False) -> int:
    params = config.params_for(config.scenarios[0])
    report = calibrate(
        config.agents,
        params,
        config.budget_dir,
        CalibrationConfig(grid_points=config.grid_points, workers=config.workers, force=force),
    )
    _write_json(report.to_dict(), config.budget_dir / "calibration_report.json")
    config.echo()
    for item in report.tables:
        notice = "up to date, skipped" if item.status == "skipped" else item.status
        print(
            f"K={item.K}: {notice}; max |residual| {item.max_abs_residual:.3e}, "
            f"max relative error {item.max_relative_error:.3e}"
        )
    return 0


def _cell_name(policy: str, scenario: str, agents: int) -> str:
    return f"{policy}_{scenario}_K{agents}"


def command_evaluate(config: RunConfig) -> int:
    """
    Evaluate every (scenario, K) cell and write results, aggregates and a report.

    Results of finished cells stay on disk when a later cell fails.
    """
    budgets = {}
    for agents in config.agents:
        budgets[agents] = load_table(config.budget_dir, agents, config.params_for(config.scenarios[0]), config.grid_points)
    config.echo()

    name = config.policy.name
    table = MetricsTable()
    report = EvaluationReport(policy=name, master_seed=config.seed, episodes=config.episodes, c_time=config.c_time)
    for scenario in config.scenarios:
        params = config.params_for(scenario)
        for agents in config.agents:
            records = evaluate(
                config.policy,
                config.episodes,
                config.seed,
                agents,
                params,
                budgets[agents],
                config.c_time,
                workers=config.workers,
                record=config.record,
            )
            cell = _cell_name(name, scenario, agents)
            results = write_results(records, config.out_dir / "results" / f"{cell}.csv")
            if config.record:
                for r in records:
                    if r.trajectory is not None:
                        write_trajectory(r, config.out_dir / "trajectories" / cell / f"episode_{r.episode_id}.jsonl")
            metrics = aggregate(records, name)
            table.extend(metrics)
            report.cells.append(CellReport.from_records(metrics.rows[0], records, str(results)))
            row = metrics.rows[0]
            logger.info("%s: S=%.3f V=%.4g T_del=%s D_tot=%.4g", cell, row.S, row.V, row.T_del, row.D_tot)

    table.write_csv(config.out_dir / f"aggregate_{name}.csv")
    if config.policy.kind == "baseline":
        report.reference = check_reference(table, policy=name)
    _write_json(report.to_dict(), config.out_dir / f"evaluation_report_{name}.json")

    print(table.to_frame().to_string(index=False))
    for miss in report.reference_misses:
        print(
            f"reference miss {miss.scenario} K={miss.K} {miss.metric}: {miss.actual:.4g} vs {miss.expected:.4g} "
            f"(+/- {miss.tolerance:.3g}) -> {miss.attribution}"
        )
    if report.protocol_failures:
        print(f"{report.protocol_failures} episode(s) failed by protocol", file=sys.stderr)
        return 4
    return 0


def command_rollout(config: RunConfig, episode: int = 0) -> int:
    scenario, agents = config.scenarios[0], config.agents[0]
    params = config.params_for(scenario)
    budget = load_table(config.budget_dir, agents, params, config.grid_points)
    config.echo()
    seed = episode_seed(config.seed, episode)
    policy = config.policy.build(agents, params)
    try:
        record = run_episode(policy, seed, agents, params, budget, config.c_time, episode_id=episode, record=True)
    finally:
        policy.close()
    if record.failure is not None:
        print(f"episode {episode} failed: {record.message}", file=sys.stderr)
        return 4
    path = write_trajectory(
        record,
        config.out_dir / "trajectories" / f"rollout_{_cell_name(config.policy.name, scenario, agents)}_ep{episode}.jsonl",
    )
    print(
        f"seed={seed} R={record.R:.4f} success={record.success} V={record.V:.6f} "
        f"T_del={record.T_del} D_tot={record.D_tot:.4f} -> {path}"
    )
    return 0


def command_compare(config: RunConfig, results_a: str, results_b: str, labels: Sequence[str] = ("a", "b")) -> int:
    paired = compare(read_results(results_a), read_results(results_b))
    path = config.out_dir / f"paired_{labels[0]}_{labels[1]}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    paired.to_csv(path, index=False, lineterminator="\n")
    diagonal = (paired["V_a"] == paired["V_b"]).mean()
    print(f"{len(paired)} paired episode(s); {diagonal:.1%} on the diagonal -> {path}")
    return 0


def command_plot(
    config: RunConfig,
    *,
    budget: bool = False,
    results: Sequence[str] = (),
    normalize: bool = False,
    paired: str | None = None,
    trajectories: Sequence[str] = (),
    fmt: str = "png",
) -> int:
    """Render the requested figures; a figure whose inputs are missing is skipped."""
    figures = config.out_dir / "figures"
    written: list[Path] = []

    if budget:
        tables = {}
        for agents in config.agents:
            path = table_path(config.budget_dir, agents)
            if path.exists():
                tables[agents] = read_table(path)
            else:
                logger.warning("No budget table at %s; leaving K=%d out", path, agents)
        if tables:
            params = config.params_for(config.scenarios[0])
            written.append(plotting.plot_budget_curves(tables, params, figures / f"budget.{fmt}"))
        else:
            print("skipping budget curves: no budget tables found", file=sys.stderr)

    values: dict[int, list[float]] = {}
    for name in results:
        if not Path(name).exists():
            print(f"skipping results file {name}: not found", file=sys.stderr)
            continue
        frame = read_results(name)
        ok = frame[frame["success"]]
        for agents, group in ok.groupby("K"):
            values.setdefault(int(agents), []).extend(group["V"].astype(float).tolist())
    if values:
        suffix = "_normalized" if normalize else ""
        written.append(plotting.plot_value_histograms(values, figures / f"values{suffix}.{fmt}", normalize=normalize))

    if paired is not None:
        if Path(paired).exists():
            frame = pd.read_csv(paired)
            stem = Path(paired).stem
            for metric in plotting.PAIR_METRICS:
                written.append(plotting.plot_paired_scatter(frame, figures / f"{stem}_{metric}.{fmt}", metric=metric))
        else:
            print(f"skipping paired scatter {paired}: not found", file=sys.stderr)

    for name in trajectories:
        if not Path(name).exists():
            print(f"skipping trajectory {name}: not found", file=sys.stderr)
            continue
        header, steps = read_trajectory(name)
        params = ScenarioParams.for_scenario(header["scenario"], **config.overrides)
        written.append(
            plotting.plot_trajectory(step_states(steps), params, figures / f"{Path(name).stem}.{fmt}", header=header)
        )

    for path in written:
        print(path)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)], format=LOG_FORMAT)

    try:
        config = build_config(args)
        logger.info("Running %s", args.command)
        if args.command == "calibrate":
            code = command_calibrate(config, force=args.force)
        elif args.command == "evaluate":
            code = command_evaluate(config)
        elif args.command == "rollout":
            code = command_rollout(config, episode=args.episode)
        elif args.command == "compare":
            code = command_compare(config, args.results_a, args.results_b, args.labels)
        elif args.command == "plot":
            code = command_plot(
                config,
                budget=args.budget,
                results=args.results,
                normalize=args.normalize,
                paired=args.paired,
                trajectories=args.trajectory,
                fmt=args.format,
            )
        else:
            raise ConfigError(f"Unknown command '{args.command}'", code="CFG_COMMAND")
    except RelayBenchError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    logger.info("Finished %s with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
