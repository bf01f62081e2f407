"""Command-line entry point: ``ttr-arbiter <subcommand> [options]``.

Every subcommand writes its result under ``--out`` when given, otherwise to
stdout. Failures print one JSON error record to stderr and exit nonzero.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import datasets
from .analysis import estimate_costs, phi_metric, simulate_tuning, transfer_ranks
from .arbiter import score_benchmark
from .core import BenchmarkConfig, Clock, MetricDirection, RulesetConfig, WorkloadSpec
from .errors import ArbiterError, ConfigError
from .io import (
    csv_text,
    format_trial_log,
    leaderboard_rows,
    load_config,
    profile_csv,
    read_matrix_csv,
    read_trial_logs,
    read_validation_table,
    read_value_column,
    report_json,
    targets_json,
    write_score_report,
    _space_from_dict,
    _write_text,
)
from .rulesets import group_trials
from .scoring import LeaderboardRow, benchmark_score, profiles_from_matrix
from .searchspace import build_optlist, sample_points
from .simulate import CurveModel, MockSubmission, run_mock_competition
from .targets import rerun_outcome, select_best_config, set_targets, target_setting_budget

EXIT_ERROR = 2


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=d(None), help="benchmark config (JSON)")
    parser.add_argument("--logs", default=d(None), help="trial-log file or directory of *.jsonl")
    parser.add_argument("--out", default=d(None), help="output directory (default: stdout)")
    parser.add_argument("--seed", type=int, default=d(0), help="random seed")
    parser.add_argument("--r-max", type=float, default=d(4.0), dest="r_max", help="profile upper limit")


def _emit(args, name: str, text: str) -> None:
    if args.out:
        _write_text(Path(args.out) / name, text)
    else:
        sys.stdout.write(text)


def _need(args, attr: str):
    v = getattr(args, attr, None)
    if v is None:
        raise ConfigError(f"--{attr.replace('_', '-')} is required for this subcommand", field=attr)
    return v


def _ruleset_from_args(args, base: RulesetConfig) -> RulesetConfig:
    kind = args.ruleset or base.kind
    self_tuning = kind.startswith("self")
    studies = args.studies if args.studies is not None else base.studies
    if self_tuning:
        mult = args.budget_multiplier if args.budget_multiplier is not None else (
            base.budget_multiplier if base.is_self_tuning else 3.0)
        return RulesetConfig("self", studies, 1, mult)
    trials = args.trials if args.trials is not None else base.trials_per_study
    mult = args.budget_multiplier if args.budget_multiplier is not None else (
        1.0 if base.is_self_tuning else base.budget_multiplier)
    return RulesetConfig("external", studies, trials, mult)


def _config_with_args(args) -> BenchmarkConfig:
    config = load_config(_need(args, "config"))
    ruleset = _ruleset_from_args(args, config.ruleset)
    return BenchmarkConfig(config.workloads, ruleset, args.r_max, config.search_spaces)


def _score_inputs(args):
    """``(matrix, profiles, leaderboard rows)`` from either logs+config or a times matrix."""
    if getattr(args, "matrix", None):
        matrix = read_matrix_csv(args.matrix)
        profiles = profiles_from_matrix(matrix)
        rows = [LeaderboardRow(p.submission_id, benchmark_score(p, args.r_max).value,
                               matrix.row(p.submission_id)) for p in profiles]
        return matrix, profiles, rows
    config = _config_with_args(args)
    trials = read_trial_logs(_need(args, "logs"))
    result = score_benchmark(config, trials, clock=Clock.parse(args.clock))
    return result.gated, list(result.profiles), list(result.leaderboard)


def cmd_score(args) -> None:
    matrix, profiles, rows = _score_inputs(args)
    if args.out:
        write_score_report(rows, matrix.workloads, profiles, args.out, args.format)
    elif args.format == "json":
        sys.stdout.write(report_json(rows, matrix.workloads, profiles))
    else:
        sys.stdout.write(csv_text(leaderboard_rows(rows, matrix.workloads)))


def cmd_profile(args) -> None:
    _, profiles, _ = _score_inputs(args)
    for p in profiles:
        if args.out:
            _write_text(Path(args.out) / f"{p.submission_id}.csv", profile_csv(p))
        else:
            sys.stdout.write(f"# {p.submission_id}\n{profile_csv(p)}")


def cmd_targets(args) -> None:
    config = load_config(_need(args, "config"))
    tuning = group_trials(read_trial_logs(_need(args, "logs")))
    reruns = group_trials(read_trial_logs(_need(args, "reruns")))
    out = {}
    for w in config.fixed_workloads:
        budget = target_setting_budget(w.max_runtime)
        wl_trials = [t for (s, wid), studies in tuning.items() if wid == w.id
                     for ts in studies.values() for t in ts]
        entry = {}
        if wl_trials:
            idx, best = select_best_config(wl_trials, w.direction, budget)
            entry["best_trial"] = idx
        seeds = [t for (s, wid), studies in reruns.items() if wid == w.id
                 for ts in studies.values() for t in ts]
        if not seeds:
            continue
        outcomes = [rerun_outcome(t, w.direction, i, budget) for i, t in enumerate(seeds)]
        out[w.id] = set_targets(outcomes, w.direction)
    _emit(args, "targets.json", targets_json(out))


def cmd_simulate_tuning(args) -> None:
    pool = list(read_value_column(_need(args, "pool"), args.column).values())
    direction = MetricDirection.parse(args.direction)
    rows = [("T", "median", "q1", "q3")]
    for T in args.T:
        med, q1, q3 = simulate_tuning(pool, T, args.n_sims, args.seed, direction)
        rows.append((T, med, q1, q3))
    _emit(args, "simulate_tuning.csv", csv_text(rows))


def cmd_phi(args) -> None:
    table = read_validation_table(_need(args, "table"))
    res = phi_metric(table)
    rows = [("point", "phi")] + [(p, float(v)) for p, v in zip(table.points, res.phi)]
    rows += [("Phi", res.Phi), ("best_point", res.best_point)]
    rows += [(f"phi_w:{w}", float(v)) for w, v in zip(table.workloads, res.per_workload)]
    _emit(args, "phi.csv", csv_text(rows))


def cmd_optlist(args) -> None:
    table = read_validation_table(_need(args, "table"))
    rankings = {}
    for j, (w, d) in enumerate(zip(table.workloads, table.directions)):
        col = table.values[:, j]
        ok = [i for i in range(len(col)) if not math.isnan(col[i])]
        key = (lambda i: col[i]) if d is MetricDirection.MINIMIZE else (lambda i: -col[i])
        # stable sort keeps ties in table order
        rankings[w] = [table.points[i] for i in sorted(ok, key=key)]
    chosen = build_optlist(rankings, args.budget)
    _emit(args, "optlist.csv", csv_text([("rank", "point")] + list(enumerate(chosen))))


def cmd_sample(args) -> None:
    if args.space:
        space = _space_from_dict(json.loads(Path(args.space).read_text()), "space")
    else:
        config = load_config(_need(args, "config"))
        sub = _need(args, "submission")
        if sub not in config.search_spaces:
            raise ConfigError(f"no search space for submission {sub!r}", field=f"search_spaces.{sub}")
        space = config.search_spaces[sub]
    points = sample_points(space, args.count, args.seed)
    _emit(args, "points.jsonl", "".join(json.dumps(p) + "\n" for p in points))


def cmd_cost(args) -> None:
    if args.config:
        config = load_config(args.config)
        budgets = {w.id: w.max_runtime for w in config.fixed_workloads}
        base = config.ruleset
    else:
        budgets = datasets.workload_budgets()
        base = RulesetConfig.external()
    ruleset = _ruleset_from_args(args, base)
    subset = args.subset.split(",") if args.subset else None
    c = estimate_costs(budgets, ruleset, not args.no_heldout, subset)
    rows = [("quantity", "hours"), ("one_hyperparameter", round(c.one_hyperparameter, 2)),
            ("scoring", round(c.scoring, 2))]
    if c.tuning is not None:
        rows.append(("tuning", round(c.tuning, 2)))
    _emit(args, "cost.csv", csv_text(rows))


def cmd_transfer_ranks(args) -> None:
    base = read_value_column(_need(args, "base"))
    variant = read_value_column(_need(args, "variant"))
    r = transfer_ranks(base, variant, MetricDirection.parse(args.direction))
    _emit(args, "transfer_ranks.csv", csv_text([("base_to_variant", "variant_to_base", "min"), r]))


def _demo_family(speed: float):
    """Curves whose validation value reaches the target after about ``1/speed`` of the run."""
    def family(point: dict, w: WorkloadSpec) -> CurveModel:
        lr = float(point.get("learning_rate", 1e-3)) if point else 1e-3
        quality = 1.0 / (1.0 + abs(math.log10(lr) + 3.0))
        sign = 1.0 if w.direction is MetricDirection.MINIMIZE else -1.0
        scale = abs(w.validation_target) or 1.0
        asym = w.validation_target - sign * 0.02 * scale * quality
        test_gap = w.test_target - w.validation_target
        return CurveModel(asym, sign * 0.5 * scale, rate=speed * 0.01, noise_scale=0.001 * scale,
                          direction=w.direction, test_offset=test_gap)
    return family


def cmd_simulate(args) -> None:
    config = _config_with_args(args)
    subs = [MockSubmission(f"sub{i}", _demo_family(1.0 + 0.5 * i)) for i in range(args.submissions)]
    comp = run_mock_competition(config, subs, args.seed)
    _emit(args, "trials.jsonl", format_trial_log(comp.trials))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ttr-arbiter", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="<command>")

    def add(name, func, help_text, hidden=False):
        kw = {} if hidden else {"help": help_text}
        p = sub.add_parser(name, description=help_text, **kw)
        _common(p, suppress=True)
        p.set_defaults(func=func)
        return p

    def ruleset_flags(p):
        p.add_argument("--ruleset", choices=["external", "self"], default=None)
        p.add_argument("--studies", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--budget-multiplier", type=float, default=None, dest="budget_multiplier")

    for name, func, text in (("score", cmd_score, "score submissions and write a leaderboard"),
                             ("profile", cmd_profile, "write per-submission performance profiles")):
        p = add(name, func, text)
        ruleset_flags(p)
        p.add_argument("--matrix", help="times CSV (submission x workload) instead of logs")
        p.add_argument("--clock", choices=["runtime", "steps"], default="runtime")
        if name == "score":
            p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = add("targets", cmd_targets, "set targets from tuning logs and rerun logs")
    p.add_argument("--reruns", help="rerun trial logs (one trial per seed)")

    p = add("simulate-tuning", cmd_simulate_tuning, "bootstrap best-of-T tuning simulation")
    p.add_argument("--pool", help="CSV of id,value")
    p.add_argument("--column", default=None)
    p.add_argument("--T", type=int, nargs="+", default=[5, 20])
    p.add_argument("--n-sims", type=int, default=1000, dest="n_sims")
    p.add_argument("--direction", default="minimize")

    p = add("phi", cmd_phi, "shared-point degradation metric over a validation table")
    p.add_argument("--table", help="CSV: point,<workloads...>; optional 'direction' row")

    p = add("optlist", cmd_optlist, "greedy round-robin OptList from a validation table")
    p.add_argument("--table")
    p.add_argument("--budget", type=int, default=20)

    p = add("sample", cmd_sample, "sample points from a search space")
    p.add_argument("--space", help="search-space JSON (alternative to --config/--submission)")
    p.add_argument("--submission")
    p.add_argument("--count", type=int, default=20)

    p = add("cost", cmd_cost, "estimate benchmark cost in hours")
    ruleset_flags(p)
    p.add_argument("--no-heldout", action="store_true", dest="no_heldout")
    p.add_argument("--subset", help="comma-separated workload ids")

    p = add("transfer-ranks", cmd_transfer_ranks, "rank transfer between a workload and its variant")
    p.add_argument("--base")
    p.add_argument("--variant")
    p.add_argument("--direction", default="minimize")

    p = add("simulate", cmd_simulate, "generate mock trial logs", hidden=True)
    ruleset_flags(p)
    p.add_argument("--submissions", type=int, default=2)
    return parser


def error_record(exc: BaseException) -> dict:
    rec = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("field", "line_no"):
        if getattr(exc, attr, None) is not None:
            rec[attr] = getattr(exc, attr)
    return rec


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ArbiterError, ValueError, OSError, KeyError) as exc:
        sys.stderr.write(json.dumps(error_record(exc)) + "\n")
        return EXIT_ERROR
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
