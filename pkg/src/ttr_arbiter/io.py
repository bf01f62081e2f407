"""Reading configs and trial logs; writing reports, profiles and targets.

Formats
-------
Benchmark config
    One JSON document (see :func:`config_to_dict` for the layout).
Trial logs
    JSON Lines, one object per eval event with the fields ``submission``,
    ``workload``, ``study``, ``trial``, ``step``, ``runtime_s``, ``val`` and
    optionally ``test``, ``status`` and ``point``.
Reports
    CSV or JSON. Infinite times are written as the string ``"inf"`` and
    floats use ``repr`` so that output is byte-stable.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import os
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .core import (
    BenchmarkConfig,
    EvalEvent,
    ExtendedTime,
    MetricDirection,
    RulesetConfig,
    ScoreMatrix,
    TrialRecord,
    TrialStatus,
    WorkloadSpec,
    validate_benchmark_config,
)
from .errors import ConfigError, DuplicateEvent, IoFailure, MalformedLine, NonMonotoneRuntime
from .searchspace import BoxSearchSpace, Discrete, Fixed, LinearUniform, LogUniform, OptList
from .analysis import ValidationTable

PathLike = Union[str, os.PathLike]


# --------------------------------------------------------------------------
# numbers

def format_number(x) -> str:
    """``"inf"`` for infinite values, ``repr`` for floats, ``str`` otherwise."""
    if isinstance(x, ExtendedTime):
        x = x.as_float()
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _json_number(x):
    if isinstance(x, ExtendedTime):
        return "inf" if x.is_infinite else x.value
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


# --------------------------------------------------------------------------
# config

_DIM_KINDS = {
    "log_uniform": LogUniform,
    "linear_uniform": LinearUniform,
}


def _space_from_dict(d: Mapping, where: str):
    kind = d.get("type", "box")
    if kind == "optlist":
        return OptList(tuple(d["points"]))
    if kind != "box":
        raise ConfigError(f"unknown search space type {kind!r}", field=f"{where}.type")
    dims = []
    for i, dim in enumerate(d.get("dimensions", [])):
        f = f"{where}.dimensions[{i}]"
        try:
            k = dim["kind"]
            if k in _DIM_KINDS:
                dims.append(_DIM_KINDS[k](dim["name"], float(dim["lo"]), float(dim["hi"])))
            elif k == "discrete":
                dims.append(Discrete(dim["name"], tuple(dim["values"])))
            elif k == "fixed":
                dims.append(Fixed(dim["name"], dim["value"]))
            else:
                raise ConfigError(f"unknown dimension kind {k!r}", field=f"{f}.kind")
        except KeyError as e:
            raise ConfigError(f"dimension is missing {e.args[0]!r}", field=f"{f}.{e.args[0]}") from None
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e), field=f) from None
    return BoxSearchSpace(tuple(dims))


def _space_to_dict(space) -> dict:
    if isinstance(space, OptList):
        return {"type": "optlist", "points": [dict(p) for p in space.points]}
    dims = []
    for d in space.dimensions:
        if isinstance(d, LogUniform):
            dims.append({"name": d.name, "kind": "log_uniform", "lo": d.lo, "hi": d.hi})
        elif isinstance(d, LinearUniform):
            dims.append({"name": d.name, "kind": "linear_uniform", "lo": d.lo, "hi": d.hi})
        elif isinstance(d, Discrete):
            dims.append({"name": d.name, "kind": "discrete", "values": list(d.values)})
        else:
            dims.append({"name": d.name, "kind": "fixed", "value": d.value})
    return {"type": "box", "dimensions": dims}


def config_from_dict(data: Mapping) -> BenchmarkConfig:
    """Build and validate a :class:`BenchmarkConfig` from parsed JSON.

    Layout::

        {"r_max": 4,
         "ruleset": {"kind": "external", "studies": 5, "trials_per_study": 20,
                     "budget_multiplier": 1},
         "workloads": [{"id": "resnet", "direction": "minimize",
                        "validation_target": 0.22569, "test_target": 0.344,
                        "max_runtime": 63008, "max_steps": null,
                        "heldout_of": null}, ...],
         "search_spaces": {"<submission>": {"type": "box", "dimensions": [...]}}}
    """
    if not isinstance(data, Mapping):
        raise ConfigError("config must be a JSON object", field="")
    workloads = []
    for i, w in enumerate(data.get("workloads", [])):
        where = f"workloads[{i}]"
        try:
            workloads.append(WorkloadSpec(
                id=str(w["id"]),
                direction=MetricDirection.parse(w["direction"]),
                validation_target=float(w["validation_target"]),
                test_target=float(w["test_target"]),
                max_runtime=float(w["max_runtime"]),
                max_steps=None if w.get("max_steps") is None else int(w["max_steps"]),
                heldout_of=w.get("heldout_of"),
            ))
        except KeyError as e:
            raise ConfigError(f"workload is missing {e.args[0]!r}", field=f"{where}.{e.args[0]}") from None
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{where}: {e}", field=where) from None
    rs = data.get("ruleset", {})
    try:
        ruleset = RulesetConfig(
            kind=rs.get("kind", "external"),
            studies=int(rs.get("studies", 5)),
            trials_per_study=int(rs.get("trials_per_study", 20)),
            budget_multiplier=float(rs.get("budget_multiplier",
                                           3.0 if str(rs.get("kind", "")).startswith("self") else 1.0)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"ruleset: {e}", field="ruleset") from None
    spaces = {str(k): _space_from_dict(v, f"search_spaces.{k}")
              for k, v in data.get("search_spaces", {}).items()}
    config = BenchmarkConfig(tuple(workloads), ruleset, float(data.get("r_max", 4.0)), spaces)
    return validate_benchmark_config(config)


def config_to_dict(config: BenchmarkConfig) -> dict:
    return {
        "r_max": config.r_max,
        "ruleset": {
            "kind": config.ruleset.kind,
            "studies": config.ruleset.studies,
            "trials_per_study": config.ruleset.trials_per_study,
            "budget_multiplier": config.ruleset.budget_multiplier,
        },
        "workloads": [
            {"id": w.id, "direction": w.direction.value, "validation_target": w.validation_target,
             "test_target": w.test_target, "max_runtime": w.max_runtime, "max_steps": w.max_steps,
             "heldout_of": w.heldout_of}
            for w in config.workloads
        ],
        "search_spaces": {k: _space_to_dict(v) for k, v in config.search_spaces.items()},
    }


def parse_config(text: str) -> BenchmarkConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}", field="") from None
    return config_from_dict(data)


def dump_config(config: BenchmarkConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=False) + "\n"


def load_config(path: PathLike) -> BenchmarkConfig:
    return parse_config(_read_text(path))


# --------------------------------------------------------------------------
# trial logs

_REQUIRED = ("submission", "workload", "study", "trial", "step", "runtime_s", "val")


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e


def _as_int(v, name, line_no):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or v != int(v) or v < 0:
        raise MalformedLine(f"line {line_no}: {name} must be a nonnegative integer, got {v!r}", line_no)
    return int(v)


def _as_float(v, name, line_no):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise MalformedLine(f"line {line_no}: {name} must be a finite number, got {v!r}", line_no)
    return float(v)


def parse_trial_log(lines: Iterable[str], start_line: int = 1, _acc: dict = None) -> list:
    """Group JSON Lines eval records into :class:`TrialRecord` objects.

    Blank lines are skipped. Trials are returned sorted by
    ``(submission, workload, study, trial)`` with events sorted by step.

    Raises
    ------
    MalformedLine
        A line is not a JSON object or has a missing or mistyped field.
    DuplicateEvent
        Two records share ``(submission, workload, study, trial, step)``.
    NonMonotoneRuntime
        Within a trial, runtime decreases as step increases.
    """
    acc = _acc if _acc is not None else {}
    for line_no, raw in enumerate(lines, start=start_line):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as e:
            raise MalformedLine(f"line {line_no}: not valid JSON ({e.msg})", line_no) from None
        if not isinstance(rec, dict):
            raise MalformedLine(f"line {line_no}: expected a JSON object", line_no)
        missing = [k for k in _REQUIRED if k not in rec]
        if missing:
            raise MalformedLine(f"line {line_no}: missing field(s) {missing}", line_no)
        key = (str(rec["submission"]), str(rec["workload"]),
               _as_int(rec["study"], "study", line_no), _as_int(rec["trial"], "trial", line_no))
        step = _as_int(rec["step"], "step", line_no)
        test = rec.get("test")
        ev = EvalEvent(step, _as_float(rec["runtime_s"], "runtime_s", line_no),
                       _as_float(rec["val"], "val", line_no),
                       None if test is None else _as_float(test, "test", line_no))
        try:
            status = TrialStatus.parse(rec.get("status"))
        except ValueError:
            raise MalformedLine(f"line {line_no}: unknown status {rec.get('status')!r}", line_no) from None
        point = rec.get("point")
        if point is not None and not isinstance(point, dict):
            raise MalformedLine(f"line {line_no}: point must be an object", line_no)

        entry = acc.setdefault(key, {"events": {}, "status": TrialStatus.COMPLETED, "point": {}})
        if step in entry["events"]:
            raise DuplicateEvent(f"line {line_no}: duplicate event {key + (step,)}")
        entry["events"][step] = ev
        if status is not TrialStatus.COMPLETED:
            entry["status"] = status
        if point:
            entry["point"] = point
    if _acc is not None:
        return []
    return _finish(acc)


def _finish(acc: dict) -> list:
    trials = []
    for key in sorted(acc):
        entry = acc[key]
        events = [entry["events"][s] for s in sorted(entry["events"])]
        for prev, cur in zip(events, events[1:]):
            if cur.runtime < prev.runtime:
                raise NonMonotoneRuntime(
                    f"trial {key}: runtime drops from {prev.runtime} to {cur.runtime} at step {cur.step}")
        sub, wl, study, trial = key
        trials.append(TrialRecord(wl, study, trial, entry["point"], tuple(events), entry["status"], sub))
    return trials


def read_trial_logs(path: PathLike) -> list:
    """Parse one ``.jsonl`` file or every ``*.jsonl`` file in a directory (name order)."""
    p = Path(path)
    files = sorted(p.glob("*.jsonl")) if p.is_dir() else [p]
    if p.is_dir() and not files:
        raise IoFailure(f"no .jsonl trial logs in {p}")
    acc = {}
    for f in files:
        try:
            with open(f) as fh:
                try:
                    parse_trial_log(fh, _acc=acc)
                except MalformedLine as e:
                    raise MalformedLine(f"{f}: {e}", e.line_no) from None
        except OSError as e:
            raise IoFailure(f"cannot read {f}: {e}") from e
    return _finish(acc)


def trial_to_lines(trial: TrialRecord) -> list:
    out = []
    for ev in trial.events:
        rec = {
            "submission": trial.submission_id, "workload": trial.workload_id,
            "study": trial.study_index, "trial": trial.trial_index,
            "step": ev.step, "runtime_s": ev.runtime, "val": ev.validation_metric,
        }
        if ev.test_metric is not None:
            rec["test"] = ev.test_metric
        if trial.status is not TrialStatus.COMPLETED:
            rec["status"] = trial.status.value
        if trial.point:
            rec["point"] = trial.point
        out.append(json.dumps(rec, sort_keys=False))
    return out


def format_trial_log(trials: Iterable[TrialRecord]) -> str:
    return "".join(line + "\n" for t in trials for line in trial_to_lines(t))


def write_trial_log(trials: Iterable[TrialRecord], path: PathLike) -> None:
    _write_text(path, format_trial_log(trials))


def _write_text(path: PathLike, text: str) -> None:
    try:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


# --------------------------------------------------------------------------
# reports

def _csv(rows: Sequence[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([format_number(c) for c in r])
    return buf.getvalue()


def profile_rows(profile) -> list:
    """``(tau, rho)`` rows, prefixed with ``(1, 0)`` unless the first jump is at 1."""
    rows = [(float(t), float(r)) for t, r in profile.breakpoints]
    if not rows or rows[0][0] > 1.0:
        rows.insert(0, (1.0, 0.0))
    return rows


def profile_csv(profile) -> str:
    return _csv([("tau", "rho")] + profile_rows(profile))


def leaderboard_rows(rows, workloads: Sequence[str]) -> list:
    """Header plus one row per leaderboard entry, best score first."""
    ordered = sorted(rows, key=lambda r: (-r.score, r.submission_id))
    out = [["submission", "benchmark_score", *workloads]]
    for r in ordered:
        out.append([r.submission_id, float(r.score), *r.times])
    return out


def report_json(rows, workloads: Sequence[str], profiles: Sequence = ()) -> str:
    ordered = sorted(rows, key=lambda r: (-r.score, r.submission_id))
    doc = {
        "leaderboard": [
            {"submission": r.submission_id, "benchmark_score": float(r.score),
             "times": {w: _json_number(t) for w, t in zip(workloads, r.times)}}
            for r in ordered
        ],
        "profiles": {
            p.submission_id: [[t, r] for t, r in profile_rows(p)] for p in profiles
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def write_score_report(rows, workloads: Sequence[str], profiles: Sequence, out_dir: PathLike,
                       fmt: str = "csv") -> list:
    """Write the leaderboard and per-submission profiles; return the paths written.

    ``fmt="csv"`` writes ``leaderboard.csv`` and ``profiles/<submission>.csv``;
    ``fmt="json"`` writes a single ``report.json``.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no scores to report")
    out = Path(out_dir)
    written = []
    if fmt == "json":
        p = out / "report.json"
        _write_text(p, report_json(rows, workloads, profiles))
        return [p]
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    p = out / "leaderboard.csv"
    _write_text(p, _csv(leaderboard_rows(rows, workloads)))
    written.append(p)
    for prof in profiles:
        pp = out / "profiles" / f"{prof.submission_id}.csv"
        _write_text(pp, profile_csv(prof))
        written.append(pp)
    return written


def matrix_csv(matrix: ScoreMatrix) -> str:
    rows = [["submission", *matrix.workloads]]
    rows += [[s, *matrix.row(s)] for s in matrix.submissions]
    return _csv(rows)


def read_matrix_csv(path: PathLike) -> ScoreMatrix:
    """Inverse of :func:`matrix_csv`; cells may be numbers or ``inf``."""
    rows = list(csv.reader(_io.StringIO(_read_text(path))))
    if not rows or rows[0][0] != "submission":
        raise MalformedLine(f"{path}: expected a 'submission' header", 1)
    header, body = rows[0], [r for r in rows[1:] if r]
    try:
        return ScoreMatrix([r[0] for r in body], header[1:],
                           [[ExtendedTime.parse(c) for c in r[1:]] for r in body])
    except ValueError as e:
        raise MalformedLine(f"{path}: {e}", None) from None


def targets_json(targets: Mapping[str, tuple]) -> str:
    doc = {w: {"validation_target": v, "test_target": t} for w, (v, t) in targets.items()}
    return json.dumps(doc, indent=2) + "\n"


# --------------------------------------------------------------------------
# validation tables

def read_validation_table(path: PathLike, directions: Optional[Sequence] = None) -> ValidationTable:
    """Points as rows, workloads as columns.

    The header is ``point,<w1>,<w2>,...``. An optional row whose first cell is
    ``direction`` gives ``minimize``/``maximize`` per workload (default
    minimize). Empty cells and ``nan`` are missing values.
    """
    rows = [r for r in csv.reader(_io.StringIO(_read_text(path))) if r]
    if not rows:
        raise MalformedLine(f"{path}: empty table", 1)
    header = rows[0]
    workloads = header[1:]
    body = rows[1:]
    dirs = None
    if body and body[0][0].strip().lower() == "direction":
        dirs = [MetricDirection.parse(c) for c in body[0][1:]]
        body = body[1:]
    if directions is not None:
        dirs = [MetricDirection.parse(d) for d in directions]
    if dirs is None:
        dirs = [MetricDirection.MINIMIZE] * len(workloads)
    values = []
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise MalformedLine(f"{path}: row {i} has {len(r)} cells, expected {len(header)}", i)
        try:
            values.append([float(c) if c.strip() not in ("", "nan", "NaN") else math.nan for c in r[1:]])
        except ValueError:
            raise MalformedLine(f"{path}: row {i} has a non-numeric cell", i) from None
    return ValidationTable(tuple(workloads), tuple(dirs), tuple(r[0] for r in body), values)


def read_value_column(path: PathLike, column: Optional[str] = None) -> dict:
    """``{row id: value}`` from a two-or-more column CSV (first column is the id)."""
    rows = [r for r in csv.reader(_io.StringIO(_read_text(path))) if r]
    header = rows[0]
    j = 1 if column is None else header.index(column)
    try:
        return {r[0]: float(r[j]) for r in rows[1:]}
    except (ValueError, IndexError):
        raise MalformedLine(f"{path}: bad value in column {header[j]!r}", None) from None


def write_csv(path: PathLike, rows: Sequence[Sequence]) -> None:
    _write_text(path, _csv(rows))


def csv_text(rows: Sequence[Sequence]) -> str:
    return _csv(rows)
