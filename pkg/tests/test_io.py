import json

import pytest
from hypothesis import given, strategies as st

from ttr_arbiter import datasets
from ttr_arbiter.core import BenchmarkConfig, INF, EvalEvent, ExtendedTime, RulesetConfig, TrialRecord, TrialStatus
from ttr_arbiter.errors import ConfigError, DanglingHeldOutBase, DuplicateEvent, IoFailure, MalformedLine, NonMonotoneRuntime
from ttr_arbiter.io import (
    config_to_dict,
    dump_config,
    format_trial_log,
    parse_config,
    parse_trial_log,
    profile_csv,
    read_matrix_csv,
    read_trial_logs,
    read_validation_table,
    matrix_csv,
    write_score_report,
)
from ttr_arbiter.scoring import LeaderboardRow, performance_profile
from ttr_arbiter.searchspace import BoxSearchSpace, Discrete, Fixed, LogUniform, OptList


def line(**kw):
    rec = {"submission": "s", "workload": "w", "study": 0, "trial": 0, "step": 1, "runtime_s": 1.0, "val": 0.5}
    rec.update(kw)
    return json.dumps(rec)


class TestTrialLogs:
    def test_grouping(self):
        lines = [line(step=3, runtime_s=3.0), line(step=1), line(step=2, runtime_s=2.0, test=0.4)]
        (t,) = parse_trial_log(lines)
        assert [e.step for e in t.events] == [1, 2, 3]
        assert t.events[1].test_metric == 0.4 and t.events[0].test_metric is None

    def test_duplicate(self):
        with pytest.raises(DuplicateEvent):
            parse_trial_log([line(), line()])

    def test_non_monotone_runtime(self):
        with pytest.raises(NonMonotoneRuntime):
            parse_trial_log([line(step=1, runtime_s=5.0), line(step=2, runtime_s=4.0)])

    def test_malformed_reports_line_number(self):
        with pytest.raises(MalformedLine) as e:
            parse_trial_log([line(), "", "{not json"])
        assert e.value.line_no == 3
        with pytest.raises(MalformedLine) as e:
            parse_trial_log([json.dumps({"submission": "s"})])
        assert e.value.line_no == 1
        with pytest.raises(MalformedLine):
            parse_trial_log([line(step=-1)])
        with pytest.raises(MalformedLine):
            parse_trial_log([line(status="exploded")])

    def test_status_and_point(self):
        (t,) = parse_trial_log([line(status="diverged", point={"lr": 0.1})])
        assert t.status is TrialStatus.DIVERGED and t.point == {"lr": 0.1}

    def test_directory_merge(self, tmp_path):
        (tmp_path / "a.jsonl").write_text(line(study=0) + "\n")
        (tmp_path / "b.jsonl").write_text(line(study=1) + "\n")
        trials = read_trial_logs(tmp_path)
        assert [t.study_index for t in trials] == [0, 1]

    def test_missing_dir(self, tmp_path):
        with pytest.raises(IoFailure):
            read_trial_logs(tmp_path / "nope.jsonl")

    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.lists(
        st.tuples(st.floats(-10, 10), st.one_of(st.none(), st.floats(-10, 10))), min_size=1, max_size=5),
        st.sampled_from(list(TrialStatus))), max_size=6, unique_by=lambda x: (x[0], x[1])))
    def test_roundtrip_fixed_point(self, specs):
        trials = []
        for study, trial, evs, status in specs:
            events = tuple(EvalEvent(i + 1, float(i), v, t) for i, (v, t) in enumerate(evs))
            trials.append(TrialRecord("w", study, trial, {"lr": 0.5}, events, status, "s"))
        trials.sort(key=lambda t: t.key)
        text = format_trial_log(trials)
        again = parse_trial_log(text.splitlines())
        assert again == trials
        assert format_trial_log(again) == text


class TestConfig:
    def _config(self):
        fixed = datasets.fixed_workloads()
        spaces = {
            "adamw": BoxSearchSpace((LogUniform("learning_rate", 1e-5, 1e-1), Discrete("warmup", ("2%", "5%", "10%")),
                                     Fixed("beta2", 0.999))),
            "nesterov_optlist": OptList(tuple(datasets.nesterov_optlist()[:3])),
        }
        return BenchmarkConfig(tuple(fixed), RulesetConfig.external(), 4.0, spaces)

    def test_roundtrip(self):
        cfg = self._config()
        again = parse_config(dump_config(cfg))
        assert config_to_dict(again) == config_to_dict(cfg)
        assert again.workloads == cfg.workloads and again.ruleset == cfg.ruleset

    def test_bad_field_named(self):
        d = config_to_dict(self._config())
        del d["workloads"][2]["test_target"]
        with pytest.raises(ConfigError) as e:
            parse_config(json.dumps(d))
        assert e.value.field == "workloads[2].test_target"

    def test_dangling_from_file(self):
        d = config_to_dict(self._config())
        d["workloads"].append(dict(d["workloads"][0], id="x", heldout_of="missing"))
        with pytest.raises(DanglingHeldOutBase):
            parse_config(json.dumps(d))

    def test_not_json(self):
        with pytest.raises(ConfigError):
            parse_config("{")


class TestReports:
    def test_leaderboard_sorted_and_inf(self, tmp_path):
        rows = [LeaderboardRow("b", 0.60, (ExtendedTime(5.0), INF)), LeaderboardRow("a", 0.85, (ExtendedTime(3.0), ExtendedTime(2.0)))]
        write_score_report(rows, ["w1", "w2"], [], tmp_path)
        text = (tmp_path / "leaderboard.csv").read_text().splitlines()
        assert text[0] == "submission,benchmark_score,w1,w2"
        assert text[1].startswith("a,0.85,")
        assert text[2] == "b,0.6,5.0,inf"

    def test_profile_anchor(self):
        p = performance_profile([1.035, 1.364] + [float("inf")] * 6, 8)
        lines = profile_csv(p).splitlines()
        assert lines[0] == "tau,rho" and lines[1] == "1.0,0.0" and len(lines) == 4
        assert lines[2].endswith(",0.125") and lines[3].endswith(",0.25")

    def test_profile_no_anchor_when_jump_at_one(self):
        lines = profile_csv(performance_profile([1.0, 2.0])).splitlines()
        assert lines[1] == "1.0,0.5"

    def test_json_report(self, tmp_path):
        rows = [LeaderboardRow("a", 0.5, (INF,))]
        (p,) = write_score_report(rows, ["w"], [performance_profile([float("inf")], 1, "a")], tmp_path, "json")
        doc = json.loads(p.read_text())
        assert doc["leaderboard"][0]["times"]["w"] == "inf"
        assert doc["profiles"]["a"] == [[1.0, 0.0]]

    def test_empty_report(self, tmp_path):
        with pytest.raises(ValueError):
            write_score_report([], ["w"], [], tmp_path)

    def test_matrix_csv_roundtrip(self, tmp_path):
        m = datasets.baseline_runtimes()
        p = tmp_path / "m.csv"
        p.write_text(matrix_csv(m))
        assert read_matrix_csv(p) == m

    def test_validation_table(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("point,a,b\ndirection,minimize,maximize\nh0,1.0,\nh1,2.0,3.0\n")
        t = read_validation_table(p)
        assert t.points == ("h0", "h1") and t.missing[0, 1]
        assert t.directions[1].value == "maximize"
