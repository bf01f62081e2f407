import math

import pytest
from hypothesis import given, strategies as st

from ttr_arbiter.core import INF, ExtendedTime, MetricDirection, RulesetConfig, WorkloadSpec
from ttr_arbiter.errors import EvenStudyCount, MixedStudies
from ttr_arbiter.rulesets import (
    build_score_matrix,
    score_study_external,
    score_study_selftuning,
    score_workload,
)

from conftest import make_trial
from helpers_rules import WORKLOAD, as_time, brute_external, brute_median, trial_with_times

inf = math.inf
CONFORMER = WorkloadSpec("conformer", MetricDirection.MINIMIZE, 0.078477, 0.046973, 101780.0)
time_vals = st.one_of(st.just(inf), st.integers(1, 1500).map(float))


class TestExternal:
    def test_select_by_val_score_by_test(self):
        trials = [trial_with_times(100, 120, trial=0), trial_with_times(80, 200, trial=1),
                  trial_with_times(inf, inf, trial=2)]
        assert score_study_external(trials, WORKLOAD) == ExtendedTime(200)

    def test_all_val_infinite(self):
        trials = [trial_with_times(inf, 10, trial=i) for i in range(3)]
        assert score_study_external(trials, WORKLOAD) is INF

    def test_selected_test_infinite(self):
        trials = [trial_with_times(50, inf, trial=0), trial_with_times(60, 70, trial=1)]
        assert score_study_external(trials, WORKLOAD) is INF

    def test_tie_lowest_index(self):
        trials = [trial_with_times(50, 300, trial=5), trial_with_times(50, 100, trial=3)]
        assert score_study_external(trials, WORKLOAD) == ExtendedTime(100)

    def test_budget_applies_to_test_time(self):
        trials = [trial_with_times(100, 1200, trial=0)]
        assert score_study_external(trials, WORKLOAD) is INF

    def test_mixed_studies(self):
        with pytest.raises(MixedStudies):
            score_study_external([trial_with_times(1, 1, study=0), trial_with_times(1, 1, study=1)], WORKLOAD)

    @given(st.lists(st.tuples(time_vals, time_vals), min_size=1, max_size=8), st.randoms())
    def test_matches_brute_force_and_permutation(self, pairs, rnd):
        trials = [trial_with_times(v, t, trial=i) for i, (v, t) in enumerate(pairs)]
        expected = brute_external(pairs, WORKLOAD.max_runtime)
        assert score_study_external(trials, WORKLOAD) == as_time(expected)
        rnd.shuffle(trials)
        assert score_study_external(trials, WORKLOAD) == as_time(expected)


class TestSelfTuning:
    def test_within_tripled_budget(self):
        t = make_trial([(1000, 0.2), (150000, 0.07)], tests=[0.2, 0.04])
        assert score_study_selftuning(t, CONFORMER, 3) == ExtendedTime(150000)

    def test_beyond_tripled_budget(self):
        t = make_trial([(1000, 0.2), (310000, 0.07)], tests=[0.2, 0.04])
        assert score_study_selftuning(t, CONFORMER, 3) is INF

    def test_never(self):
        t = make_trial([(1000, 0.2)], tests=[0.2])
        assert score_study_selftuning(t, CONFORMER, 3) is INF


class TestScoreWorkload:
    def test_median(self):
        assert score_workload([100, 120, 90, "inf", 110]) == ExtendedTime(110)

    def test_majority_failure(self):
        assert score_workload([inf, inf, inf, 50, 60]) is INF

    def test_constant(self):
        assert score_workload([7.0] * 5) == ExtendedTime(7.0)

    def test_even(self):
        with pytest.raises(EvenStudyCount):
            score_workload([1, 2, 3, 4])

    @given(st.lists(time_vals, min_size=1, max_size=9).filter(lambda x: len(x) % 2 == 1), st.randoms())
    def test_oracle_and_permutation(self, xs, rnd):
        ys = xs[:]
        rnd.shuffle(ys)
        assert score_workload(xs) == score_workload(ys) == as_time(brute_median(xs))
        assert score_workload(xs).is_infinite == (2 * sum(map(math.isinf, xs)) > len(xs))


class TestScoreMatrix:
    def test_missing_study_counts_as_infinite(self):
        rs = RulesetConfig.external(studies=3, trials_per_study=1)
        trials = [trial_with_times(10, 10, study=0), trial_with_times(20, 20, study=1)]
        m = build_score_matrix(trials, [WORKLOAD], rs)
        assert m.time("s", "w") == ExtendedTime(20)
        m = build_score_matrix(trials[:1], [WORKLOAD], rs)
        assert m.time("s", "w") is INF

    def test_self_tuning_ruleset(self):
        rs = RulesetConfig.self_tuning(studies=1)
        trials = [trial_with_times(2500, 2500, horizon=4000)]
        m = build_score_matrix(trials, [WORKLOAD], rs)
        assert m.time("s", "w") == ExtendedTime(2500)
