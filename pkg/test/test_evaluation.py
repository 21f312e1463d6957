"""
Tests for the evaluation harness: seeds, rollouts, aggregation, reference
checks, paired comparison and trajectory logs.
"""

import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from relay_bench.calibration import fit_budget
from relay_bench.errors import ComparisonError, ConfigError, RelayBenchError
from relay_bench.evaluation import (
    BASELINE_REFERENCE,
    BUDGET_FIT_GRID,
    DIRECTIONAL_HANDOVER_RANGE,
    JAMMED_CONTINUE_PAST,
    REPULSION_STEP_RULE,
    EpisodeRecord,
    MetricsRow,
    MetricsTable,
    aggregate,
    attribute,
    check_reference,
    compare,
    episode_seed,
    evaluate,
    lower_median,
    read_results,
    read_trajectory,
    records_to_frame,
    run_episode,
    splitmix64,
    step_states,
    write_results,
    write_trajectory,
)
from relay_bench.game import W_DELIVERED, W_RUNNING, ConstantBudget, ScenarioParams, rollout_value, t_max
from relay_bench.policy import BaselinePolicy, PolicySpec

BUDGET = ConstantBudget(1.0)


def _record(episode_id: int, success: bool, V: float, T_del: int | None, D_tot: float, **kwargs) -> EpisodeRecord:
    fields = dict(seed=episode_id, K=1, scenario="iso-nojam", R=3.0)
    fields.update(kwargs)
    return EpisodeRecord(episode_id=episode_id, success=success, V=V, T_del=T_del, D_tot=D_tot, **fields)


class TestSeeds:
    """Tests for per-episode seed derivation."""

    def test_splitmix_reference_output(self):
        """SplitMix64 reproduces the reference output."""
        # First output of the SplitMix64 generator seeded with 0
        assert splitmix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF
        assert episode_seed(1, 0) == 0xE220A8397B1DCDAF

    def test_seeds_fit_in_64_bits_and_differ(self):
        """Episode seeds are distinct 64-bit values."""
        seeds = [episode_seed(7, i) for i in range(1000)]
        assert len(set(seeds)) == 1000
        assert all(0 <= s < 2**64 for s in seeds)

    def test_master_seed_changes_stream(self):
        """Another master seed gives other episode seeds."""
        assert episode_seed(0, 5) != episode_seed(1, 5)


class TestMetrics:
    """Tests for aggregation."""

    def test_lower_median(self):
        """Lower median, including the empty case."""
        assert lower_median([4.0, 1.0, 3.0, 2.0]) == 2.0
        assert lower_median([5.0]) == 5.0
        assert lower_median([3.0, 1.0, 2.0]) == 2.0
        assert math.isnan(lower_median([]))

    def test_medians_use_successes_only(self):
        """Medians skip failed episodes."""
        records = [
            _record(0, True, 1.0, 10, 2.0),
            _record(1, True, 3.0, 20, 4.0),
            _record(2, False, -5.0, None, 9.0),
            _record(3, True, 2.0, 30, 3.0),
        ]
        row = aggregate(records, "baseline").get("baseline", "iso-nojam", 1)
        assert row.episodes == 4
        assert row.successes == 3
        assert row.S == 0.75
        assert (row.V, row.T_del, row.D_tot) == (2.0, 20.0, 3.0)

    def test_aggregate_ignores_record_order(self):
        """Aggregation does not depend on record order."""
        records = [_record(i, i % 3 != 0, float(i), i + 5, 0.5 * i) for i in range(12)]
        forward = aggregate(records, "p").to_frame()
        backward = aggregate(list(reversed(records)), "p").to_frame()
        pd.testing.assert_frame_equal(forward, backward)

    def test_single_episode_cell(self):
        """A one-episode cell reports that episode."""
        row = aggregate([_record(0, True, 0.4, 7, 1.2)], "p").get("p", "iso-nojam", 1)
        assert (row.S, row.V, row.T_del, row.D_tot) == (1.0, 0.4, 7.0, 1.2)

    def test_no_successes_gives_nan(self):
        """A cell without successes reports NaN medians."""
        row = aggregate([_record(0, False, 0.0, None, 0.0)], "p").get("p", "iso-nojam", 1)
        assert row.S == 0.0
        assert math.isnan(row.V) and math.isnan(row.T_del)

    def test_cells_split_by_scenario_and_agents(self):
        """Rows are keyed by scenario and K."""
        records = [
            _record(0, True, 1.0, 5, 1.0),
            _record(0, True, 2.0, 6, 1.0, K=3),
            _record(0, True, 3.0, 7, 1.0, scenario="dir-jam"),
        ]
        table = aggregate(records, "p")
        assert len(table.rows) == 3
        assert table.get("p", "iso-nojam", 3).V == 2.0
        with pytest.raises(KeyError):
            table.get("p", "iso-jam", 1)


class TestRunner:
    """Tests for seeded rollouts."""

    def test_episode_is_reproducible(self):
        """The same seed gives the same episode."""
        params = ScenarioParams.for_scenario("iso-jam")
        policy = BaselinePolicy(params)
        a = run_episode(policy, 1234, 3, params, BUDGET, 1.5)
        b = run_episode(policy, 1234, 3, params, BUDGET, 1.5)
        assert a.same_metrics(b)

    def test_zero_policy_collects_nothing(self):
        """Standing still only succeeds when delivered at reset."""
        params = ScenarioParams.for_scenario("iso-nojam")
        records = evaluate(PolicySpec(kind="zero"), 20, 3, 2, params, BUDGET, 1.0)
        for record in records:
            assert record.D_tot == 0.0
            if record.success:
                assert record.T_del == 0
            else:
                assert record.V == 0.0
                assert record.T_del is None

    def test_results_file_is_byte_identical(self, tmp_path: Path):
        """Two runs write byte-identical results."""
        params = ScenarioParams.for_scenario("dir-jam")
        spec = PolicySpec()
        first = evaluate(spec, 6, 11, 2, params, BUDGET, 1.5)
        second = evaluate(spec, 6, 11, 2, params, BUDGET, 1.5)
        a = write_results(first, tmp_path / "a.csv")
        b = write_results(second, tmp_path / "b.csv")
        assert a.read_bytes() == b.read_bytes()

    def test_worker_count_does_not_change_results(self, tmp_path: Path):
        """Worker count does not change the results file."""
        params = ScenarioParams.for_scenario("iso-jam")
        serial = evaluate(PolicySpec(), 5, 2, 2, params, BUDGET, 1.5, workers=1)
        parallel = evaluate(PolicySpec(), 5, 2, 2, params, BUDGET, 1.5, workers=2)
        assert [r.episode_id for r in parallel] == list(range(5))
        assert write_results(serial, tmp_path / "s.csv").read_bytes() == write_results(
            parallel, tmp_path / "p.csv"
        ).read_bytes()

    def test_episode_seeds_follow_master_seed(self):
        """Records carry the derived episode seeds."""
        params = ScenarioParams.for_scenario("iso-nojam")
        records = evaluate(PolicySpec(kind="zero"), 3, 9, 1, params, BUDGET, 1.0)
        assert [r.seed for r in records] == [episode_seed(9, i) for i in range(3)]

    @pytest.mark.parametrize("episodes, c_time, code", [(0, 1.0, "CFG_EPISODES"), (1, 0.0, "CFG_C_TIME")])
    def test_invalid_arguments(self, episodes, c_time, code):
        """Bad episode counts and c_time are config errors."""
        params = ScenarioParams.for_scenario("iso-nojam")
        with pytest.raises(ConfigError) as exc:
            evaluate(PolicySpec(), episodes, 0, 1, params, BUDGET, c_time)
        assert exc.value.code == code

    def test_results_round_trip(self, tmp_path: Path):
        """Results read back with their types."""
        params = ScenarioParams.for_scenario("iso-nojam")
        records = evaluate(PolicySpec(), 4, 0, 2, params, BUDGET, 1.5)
        frame = read_results(write_results(records, tmp_path / "r.csv"))
        assert list(frame["episode_id"]) == [0, 1, 2, 3]
        assert frame["success"].dtype == bool
        assert [int(s) for s in frame["seed"]] == [r.seed for r in records]

    @pytest.mark.parametrize("kind, reached", [("baseline", True), ("zero", False)])
    def test_recorded_value_matches_trajectory(self, kind: str, reached: bool):
        """V from play equals the discounted sum over the recorded transitions, delivered or timed out."""
        params = ScenarioParams.for_scenario("iso-nojam")
        policy = PolicySpec(kind=kind).build(2, params)
        horizon = t_max(2, params, 1.0)
        outcomes = set()
        for i in range(20):
            record = run_episode(policy, episode_seed(5, i), 2, params, BUDGET, 1.0, episode_id=i, record=True)
            assert abs(record.V - rollout_value(record.trajectory, params.gamma)) <= 1e-12
            if record.success:
                assert record.trajectory[-1].state.w == W_DELIVERED
                assert record.trajectory[-1].reward == BUDGET.terminal(record.R)
            else:
                assert len(record.trajectory) == horizon
                assert all(transition.state.w == W_RUNNING for transition in record.trajectory)
            outcomes.add(record.success)
        assert reached in outcomes


class TestTrajectory:
    """Tests for trajectory logs."""

    def test_write_and_read(self, tmp_path: Path):
        """A recorded episode round-trips through its log."""
        params = ScenarioParams.for_scenario("iso-jam")
        record = run_episode(BaselinePolicy(params), 42, 2, params, BUDGET, 1.5, episode_id=3, record=True)
        path = write_trajectory(record, tmp_path / "episode_3.jsonl")

        header, steps = read_trajectory(path)
        assert header["episode_id"] == 3
        assert header["seed"] == 42
        assert header["plan"]["retriever"] in (0, 1)
        assert len(steps) == len(record.trajectory) + 1
        assert [s["t"] for s in steps] == list(range(len(steps)))
        assert steps[-1]["actions"] is None

        states = step_states(steps)
        assert states[0].equals(record.trajectory[0].state)
        assert states[-1].equals(record.final_state)

    def test_unrecorded_episode(self, tmp_path: Path):
        """Test that writing an unrecorded episode fails."""
        params = ScenarioParams.for_scenario("iso-nojam")
        record = run_episode(BaselinePolicy(params), 1, 1, params, BUDGET, 1.5)
        with pytest.raises(RelayBenchError) as exc:
            write_trajectory(record, tmp_path / "x.jsonl")
        assert exc.value.code == "EVAL_NO_TRAJECTORY"


class TestCompare:
    """Tests for paired comparison."""

    def test_self_comparison_lies_on_diagonal(self):
        """Pairing a run with itself gives equal columns."""
        params = ScenarioParams.for_scenario("iso-nojam")
        frame = records_to_frame(evaluate(PolicySpec(), 4, 5, 2, params, BUDGET, 1.5))
        paired = compare(frame, frame.copy())
        assert len(paired) == 4
        np.testing.assert_array_equal(paired["V_a"], paired["V_b"])
        np.testing.assert_array_equal(paired["D_a"], paired["D_b"])

    def test_count_mismatch(self):
        """Runs of different length cannot be paired."""
        frame = records_to_frame([_record(i, True, 1.0, 3, 1.0) for i in range(3)])
        with pytest.raises(ComparisonError) as exc:
            compare(frame, frame.iloc[:2])
        assert exc.value.code == "EVAL_COMPARE_MISMATCH"
        assert exc.value.exit_code == 2

    def test_seed_mismatch(self):
        """Runs over different seeds cannot be paired."""
        a = records_to_frame([_record(i, True, 1.0, 3, 1.0) for i in range(3)])
        b = records_to_frame([_record(i, True, 1.0, 3, 1.0, seed=100 + i) for i in range(3)])
        with pytest.raises(ComparisonError):
            compare(a, b)


class TestReference:
    """Tests for the baseline reference check."""

    @staticmethod
    def _table(scenario: str, agents: int, V: float, T: float, D: float) -> MetricsTable:
        return MetricsTable([MetricsRow("baseline", scenario, agents, 100, 100, 1.0, V, T, D)])

    def test_exact_values_pass(self):
        """The reference values pass their own check."""
        for (scenario, agents), (_, V, T, D) in BASELINE_REFERENCE.items():
            checks = check_reference(self._table(scenario, agents, V, T, D))
            assert len(checks) == 3
            assert all(c.passed and c.attribution is None for c in checks)

    def test_absolute_tolerance_for_single_agent(self):
        """K = 1 uses absolute tolerances."""
        checks = check_reference(self._table("iso-nojam", 1, 0.93, 14, 2.4))
        assert [c.passed for c in checks] == [False, True, True]
        assert checks[0].tolerance == 0.05

    def test_relative_tolerance(self):
        """K > 1 uses relative tolerances."""
        checks = check_reference(self._table("iso-nojam", 5, 3.31 * 1.1, 25 * 1.3, 9))
        assert [c.passed for c in checks] == [True, False, True]
        assert checks[1].attribution == REPULSION_STEP_RULE

    def test_nan_fails(self):
        """NaN medians fail."""
        checks = check_reference(self._table("dir-nojam", 3, math.nan, math.nan, math.nan))
        assert not any(c.passed for c in checks)

    def test_other_policies_and_cells_skipped(self):
        """Only baseline rows with a reference are checked."""
        table = MetricsTable(
            [
                MetricsRow("learned", "iso-nojam", 1, 1, 1, 1.0, 0.0, 0.0, 0.0),
                MetricsRow("baseline", "iso-nojam", 2, 1, 1, 1.0, 0.0, 0.0, 0.0),
            ]
        )
        assert check_reference(table) == []

    @pytest.mark.parametrize(
        "scenario, metric, expected",
        [
            ("iso-jam", "T_del", JAMMED_CONTINUE_PAST),
            ("dir-jam", "D_tot", JAMMED_CONTINUE_PAST),
            ("dir-nojam", "T_del", DIRECTIONAL_HANDOVER_RANGE),
            ("dir-jam", "V", BUDGET_FIT_GRID),
            ("iso-nojam", "D_tot", REPULSION_STEP_RULE),
        ],
    )
    def test_attribution(self, scenario, metric, expected):
        """Misses are attributed to the matching design decision."""
        assert attribute(scenario, metric) == expected


@pytest.mark.acceptance
class TestBaselineReproduction:
    """Baseline medians against the reference table (10'000 episodes per cell)."""

    @pytest.mark.parametrize("scenario", ["iso-nojam", "iso-jam", "dir-nojam", "dir-jam"])
    @pytest.mark.parametrize("agents", [1, 3, 5, 7, 9])
    def test_cell_within_tolerance(self, scenario: str, agents: int):
        """Baseline medians land within tolerance of the reference."""
        params = ScenarioParams.for_scenario(scenario)
        budget = fit_budget(agents, ScenarioParams())
        records = evaluate(PolicySpec(), 10_000, 0, agents, params, budget, 1.5, workers=4)
        table = aggregate(records, "baseline")
        assert table.get("baseline", scenario, agents).S == 1.0
        misses = [c for c in check_reference(table) if not c.passed]
        assert misses == []

    @pytest.mark.parametrize("agents", [2, 10, 20])
    def test_positive_value_margin(self, agents: int):
        """The baseline median value stays above zero."""
        params = ScenarioParams()
        budget = fit_budget(agents, params)
        records = evaluate(PolicySpec(), 1000, 1, agents, params, budget, 1.5, workers=4)
        assert lower_median([r.V for r in records if r.success]) > 0.0
