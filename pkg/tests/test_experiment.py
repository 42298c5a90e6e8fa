from __future__ import annotations

import math

import pandas as pd
import pytest

from engine.core.preferences import validate_preferences
from engine.core.types import CostConstants, OverheadVector
from engine.errors import ConfigError
from engine.experiment.config import (
    ExperimentConfig,
    PlannedRun,
    _deep_merge,
    build_experiment_config,
    plan_compare,
    plan_runs,
    plan_sweep,
)
from engine.experiment.executor import execute_runs
from engine.experiment.grid import DEFAULT_PREFERENCE_GRID, preference_grid, sweep_grid
from engine.experiment.report import (
    RUN_FIELDS,
    build_comparison,
    comparison_frame,
    overall_score,
    overhead_at_accuracy_frame,
    runs_frame,
    summarize_arm,
    sweep_frame,
    sweep_pivots,
)
from engine.flsim.config import ModelConfig, RunConfig
from engine.flsim.trace import RoundRecord, TrainingTrace

from conftest import TINY_DATASET

SMALL_RAW = {
    "dataset": TINY_DATASET,
    "model": {"hidden_dim": 8},
    "training": {"m": 3, "e": 1, "lr": 0.05, "batch_size": 5, "target_accuracy": 0.0, "max_rounds": 3},
}


def _trace(totals, seed: int = 0, m: int = 3, e: float = 1, status: str = "reached_target") -> TrainingTrace:
    overhead = OverheadVector(*totals)
    record = RoundRecord(
        round=1, m=m, e=e, participants=tuple(range(m)), sizes=(1,) * m,
        round_overhead=overhead, cumulative=overhead, accuracy=0.9,
    )
    return TrainingTrace(
        records=(record,), status=status, target_accuracy=0.8,
        cost=CostConstants(1, 1, 1, 1), seed=seed,
    )


def _plan(seed: int = 0, m: int = 3, e: float = 1, prefs=None) -> PlannedRun:
    return PlannedRun(RunConfig(), seed, m, e, prefs)


# --- 격자 ---

def test_default_preference_grid_is_valid():
    grid = preference_grid(DEFAULT_PREFERENCE_GRID)
    assert len(grid) == 15
    assert len(set(grid)) == 15
    for prefs in grid:
        assert sum(prefs.weights()) == pytest.approx(1.0, abs=1e-9)


def test_sweep_grid_is_m_major():
    assert sweep_grid([1, 5], [1, 2]) == [(1, 1), (1, 2), (5, 1), (5, 2)]


# --- 설정 ---

def test_defaults_build():
    cfg = build_experiment_config({})
    assert cfg.experiment.repetitions == 3
    assert cfg.seeds() == [0, 1, 2]
    assert not cfg.tuner.enabled
    assert cfg.training.m == 20 and cfg.training.e == 20


def test_unknown_key_is_a_config_error():
    with pytest.raises(ConfigError, match="traning"):
        build_experiment_config({"traning": {"m": 3}})
    with pytest.raises(ConfigError):
        build_experiment_config({"training": {"m": 3, "momentom": 0.5}})


def test_out_of_range_values_are_config_errors():
    with pytest.raises(ConfigError):
        build_experiment_config({"training": {"target_accuracy": 1.5}})
    with pytest.raises(ConfigError):
        build_experiment_config({"training": {"e": 2.5}})
    with pytest.raises(ConfigError):
        build_experiment_config({"sweep": {"m": []}})
    with pytest.raises(ConfigError):
        build_experiment_config({"preferences": {"alpha": 0.5, "beta": 0.6, "gamma": 0, "delta": 0}})


def test_enabled_tuner_needs_preferences():
    with pytest.raises(ConfigError, match="preferences"):
        build_experiment_config({"tuner": {"enabled": True}})
    cfg = build_experiment_config({"tuner": {"enabled": True}, "preferences": {"alpha": 1, "beta": 0, "gamma": 0, "delta": 0}})
    run = cfg.run_config(0)
    assert run.tuner is not None
    assert run.preferences.to_preferences() == validate_preferences(1, 0, 0, 0)


def test_overrides_are_deep_merged():
    merged = _deep_merge({"experiment": {"name": "a", "repetitions": 2}}, {"experiment": {"repetitions": 5}})
    assert merged == {"experiment": {"name": "a", "repetitions": 5}}
    cfg = build_experiment_config(SMALL_RAW, {"experiment": {"repetitions": 1, "seed": 7}})
    assert cfg.seeds() == [7]
    assert cfg.training.m == 3


def test_experiment_name_must_be_a_file_name():
    with pytest.raises(ConfigError):
        build_experiment_config({"experiment": {"name": "a/b"}})


def test_config_is_frozen():
    cfg = build_experiment_config({})
    with pytest.raises(Exception):
        cfg.training = None  # type: ignore[misc]
    assert isinstance(cfg, ExperimentConfig)


# --- 실행 계획 ---

def test_plan_runs_uses_one_seed_per_repetition():
    plans = plan_runs(build_experiment_config(SMALL_RAW, {"experiment": {"repetitions": 2, "seed": 10}}))
    assert [p.seed for p in plans] == [10, 11]
    assert all(p.run.tuner is None and p.preferences is None for p in plans)


def test_sweep_plan_covers_grid_times_seeds():
    cfg = build_experiment_config(SMALL_RAW, {"sweep": {"m": [1, 5], "e": [1, 2]}, "experiment": {"repetitions": 3}})
    plans = plan_sweep(cfg)
    assert len(plans) == 12
    assert [(p.m, p.e) for p in plans[:3]] == [(1, 1), (1, 1), (1, 1)]
    assert all(p.run.tuner is None for p in plans)
    assert all(p.run.training.m == p.m and p.run.training.e == p.e for p in plans)


def test_sweep_plan_leaves_population_check_to_run_time():
    cfg = build_experiment_config(SMALL_RAW, {"sweep": {"m": [50], "e": [1]}, "experiment": {"repetitions": 1}})
    assert len(plan_sweep(cfg)) == 1


def test_compare_plan_pairs_baseline_with_every_preference_row():
    cfg = build_experiment_config(
        SMALL_RAW,
        {"experiment": {"repetitions": 2}, "compare": {"preferences": [[1, 0, 0, 0], [0, 0, 0.5, 0.5]]}},
    )
    baseline, fedtune = plan_compare(cfg)
    assert len(baseline) == 2
    assert len(fedtune) == 4
    assert all(p.run.tuner is None for p in baseline)
    assert all(p.run.tuner is not None for p in fedtune)
    assert [p.preferences for p in fedtune[:2]] == [validate_preferences(1, 0, 0, 0)] * 2
    assert [p.seed for p in fedtune] == [0, 1, 0, 1]


def test_compare_plan_with_fractional_e_is_a_config_error():
    cfg = build_experiment_config({**SMALL_RAW, "training": {**SMALL_RAW["training"], "e": 0.5}})
    with pytest.raises(ConfigError):
        plan_compare(cfg)


# --- 보고서 ---

def test_identical_arms_score_zero():
    prefs = validate_preferences(0.25, 0.25, 0.25, 0.25)
    x = OverheadVector(10, 20, 30, 40)
    assert overall_score(x, x, prefs) == 0.0
    report = build_comparison([_trace(x.as_tuple())], [(prefs, _trace(x.as_tuple()))], target_accuracy=0.8)
    assert report.rows[0].score == (0.0, 0.0)
    assert report.grand_mean == 0.0
    assert report.negative_rows == 0


def test_identical_arms_over_several_seeds_score_exactly_zero():
    prefs = validate_preferences(0.25, 0.25, 0.25, 0.25)
    totals = [(0.1, 0.7, 0.3, 1.1), (0.2, 0.9, 0.7, 1.3), (0.3, 0.3, 0.1, 0.7)]
    traces = [_trace(t, seed=i) for i, t in enumerate(totals)]
    report = build_comparison(traces, [(prefs, t) for t in traces], target_accuracy=0.8)
    mean, std = report.rows[0].score
    assert mean == 0.0 and math.copysign(1.0, mean) == 1.0
    assert std > 0.0
    assert report.grand_mean == 0.0
    assert report.negative_rows == 0


def test_improvement_scores_positive():
    prefs = validate_preferences(1, 0, 0, 0)
    report = build_comparison(
        [_trace((100, 1, 1, 1), seed=0), _trace((100, 1, 1, 1), seed=1)],
        [(prefs, _trace((80, 1, 1, 1), seed=0)), (prefs, _trace((60, 1, 1, 1), seed=1))],
        target_accuracy=0.8,
    )
    mean, std = report.rows[0].score
    assert mean == pytest.approx(30.0)
    assert std == pytest.approx(10.0)
    assert report.grand_mean == pytest.approx(30.0)


def test_arm_summary_statistics():
    arm = summarize_arm([_trace((1, 1, 1, 1), m=2), _trace((3, 1, 5, 1), m=4, status="exhausted_max_rounds")])
    assert arm.mean == OverheadVector(2, 1, 3, 1)
    assert arm.std == OverheadVector(1, 0, 2, 0)
    assert arm.final_m == (3.0, 1.0)
    assert (arm.runs, arm.reached) == (2, 1)
    with pytest.raises(ValueError):
        summarize_arm([])


def test_comparison_frame_layout():
    prefs = validate_preferences(0, 1, 0, 0)
    report = build_comparison([_trace((1, 2, 3, 4))], [(prefs, _trace((1, 1, 3, 4)))], target_accuracy=0.8)
    frame = comparison_frame(report)
    assert frame["arm"].tolist() == ["baseline", "fedtune", "grand_mean"]
    assert frame.loc[1, "pref_beta"] == 1.0
    assert math.isnan(frame.loc[0, "pref_alpha"])
    assert frame.loc[1, "overall_pct_mean"] == pytest.approx(50.0)
    assert frame.loc[2, "overall_pct_mean"] == pytest.approx(50.0)


def test_runs_frame_has_fixed_columns():
    prefs = validate_preferences(0, 0, 1, 0)
    frame = runs_frame([(_plan(prefs=None), _trace((1, 2, 3, 4))), (_plan(prefs=prefs), _trace((1, 2, 3, 4), seed=1))])
    assert tuple(frame.columns) == RUN_FIELDS
    assert math.isnan(frame.loc[0, "pref_gamma"])
    assert frame.loc[1, "pref_gamma"] == 1.0
    assert frame["seed"].tolist() == [0, 1]


def test_sweep_frame_normalizes_by_grid_minimum():
    results = [
        (_plan(m=1, e=1), _trace((4, 2, 8, 1), m=1)),
        (_plan(m=1, e=2), _trace((2, 4, 16, 1), m=1)),
        (_plan(m=5, e=1), _trace((8, 1, 4, 5), m=5)),
    ]
    frame = sweep_frame(results)
    assert len(frame) == 3
    for name in ("comp_time", "trans_time", "comp_load", "trans_load"):
        assert frame[f"{name}_norm"].min() == 1.0
    assert frame.loc[1, "comp_load_norm"] == 4.0
    pivots = sweep_pivots(frame)
    assert pivots["comp_time"].loc[1, 2] == 1.0
    assert math.isnan(pivots["comp_time"].loc[5, 2])
    assert isinstance(pivots["trans_load"], pd.DataFrame)



def _width_plan(hidden_dim: int, m: int = 3, e: float = 1, seed: int = 0) -> PlannedRun:
    return PlannedRun(RunConfig(model=ModelConfig(hidden_dim=hidden_dim)), seed, m, e)


def test_sweep_frame_normalizes_each_hidden_width_separately():
    results = [
        (_width_plan(4, m=1), _trace((2, 2, 2, 2), m=1)),
        (_width_plan(4, m=5), _trace((4, 1, 8, 10), m=5)),
        (_width_plan(8, m=1), _trace((20, 2, 20, 2), m=1)),
        (_width_plan(8, m=5), _trace((60, 1, 80, 10), m=5)),
    ]
    frame = sweep_frame(results)
    assert frame["hidden_dim"].tolist() == [4, 4, 8, 8]
    assert frame["comp_time_norm"].tolist() == [1.0, 2.0, 1.0, 3.0]
    pivots = sweep_pivots(frame)
    assert pivots["comp_load"].loc[(8, 5), 1] == 4.0
    assert pivots["trans_time"].loc[(4, 1), 1] == 2.0


def _climbing_trace(accuracies, seed: int = 0) -> TrainingTrace:
    records = []
    cumulative = OverheadVector()
    for r, accuracy in enumerate(accuracies, start=1):
        step = OverheadVector(1, 1, 2, 3)
        cumulative = cumulative + step
        records.append(RoundRecord(
            round=r, m=3, e=1, participants=(0, 1, 2), sizes=(1, 1, 1),
            round_overhead=step, cumulative=cumulative, accuracy=accuracy,
        ))
    return TrainingTrace(
        records=tuple(records), status="exhausted_max_rounds", target_accuracy=0.9,
        cost=CostConstants(1, 1, 1, 1), seed=seed,
    )


def test_overhead_at_accuracy_levels_uses_first_round_reaching_each_level():
    trace = _climbing_trace([0.3, 0.55, 0.5, 0.72])
    frame = overhead_at_accuracy_frame([(_width_plan(16), trace)], [0.5, 0.7, 0.9])
    assert frame["accuracy_level"].tolist() == [0.5, 0.7, 0.9]
    assert frame["round"].tolist()[:2] == [2, 4]
    assert math.isnan(frame.loc[2, "round"])
    assert frame.loc[0, "comp_load"] == 4.0
    assert frame.loc[1, "trans_load"] == 12.0
    assert math.isnan(frame.loc[2, "comp_time"])
    assert (frame["hidden_dim"] == 16).all()


def test_sweep_plan_adds_hidden_width_axis():
    cfg = build_experiment_config(
        SMALL_RAW,
        {"sweep": {"m": [1, 2], "e": [1], "hidden_dim": [4, 16]}, "experiment": {"repetitions": 2}},
    )
    plans = plan_sweep(cfg)
    assert len(plans) == 8
    assert [p.run.model.hidden_dim for p in plans] == [4] * 4 + [16] * 4
    assert [(p.m, p.seed) for p in plans[:4]] == [(1, 0), (1, 1), (2, 0), (2, 1)]
    default = plan_sweep(build_experiment_config(SMALL_RAW, {"sweep": {"m": [1], "e": [1]}}))
    assert {p.run.model.hidden_dim for p in default} == {8}


@pytest.mark.parametrize(
    "sweep",
    [{"hidden_dim": []}, {"hidden_dim": [0]}, {"accuracy_levels": [0.0]}, {"accuracy_levels": [1.2]}],
)
def test_invalid_sweep_axes_are_config_errors(sweep):
    with pytest.raises(ConfigError):
        build_experiment_config({"sweep": sweep})


# --- 실행기 ---

def test_parallel_execution_matches_sequential():
    cfg = build_experiment_config(SMALL_RAW, {"experiment": {"repetitions": 3}})
    plans = plan_runs(cfg)
    done = []
    sequential = execute_runs(plans, jobs=1, on_done=lambda d, t: done.append((d, t)))
    parallel = execute_runs(plans, jobs=2)
    assert done == [(1, 3), (2, 3), (3, 3)]
    assert [p.seed for p, _ in parallel] == [0, 1, 2]
    for (_, a), (_, b) in zip(sequential, parallel):
        assert a.summary() == b.summary()
        assert [r.to_dict() for r in a.records] == [r.to_dict() for r in b.records]
