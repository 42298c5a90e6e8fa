from __future__ import annotations

import pytest

from engine.core.preferences import validate_preferences
from engine.core.types import CostConstants
from engine.flsim.config import CostConfig, ModelConfig, PreferencesConfig, RunConfig, TrainingConfig
from engine.flsim.replay import replay_decisions, replay_overheads
from engine.flsim.runner import run_training
from engine.tuner.config import TunerConfig

from conftest import TINY_DATASET

PREFS = (0.4, 0.1, 0.3, 0.2)
TUNER = TunerConfig(epsilon=0.01)


@pytest.fixture(scope="module")
def tuned_trace(tiny_dataset):
    cfg = RunConfig(
        dataset=TINY_DATASET,
        model=ModelConfig(hidden_dim=8),
        training=TrainingConfig(m=3, e=2, lr=0.05, batch_size=5, target_accuracy=1.0, max_rounds=15),
        tuner=TUNER,
        preferences=PreferencesConfig(alpha=PREFS[0], beta=PREFS[1], gamma=PREFS[2], delta=PREFS[3]),
        cost=CostConfig(c1=3, c2=5, c3=7, c4=11),
    )
    return run_training(cfg, dataset=tiny_dataset)


def _signature(decision):
    if decision is None:
        return None
    return (decision.next.m, decision.next.e, decision.delta_m_sign, decision.delta_e_sign, decision.warmup)


def test_replayed_overheads_match_recorded(tuned_trace):
    replayed = replay_overheads(tuned_trace.records, tuned_trace.cost)
    assert replayed == [r.cumulative for r in tuned_trace.records]


def test_replayed_decisions_match_recorded(tuned_trace, tiny_dataset):
    decisions = replay_decisions(
        tuned_trace.records, tuned_trace.cost, TUNER, validate_preferences(*PREFS),
        k_clients=tiny_dataset.k_clients,
    )
    for record, decision in zip(tuned_trace.records, decisions):
        if record.decision is None:
            assert decision is None
        else:
            assert (decision.next.m, decision.next.e) == (record.decision["next_m"], record.decision["next_e"])


def test_scaling_all_costs_leaves_decisions_unchanged(tuned_trace, tiny_dataset):
    prefs = validate_preferences(*PREFS)
    base = replay_decisions(tuned_trace.records, tuned_trace.cost, TUNER, prefs, k_clients=tiny_dataset.k_clients)
    scaled = replay_decisions(
        tuned_trace.records, tuned_trace.cost.scaled(7), TUNER, prefs, k_clients=tiny_dataset.k_clients,
    )
    assert [_signature(d) for d in base] == [_signature(d) for d in scaled]


def test_replay_with_other_costs_scales_totals(tuned_trace):
    doubled = replay_overheads(tuned_trace.records, tuned_trace.cost.scaled(2))
    assert doubled[-1].trans_time == 2 * tuned_trace.totals.trans_time


def test_replay_of_nothing():
    assert replay_overheads([], CostConstants(1, 1, 1, 1)) == []
    assert replay_decisions([], CostConstants(1, 1, 1, 1), TUNER, validate_preferences(*PREFS)) == []
