from __future__ import annotations

import itertools

import numpy as np
import pytest

from engine.errors import EmptyParticipantsError, ShapeMismatchError
from engine.flsim.aggregators import (
    AdagradState,
    ClientUpdate,
    FedAdagradAggregator,
    aggregate_fedadagrad,
    aggregate_fedavg,
    aggregate_fednova,
    list_aggregators,
    make_aggregator,
)
from engine.flsim.config import FedAdagradConfig, FedAvgConfig, FedNovaConfig
from engine.model.mlp import ModelParams, init_params
from engine.model.spec import MlpSpec

# 파라미터 4개짜리 모델: 모든 성분을 같은 값으로 채워 스칼라처럼 다룬다
SCALAR = MlpSpec(input_dim=1, hidden_dim=1, num_classes=1)
SMALL = MlpSpec(input_dim=2, hidden_dim=2, num_classes=2)


def _const(value: float, spec: MlpSpec = SCALAR) -> ModelParams:
    return ModelParams(spec, np.full(spec.param_count, value))


def _update(cid: int, params: ModelParams, n: int, steps: int = 1) -> ClientUpdate:
    return ClientUpdate(client_id=cid, params=params, n_samples=n, local_steps=steps)


def test_fedavg_single_update_is_returned_exactly():
    local = init_params(SMALL, 9)
    out = aggregate_fedavg(init_params(SMALL, 0), [_update(0, local, 17)])
    assert np.array_equal(out.vector, local.vector)


def test_fedavg_equal_sizes_is_plain_mean():
    p, q = init_params(SMALL, 1), init_params(SMALL, 2)
    out = aggregate_fedavg(init_params(SMALL, 0), [_update(0, p, 5), _update(1, q, 5)])
    np.testing.assert_allclose(out.vector, (p.vector + q.vector) / 2, rtol=1e-15)


def test_fedavg_weights_by_sample_count():
    out = aggregate_fedavg(_const(0), [_update(0, _const(0), 1), _update(1, _const(4), 3)])
    np.testing.assert_allclose(out.vector, 3.0)


def test_fednova_normalizes_by_local_steps():
    out = aggregate_fednova(_const(0), [_update(0, _const(1), 10, steps=1), _update(1, _const(2), 10, steps=2)])
    np.testing.assert_allclose(out.vector, 1.5)


def test_fednova_equals_fedavg_when_steps_agree():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        g = ModelParams(SMALL, rng.standard_normal(SMALL.param_count))
        m = int(rng.integers(1, 5))
        steps = int(rng.integers(1, 10))
        updates = [
            _update(cid, ModelParams(SMALL, rng.standard_normal(SMALL.param_count)), int(rng.integers(1, 50)), steps)
            for cid in range(m)
        ]
        nova = aggregate_fednova(g, updates)
        avg = aggregate_fedavg(g, updates)
        assert np.max(np.abs(nova.vector - avg.vector)) <= 1e-12


def test_fednova_single_update_is_exact():
    local = init_params(SMALL, 3)
    out = aggregate_fednova(init_params(SMALL, 0), [_update(4, local, 8, steps=3)])
    assert np.array_equal(out.vector, local.vector)


def test_fedadagrad_first_step():
    state, out = aggregate_fedadagrad(AdagradState(), _const(0), [_update(0, _const(0.3), 10)], lr=0.1, beta1=0.0, tau=1e-3)
    np.testing.assert_allclose(out.vector, 0.1 * 0.3 / (0.3 + 1e-3), rtol=1e-9)
    np.testing.assert_allclose(state.accumulator, 0.09)


def test_fedadagrad_zero_update_keeps_model():
    state, out = aggregate_fedadagrad(AdagradState(), _const(1.5), [_update(0, _const(1.5), 10)], lr=0.1, beta1=0.0, tau=1e-3)
    np.testing.assert_array_equal(out.vector, 1.5)
    np.testing.assert_array_equal(state.accumulator, 0.0)


def test_fedadagrad_repeated_update_takes_smaller_steps():
    aggregator = FedAdagradAggregator(lr=0.1, beta1=0.0, tau=1e-3)
    g0 = _const(0.0)
    g1 = aggregator.aggregate(g0, [_update(0, _const(0.3), 10)])
    g2 = aggregator.aggregate(g1, [_update(0, _const(float(g1.vector[0]) + 0.3), 10)])
    first = g1.vector[0] - g0.vector[0]
    second = g2.vector[0] - g1.vector[0]
    assert 0 < second < first


@pytest.mark.parametrize("kind", ["fedavg", "fednova", "fedadagrad"])
def test_result_does_not_depend_on_completion_order(kind):
    rng = np.random.default_rng(5)
    g = init_params(SMALL, 0)
    updates = [
        _update(cid, ModelParams(SMALL, rng.standard_normal(SMALL.param_count)), cid + 3, steps=cid + 1)
        for cid in range(4)
    ]
    cfg = {"fedavg": FedAvgConfig(), "fednova": FedNovaConfig(), "fedadagrad": FedAdagradConfig()}[kind]
    results = [make_aggregator(cfg).aggregate(g, list(order)).vector for order in itertools.permutations(updates)]
    for other in results[1:]:
        assert np.array_equal(results[0], other)


def test_mismatched_shapes_are_rejected():
    with pytest.raises(ShapeMismatchError):
        aggregate_fedavg(init_params(SMALL, 0), [_update(0, _const(1.0), 3)])


def test_empty_round_is_rejected():
    with pytest.raises(EmptyParticipantsError):
        aggregate_fedavg(init_params(SMALL, 0), [])


def test_registry_builds_fresh_instances():
    assert list_aggregators() == ["fedavg", "fednova", "fedadagrad"]
    a = make_aggregator(FedAdagradConfig(lr=0.5))
    b = make_aggregator(FedAdagradConfig(lr=0.5))
    assert a is not b
    assert a.lr == 0.5 and a.name == "fedadagrad"


def test_unknown_aggregator_kind_lists_the_registered_ones():
    # 설정 검증을 우회해 만든 kind도 레지스트리에서 걸러진다
    cfg = FedAvgConfig.model_construct(kind="scaffold")
    with pytest.raises(ValueError, match="fedavg, fednova, fedadagrad"):
        make_aggregator(cfg)
