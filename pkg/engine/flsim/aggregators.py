from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Protocol, Sequence, Tuple

import numpy as np

from engine.errors import EmptyParticipantsError, ShapeMismatchError
from engine.flsim.config import AggregatorConfig, FedAdagradConfig
from engine.model.mlp import ModelParams


# 참가자 한 명의 로컬 학습 결과.
@dataclass(frozen=True)
class ClientUpdate:
    client_id: int
    params: ModelParams
    n_samples: int        # n_k
    local_steps: int = 1  # 미니배치 스텝 수 (FedNova 정규화용)


def _prepare(global_params: ModelParams, updates: Sequence[ClientUpdate]) -> Tuple[Tuple[ClientUpdate, ...], np.ndarray]:
    # 완료 순서와 무관하게 client id 오름차순으로 reduce한다 (결과가 비트 단위로 재현된다)
    if not updates:
        raise EmptyParticipantsError("aggregation needs at least one update")
    ordered = tuple(sorted(updates, key=lambda u: u.client_id))
    for u in ordered:
        if u.params.spec != global_params.spec or u.params.size != global_params.size:
            raise ShapeMismatchError(
                f"client {u.client_id} parameters ({u.params.size}) do not match global ({global_params.size})"
            )
    total = float(sum(u.n_samples for u in ordered))
    weights = np.array([u.n_samples / total for u in ordered], dtype=np.float64)
    return ordered, weights


def aggregate_fedavg(global_params: ModelParams, updates: Sequence[ClientUpdate]) -> ModelParams:
    """n_k/Σn 가중 평균."""
    ordered, weights = _prepare(global_params, updates)
    acc = np.zeros(global_params.size, dtype=np.float64)
    for w, u in zip(weights, ordered):
        acc += w * u.params.vector
    return global_params.with_vector(acc)


def aggregate_fednova(global_params: ModelParams, updates: Sequence[ClientUpdate]) -> ModelParams:
    """클라이언트 변화량을 로컬 스텝 수로 정규화한 뒤 데이터 가중 평균한다.

    d_k = (w_k − g) / τ_k,  τ_eff = Σ p_k τ_k,  g' = g + τ_eff · Σ p_k d_k
    """
    ordered, weights = _prepare(global_params, updates)
    steps = [u.local_steps for u in ordered]
    if any(s < 1 for s in steps):
        raise ValueError(f"local_steps must be >= 1, got {steps}")
    # 스텝 수가 모두 같으면 정규화가 상쇄되어 FedAvg와 같은 값이 된다
    if len(set(steps)) == 1:
        return aggregate_fedavg(global_params, ordered)

    g = global_params.vector
    direction = np.zeros_like(g)
    tau_eff = 0.0
    for w, u in zip(weights, ordered):
        direction += w * (u.params.vector - g) / u.local_steps
        tau_eff += w * u.local_steps
    return global_params.with_vector(g + tau_eff * direction)


@dataclass(frozen=True)
class AdagradState:
    momentum: Optional[np.ndarray] = None      # m
    accumulator: Optional[np.ndarray] = None   # v (제곱 누적)


def aggregate_fedadagrad(
    server_state: AdagradState,
    global_params: ModelParams,
    updates: Sequence[ClientUpdate],
    lr: float,
    beta1: float,
    tau: float,
) -> Tuple[AdagradState, ModelParams]:
    """서버 측 Adagrad.

    Δ = Σ p_k (w_k − g)
    m ← β1·m + (1 − β1)·Δ
    v ← v + Δ²
    g' = g + lr · m / (√v + τ)
    """
    ordered, weights = _prepare(global_params, updates)
    g = global_params.vector
    momentum = server_state.momentum if server_state.momentum is not None else np.zeros_like(g)
    accumulator = server_state.accumulator if server_state.accumulator is not None else np.zeros_like(g)
    if momentum.shape != g.shape or accumulator.shape != g.shape:
        raise ShapeMismatchError(f"server state shape {accumulator.shape} does not match model {g.shape}")

    pseudo_grad = np.zeros_like(g)
    for w, u in zip(weights, ordered):
        pseudo_grad += w * (u.params.vector - g)

    momentum = beta1 * momentum + (1.0 - beta1) * pseudo_grad
    accumulator = accumulator + pseudo_grad ** 2
    new_global = g + lr * momentum / (np.sqrt(accumulator) + tau)
    return AdagradState(momentum=momentum, accumulator=accumulator), global_params.with_vector(new_global)


# 학습 루프가 사용하는 집계기 인터페이스. 상태가 있는 집계기(FedAdagrad)도 같은 모양으로 호출한다.
class Aggregator(Protocol):
    name: str

    def aggregate(self, global_params: ModelParams, updates: Sequence[ClientUpdate]) -> ModelParams:
        ...


class FedAvgAggregator:
    name = "fedavg"

    def aggregate(self, global_params: ModelParams, updates: Sequence[ClientUpdate]) -> ModelParams:
        return aggregate_fedavg(global_params, updates)


class FedNovaAggregator:
    name = "fednova"

    def aggregate(self, global_params: ModelParams, updates: Sequence[ClientUpdate]) -> ModelParams:
        return aggregate_fednova(global_params, updates)


class FedAdagradAggregator:
    name = "fedadagrad"

    def __init__(self, lr: float = 0.1, beta1: float = 0.0, tau: float = 1e-3) -> None:
        self.lr = lr
        self.beta1 = beta1
        self.tau = tau
        self.state = AdagradState()

    def aggregate(self, global_params: ModelParams, updates: Sequence[ClientUpdate]) -> ModelParams:
        self.state, new_global = aggregate_fedadagrad(
            self.state, global_params, updates, self.lr, self.beta1, self.tau
        )
        return new_global


# 집계 방식 이름 → 인스턴스 팩토리.
# 새 집계기를 추가할 때는 이 딕셔너리에 항목을 추가하면 된다.
_REGISTRY: Dict[str, Callable[[AggregatorConfig], Aggregator]] = {
    "fedavg": lambda cfg: FedAvgAggregator(),
    "fednova": lambda cfg: FedNovaAggregator(),
    "fedadagrad": lambda cfg: FedAdagradAggregator(
        lr=cfg.lr, beta1=cfg.beta1, tau=cfg.tau
    ) if isinstance(cfg, FedAdagradConfig) else FedAdagradAggregator(),
}


def make_aggregator(cfg: AggregatorConfig) -> Aggregator:
    # 매번 새 인스턴스를 만든다. FedAdagrad의 서버 상태가 실행 간에 공유되지 않는다.
    if cfg.kind not in _REGISTRY:
        raise ValueError(f"Unknown aggregator: {cfg.kind}. Available: {', '.join(list_aggregators())}")
    return _REGISTRY[cfg.kind](cfg)


def list_aggregators() -> list[str]:
    return list(_REGISTRY.keys())
