from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from engine.data.shard import ClientShard, Dataset
from engine.errors import EmptyDatasetError, EmptyShardError, InvalidParamError, ShapeMismatchError
from engine.model.spec import MlpSpec

# 로컬 학습 패스 수. 정수 E 또는 (0, 1) 구간의 분수 (스윕 모드 전용: 데이터 일부를 한 번만 학습).
Passes = float


# 모델 파라미터는 w1, b1, w2, b2를 순서대로 이어붙인 1차원 벡터 하나로 보관한다.
# 서버 집계(FedAvg/FedNova/FedAdagrad)가 벡터 연산만으로 끝나도록 하기 위함이다.
# 배열은 읽기 전용이며, 모든 연산은 새 ModelParams를 반환한다.
@dataclass(frozen=True)
class ModelParams:
    spec: MlpSpec
    vector: np.ndarray

    def __post_init__(self) -> None:
        vector = np.array(self.vector, dtype=np.float64, copy=True).reshape(-1)
        if vector.shape[0] != self.spec.param_count:
            raise ShapeMismatchError(
                f"expected {self.spec.param_count} parameters for {self.spec}, got {vector.shape[0]}"
            )
        if not np.all(np.isfinite(vector)):
            raise InvalidParamError("model parameters must be finite")
        vector.flags.writeable = False
        object.__setattr__(self, "vector", vector)

    @property
    def size(self) -> int:
        return int(self.vector.shape[0])

    def layers(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return _unpack(self.spec, self.vector)

    @classmethod
    def from_layers(
        cls, spec: MlpSpec, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: np.ndarray
    ) -> "ModelParams":
        return cls(spec, np.concatenate([w1.ravel(), b1.ravel(), w2.ravel(), b2.ravel()]))

    def with_vector(self, vector: np.ndarray) -> "ModelParams":
        return ModelParams(self.spec, vector)


def _unpack(spec: MlpSpec, vector: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    out = []
    offset = 0
    for shape in spec.layer_shapes:
        count = int(np.prod(shape))
        out.append(vector[offset:offset + count].reshape(shape))
        offset += count
    w1, b1, w2, b2 = out
    return w1, b1, w2, b2


def init_params(spec: MlpSpec, seed: int) -> ModelParams:
    # 가중치는 U(−1/√fan_in, 1/√fan_in), bias는 0으로 초기화한다. seed가 같으면 비트 단위로 같다.
    rng = np.random.default_rng(seed)
    bound1 = 1.0 / math.sqrt(spec.input_dim)
    bound2 = 1.0 / math.sqrt(spec.hidden_dim)
    w1 = rng.uniform(-bound1, bound1, size=(spec.input_dim, spec.hidden_dim))
    w2 = rng.uniform(-bound2, bound2, size=(spec.hidden_dim, spec.num_classes))
    return ModelParams.from_layers(
        spec, w1, np.zeros(spec.hidden_dim), w2, np.zeros(spec.num_classes)
    )


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _forward(spec: MlpSpec, vector: np.ndarray, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    w1, b1, w2, b2 = _unpack(spec, vector)
    hidden = features @ w1 + b1
    activated = np.maximum(hidden, 0.0)
    logits = activated @ w2 + b2
    return hidden, activated, logits


def forward(params: ModelParams, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # (은닉층 pre-activation, ReLU 출력, logits)
    return _forward(params.spec, params.vector, features)


def predict_proba(params: ModelParams, features: np.ndarray) -> np.ndarray:
    return softmax(forward(params, features)[2])


def loss_and_gradient(params: ModelParams, features: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    """미니배치 평균 softmax cross-entropy와 파라미터 벡터 형태의 기울기."""
    return _loss_and_gradient(params.spec, params.vector, features, labels)


def _loss_and_gradient(
    spec: MlpSpec, vector: np.ndarray, features: np.ndarray, labels: np.ndarray
) -> Tuple[float, np.ndarray]:
    _, _, w2, _ = _unpack(spec, vector)
    batch = features.shape[0]
    hidden, activated, logits = _forward(spec, vector, features)

    # log-sum-exp 이동으로 큰 logits에서도 안정적으로 계산한다
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(log_norm - shifted[np.arange(batch), labels]))

    d_logits = softmax(logits)
    d_logits[np.arange(batch), labels] -= 1.0
    d_logits /= batch

    grad_w2 = activated.T @ d_logits
    grad_b2 = d_logits.sum(axis=0)
    d_hidden = (d_logits @ w2.T) * (hidden > 0)
    grad_w1 = features.T @ d_hidden
    grad_b1 = d_hidden.sum(axis=0)
    grad = np.concatenate([grad_w1.ravel(), grad_b1.ravel(), grad_w2.ravel(), grad_b2.ravel()])
    return loss, grad


def validate_passes(e: Passes) -> None:
    if not e > 0:
        raise InvalidParamError(f"E must be > 0, got {e}")
    if e >= 1 and float(e) != int(e):
        raise InvalidParamError(f"E must be a whole number or a fraction in (0, 1), got {e}")


def train_local(
    params: ModelParams,
    data: ClientShard,
    e: Passes,
    batch: int,
    lr: float,
    momentum: float,
    seed: int,
) -> Tuple[ModelParams, int]:
    """참가자 한 명의 로컬 학습. (갱신된 파라미터, 미니배치 스텝 수)를 반환한다.

    매 패스마다 seed로 정해진 순서로 섞은 뒤 모멘텀 SGD를 돌린다.
    E가 (0, 1)이면 seed로 뽑은 round(E·n)개(최소 1개)만 한 번 학습한다.
    스텝 수는 FedNova 정규화에 쓰인다.
    """
    if data.size < 1:
        raise EmptyShardError(f"client {data.client_id} has no data points")
    if batch < 1:
        raise InvalidParamError(f"batch size must be >= 1, got {batch}")
    if lr < 0 or not 0 <= momentum < 1:
        raise InvalidParamError(f"invalid SGD settings lr={lr} momentum={momentum}")
    validate_passes(e)

    rng = np.random.default_rng(seed)
    features, labels = data.features, data.labels
    if e < 1:
        keep = max(1, int(round(e * data.size)))
        subset = np.sort(rng.choice(data.size, size=keep, replace=False))
        features, labels = features[subset], labels[subset]
        epochs = 1
    else:
        epochs = int(e)

    n = labels.shape[0]
    weights = params.vector.copy()
    velocity = np.zeros_like(weights)
    steps = 0
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            _, grad = _loss_and_gradient(params.spec, weights, features[idx], labels[idx])
            velocity = momentum * velocity + grad
            weights = weights - lr * velocity
            steps += 1
    return params.with_vector(weights), steps


def evaluate(params: ModelParams, data: Dataset) -> float:
    # argmax 예측이 맞은 비율
    if data.size < 1:
        raise EmptyDatasetError("cannot evaluate on an empty dataset")
    logits = forward(params, data.features)[2]
    correct = int(np.count_nonzero(np.argmax(logits, axis=1) == data.labels))
    return correct / data.size
