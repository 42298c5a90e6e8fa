from __future__ import annotations

import logging

import numpy as np

from engine.data.shard import ClientShard, Dataset, FederatedDataset
from engine.data.spec import SyntheticDatasetSpec
from engine.errors import InvalidParamError

logger = logging.getLogger(__name__)


def _class_means(rng: np.random.Generator, num_classes: int, input_dim: int, scale: float) -> np.ndarray:
    # 차원이 충분하면 클래스마다 서로 다른 축 위의 one-hot 벡터(× scale)를 평균으로 쓴다.
    # 차원이 클래스 수보다 작으면 무작위 방향의 단위 벡터(× scale)를 쓴다.
    if input_dim >= num_classes:
        return scale * np.eye(num_classes, input_dim)
    directions = rng.standard_normal((num_classes, input_dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return scale * directions


def _apportion(n: int, proportions: np.ndarray) -> np.ndarray:
    # 최대 잉여(largest remainder) 방식으로 n개를 비율대로 나눈다.
    # 경험적 라벨 분포가 뽑힌 혼합 비율에서 클래스당 1/n 이상 벗어나지 않는다.
    raw = n * proportions
    counts = np.floor(raw).astype(np.int64)
    remainder = n - int(counts.sum())
    if remainder > 0:
        order = np.argsort(-(raw - counts), kind="stable")
        counts[order[:remainder]] += 1
    return counts


def _validate(
    k_clients: int, num_classes: int, input_dim: int, mean_shard_size: int,
    size_skew: float, label_alpha: float, noise: float, test_size: int,
) -> None:
    problems = []
    if k_clients < 1:
        problems.append(f"k_clients={k_clients} (must be >= 1)")
    if num_classes < 1:
        problems.append(f"num_classes={num_classes} (must be >= 1)")
    if input_dim < 1:
        problems.append(f"input_dim={input_dim} (must be >= 1)")
    if mean_shard_size < 1:
        problems.append(f"mean_shard_size={mean_shard_size} (must be >= 1)")
    if size_skew < 0:
        problems.append(f"size_skew={size_skew} (must be >= 0)")
    if not label_alpha > 0:
        problems.append(f"label_alpha={label_alpha} (must be > 0)")
    if noise < 0:
        problems.append(f"noise={noise} (must be >= 0)")
    if test_size < 1:
        problems.append(f"test_size={test_size} (must be >= 1)")
    if problems:
        raise InvalidParamError("invalid synthetic dataset parameters: " + ", ".join(problems))


def generate_synthetic(
    k_clients: int,
    num_classes: int,
    input_dim: int,
    mean_shard_size: int,
    size_skew: float,
    label_alpha: float,
    noise: float,
    seed: int,
    *,
    class_scale: float = 0.5,
    test_size: int = 2000,
) -> FederatedDataset:
    """클래스 조건부 가우시안 특징으로 non-IID 연합 데이터셋을 만든다.

    - 샤드 크기: 평균 보존 log-normal, exp(σ·z − σ²/2)·mean을 반올림 (최소 1)
    - 라벨 혼합: 클라이언트마다 대칭 Dirichlet(label_alpha)에서 비율을 뽑는다
    - 특징: 클래스 평균 + noise · N(0, I)
    - 테스트 세트: 같은 혼합에서 균등 라벨로 test_size개 (학습 샤드와 별도로 생성)

    seed가 같으면 모든 배열이 비트 단위로 같다.
    """
    _validate(k_clients, num_classes, input_dim, mean_shard_size, size_skew, label_alpha, noise, test_size)
    if not class_scale > 0:
        raise InvalidParamError(f"class_scale must be > 0, got {class_scale}")

    means_seq, sizes_seq, labels_seq, features_seq, test_seq = np.random.SeedSequence(seed).spawn(5)
    means = _class_means(np.random.default_rng(means_seq), num_classes, input_dim, class_scale)

    sizes_rng = np.random.default_rng(sizes_seq)
    if size_skew == 0:
        sizes = np.full(k_clients, mean_shard_size, dtype=np.int64)
    else:
        z = sizes_rng.standard_normal(k_clients)
        scale = np.exp(size_skew * z - size_skew ** 2 / 2.0)
        sizes = np.maximum(1, np.rint(mean_shard_size * scale)).astype(np.int64)

    labels_rng = np.random.default_rng(labels_seq)
    features_rng = np.random.default_rng(features_seq)
    shards = []
    for client_id, n_k in enumerate(sizes.tolist()):
        mixture = labels_rng.dirichlet(np.full(num_classes, label_alpha))
        counts = _apportion(n_k, mixture)
        labels = labels_rng.permutation(np.repeat(np.arange(num_classes), counts))
        features = means[labels] + noise * features_rng.standard_normal((n_k, input_dim))
        shards.append(ClientShard(features=features, labels=labels, client_id=client_id))

    test_rng = np.random.default_rng(test_seq)
    test_labels = test_rng.integers(0, num_classes, size=test_size)
    test_features = means[test_labels] + noise * test_rng.standard_normal((test_size, input_dim))

    dataset = FederatedDataset(
        shards=tuple(shards),
        test_set=Dataset(features=test_features, labels=test_labels),
        num_classes=num_classes,
        input_dim=input_dim,
    )
    logger.debug(
        "data.synthetic k=%s n=%s classes=%s dim=%s seed=%s",
        k_clients, dataset.total_size, num_classes, input_dim, seed,
    )
    return dataset


def generate_from_spec(spec: SyntheticDatasetSpec) -> FederatedDataset:
    return generate_synthetic(
        k_clients=spec.k_clients,
        num_classes=spec.num_classes,
        input_dim=spec.input_dim,
        mean_shard_size=spec.mean_shard_size,
        size_skew=spec.size_skew,
        label_alpha=spec.label_alpha,
        noise=spec.noise,
        seed=spec.seed,
        class_scale=spec.class_scale,
        test_size=spec.test_size,
    )
