from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from engine.errors import EmptyShardError, SchemaMismatchError


# 특징 행렬과 정수 라벨의 묶음. 테스트 세트와 클라이언트 샤드가 공통으로 사용한다.
# 생성 후 배열은 읽기 전용으로 고정된다 (여러 스레드/프로세스에서 공유해도 안전).
@dataclass(frozen=True)
class Dataset:
    features: np.ndarray   # (n, input_dim) float64
    labels: np.ndarray     # (n,) int64, [0, num_classes)

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=np.float64, copy=True)
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if features.ndim != 2 or labels.ndim != 1 or features.shape[0] != labels.shape[0]:
            raise SchemaMismatchError(
                f"features {features.shape} and labels {labels.shape} do not line up"
            )
        features.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return int(self.labels.shape[0])

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class ClientShard(Dataset):
    client_id: int = 0
    name: Optional[str] = field(default=None)   # CSV에서 읽은 원래 클라이언트 키

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.size < 1:
            raise EmptyShardError(f"client {self.name or self.client_id} has no data points")


@dataclass(frozen=True)
class FederatedDataset:
    shards: Tuple[ClientShard, ...]
    test_set: Dataset
    num_classes: int
    input_dim: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "shards", tuple(self.shards))
        for shard in self.shards:
            if shard.features.shape[1] != self.input_dim:
                raise SchemaMismatchError(
                    f"client {shard.client_id} has {shard.features.shape[1]} features, expected {self.input_dim}"
                )
        if self.test_set.size and self.test_set.features.shape[1] != self.input_dim:
            raise SchemaMismatchError(
                f"test set has {self.test_set.features.shape[1]} features, expected {self.input_dim}"
            )

    @property
    def k_clients(self) -> int:
        return len(self.shards)

    @property
    def total_size(self) -> int:
        return sum(shard.size for shard in self.shards)

    def shard_sizes(self) -> Tuple[int, ...]:
        return tuple(shard.size for shard in self.shards)
