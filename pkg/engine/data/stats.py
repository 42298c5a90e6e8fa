from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from engine.data.shard import FederatedDataset


@dataclass(frozen=True)
class ShardStats:
    k: int                            # 클라이언트 수 K
    n: int                            # 학습 데이터 총 개수 n = Σ n_k
    min_size: int
    median_size: float
    max_size: int
    class_counts: Tuple[int, ...]     # 학습 샤드 전체의 클래스별 개수
    test_size: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "n": self.n,
            "min_size": self.min_size,
            "median_size": self.median_size,
            "max_size": self.max_size,
            "class_counts": list(self.class_counts),
            "test_size": self.test_size,
        }


def shard_stats(d: FederatedDataset) -> ShardStats:
    sizes = np.array(d.shard_sizes(), dtype=np.int64)
    counts = np.zeros(d.num_classes, dtype=np.int64)
    for shard in d.shards:
        counts += np.bincount(shard.labels, minlength=d.num_classes)[: d.num_classes]
    return ShardStats(
        k=d.k_clients,
        n=int(sizes.sum()),
        min_size=int(sizes.min()) if sizes.size else 0,
        median_size=float(np.median(sizes)) if sizes.size else 0.0,
        max_size=int(sizes.max()) if sizes.size else 0,
        class_counts=tuple(int(c) for c in counts),
        test_size=d.test_set.size,
    )
