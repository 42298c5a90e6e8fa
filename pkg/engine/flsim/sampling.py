from __future__ import annotations

import zlib
from typing import Tuple

import numpy as np

from engine.errors import MTooLargeError, NonPositiveError


# 루트 seed 하나에서 이름 붙은 독립 난수 스트림을 만든다.
#   stream(seed, "init")                      → 모델 초기화
#   stream(seed, "sampling", r)               → 라운드 r의 참가자 선택
#   stream(seed, "shuffle", r, client_id)     → 라운드 r, 클라이언트별 로컬 셔플
# 키가 다르면 스트림이 독립이므로 M을 바꿔도 다른 스트림의 난수열은 달라지지 않는다.
def _seed_sequence(root_seed: int, name: str, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=root_seed, spawn_key=(zlib.crc32(name.encode("utf-8")), *keys))


def stream(root_seed: int, name: str, *keys: int) -> np.random.Generator:
    return np.random.default_rng(_seed_sequence(root_seed, name, *keys))


def stream_seed(root_seed: int, name: str, *keys: int) -> int:
    return int(_seed_sequence(root_seed, name, *keys).generate_state(1, dtype=np.uint64)[0])


def sample_participants(k_clients: int, m: int, rng: np.random.Generator) -> Tuple[int, ...]:
    # K명 중 M명을 비복원 균등 추출한다. 결과는 오름차순 client id.
    if m < 1:
        raise NonPositiveError(f"M must be >= 1, got {m}")
    if m > k_clients:
        raise MTooLargeError(f"cannot select M={m} participants from K={k_clients} clients")
    chosen = rng.choice(k_clients, size=m, replace=False)
    return tuple(sorted(int(c) for c in chosen))
