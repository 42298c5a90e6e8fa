from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Tuple

from engine.errors import NonPositiveError


# 오버헤드 4종의 이름. 선호도 벡터와 η/ζ 파라미터가 모두 이 순서를 따른다.
#   comp_time  (t) : 라운드별 가장 느린 참가자의 FLOPs 합 (CompT)
#   trans_time (q) : 라운드당 상수 C2의 합 (TransT)
#   comp_load  (z) : 모든 참가자의 FLOPs 합 (CompL)
#   trans_load (v) : 참가자 수 × C4의 합 (TransL)
OVERHEAD_FIELDS: Tuple[str, str, str, str] = ("comp_time", "trans_time", "comp_load", "trans_load")


@dataclass(frozen=True)
class OverheadVector:
    comp_time: float = 0.0    # t, CompT
    trans_time: float = 0.0   # q, TransT
    comp_load: float = 0.0    # z, CompL
    trans_load: float = 0.0   # v, TransL

    def __post_init__(self) -> None:
        for name, value in zip(OVERHEAD_FIELDS, self.as_tuple()):
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"overhead component {name} must be finite and >= 0, got {value}")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.comp_time, self.trans_time, self.comp_load, self.trans_load)

    def __iter__(self) -> Iterator[float]:
        return iter(self.as_tuple())

    def __add__(self, other: "OverheadVector") -> "OverheadVector":
        return OverheadVector(*(a + b for a, b in zip(self, other)))

    def scaled(self, factor: float) -> "OverheadVector":
        return OverheadVector(*(a * factor for a in self))

    def dominates(self, other: "OverheadVector") -> bool:
        # 모든 성분이 other 이상인지 (누적 단조성 검사용)
        return all(a >= b for a, b in zip(self, other))

    def to_dict(self) -> dict:
        return dict(zip(OVERHEAD_FIELDS, self.as_tuple()))

    @classmethod
    def from_dict(cls, data: dict) -> "OverheadVector":
        return cls(*(float(data[name]) for name in OVERHEAD_FIELDS))


ZERO_OVERHEAD = OverheadVector()


@dataclass(frozen=True)
class HyperParams:
    m: int   # 라운드당 참가자 수 M
    e: int   # 라운드당 로컬 학습 패스 수 E

    def __post_init__(self) -> None:
        if self.m < 1 or self.e < 1:
            raise NonPositiveError(f"M and E must be >= 1, got M={self.m} E={self.e}")


@dataclass(frozen=True)
class CostConstants:
    c1: float   # CompT 계수 (입력 하나당 FLOPs)
    c2: float   # TransT 계수 (파라미터 수)
    c3: float   # CompL 계수 (입력 하나당 FLOPs)
    c4: float   # TransL 계수 (파라미터 수)

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "c3", "c4"):
            value = getattr(self, name)
            if not value > 0:
                raise NonPositiveError(f"cost constant {name} must be > 0, got {value}")

    def scaled(self, factor: float) -> "CostConstants":
        return CostConstants(self.c1 * factor, self.c2 * factor, self.c3 * factor, self.c4 * factor)
