from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, Tuple

from engine.core.types import ZERO_OVERHEAD, HyperParams, OverheadVector


# 오버헤드 4종(t, q, z, v)별 비율 파라미터. η(M 방향)와 ζ(E 방향)에 각각 하나씩 쓰인다.
# 모두 1.0에서 시작하므로 첫 결정은 선호도 가중 상대 변화량만으로 이루어진다.
@dataclass(frozen=True)
class RateParams:
    t: float = 1.0
    q: float = 1.0
    z: float = 1.0
    v: float = 1.0

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.t, self.q, self.z, self.v)

    def __iter__(self) -> Iterator[float]:
        return iter(self.as_tuple())


# 튜너가 활성화될 때마다 남기는 기록.
# interval_overhead는 직전 활성화 이후 누적된 오버헤드이며, 이 구간은 hyper 하나로만 학습되었다.
@dataclass(frozen=True)
class Checkpoint:
    hyper: HyperParams
    interval_overhead: OverheadVector
    accuracy: float
    cumulative_overhead: OverheadVector


@dataclass(frozen=True)
class TunerState:
    s_cur: HyperParams
    s_prv: HyperParams
    eta: RateParams = field(default_factory=RateParams)
    zeta: RateParams = field(default_factory=RateParams)
    history: Tuple[Checkpoint, ...] = ()          # (prvprv, prv, cur) 순서, 최대 3개
    last_activation_accuracy: float = 0.0
    last_cumulative: OverheadVector = ZERO_OVERHEAD

    @classmethod
    def initial(cls, hyper: HyperParams) -> "TunerState":
        return cls(s_cur=hyper, s_prv=hyper)

    @property
    def is_warm(self) -> bool:
        return len(self.history) >= 3

    def to_dict(self) -> Dict[str, Any]:
        # 트레이스 로그에 남기는 감사용 스냅샷
        return {
            "eta": list(self.eta.as_tuple()),
            "zeta": list(self.zeta.as_tuple()),
            "s_cur": [self.s_cur.m, self.s_cur.e],
            "s_prv": [self.s_prv.m, self.s_prv.e],
            "history": [
                {
                    "m": cp.hyper.m,
                    "e": cp.hyper.e,
                    "accuracy": cp.accuracy,
                    "interval": cp.interval_overhead.to_dict(),
                }
                for cp in self.history
            ],
            "last_activation_accuracy": self.last_activation_accuracy,
        }


@dataclass(frozen=True)
class Decision:
    next: HyperParams
    delta_m_sign: int        # +1 / -1, 워밍업이면 0
    delta_e_sign: int
    penalized: bool
    i_value: float           # I(S_prv, S_cur), 직전 구간 대비 현재 구간 비교값
    delta_m: float = 0.0
    delta_e: float = 0.0
    warmup: bool = False
    state: Optional[TunerState] = None

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "next_m": self.next.m,
            "next_e": self.next.e,
            "delta_m_sign": self.delta_m_sign,
            "delta_e_sign": self.delta_e_sign,
            "delta_m": self.delta_m,
            "delta_e": self.delta_e,
            "penalized": self.penalized,
            "i_value": self.i_value,
            "warmup": self.warmup,
        }
        if self.state is not None:
            payload["state"] = self.state.to_dict()
        return payload
