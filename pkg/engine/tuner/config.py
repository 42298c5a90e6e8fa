from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TunerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    epsilon: float = Field(default=0.01, gt=0)        # 활성화 조건: 정확도 향상폭 ε
    penalty_d: float = Field(default=10.0, ge=1.0)    # 나쁜 결정에 대한 벌점 배수 D
    m_min: int = Field(default=1, ge=1)
    e_min: int = Field(default=1, ge=1)
    m_max: Optional[int] = Field(default=None, ge=1)  # None이면 실행 시 전체 클라이언트 수 K로 묶인다
    e_max: int = Field(default=64, ge=1)
    # accuracy_gain: 구간 오버헤드를 그 구간의 정확도 향상폭으로 나눈다 (정확도 1당 비용).
    # none: 누적 차이를 그대로 쓴다. TransT처럼 라운드 수에만 비례하는 항은 구간끼리 자주 같아진다.
    interval_normalization: Literal["accuracy_gain", "none"] = "accuracy_gain"

    @model_validator(mode="after")
    def _validate_bounds(self) -> "TunerConfig":
        if self.m_max is not None and self.m_max < self.m_min:
            raise ValueError(f"m_max ({self.m_max}) must be >= m_min ({self.m_min})")
        if self.e_max < self.e_min:
            raise ValueError(f"e_max ({self.e_max}) must be >= e_min ({self.e_min})")
        return self

    def bound_to_population(self, k_clients: int) -> "TunerConfig":
        # M 상한을 클라이언트 수 K 이하로 고정한 사본을 반환한다
        m_max = k_clients if self.m_max is None else min(self.m_max, k_clients)
        return self.model_copy(update={"m_max": max(m_max, self.m_min)})
