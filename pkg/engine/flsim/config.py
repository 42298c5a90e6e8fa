from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from engine.core.preferences import Preferences, validate_preferences
from engine.core.types import CostConstants
from engine.data.spec import DatasetSpec, SyntheticDatasetSpec
from engine.model.mlp import validate_passes
from engine.model.spec import MlpSpec, cost_counts
from engine.overhead.accounting import model_cost_constants
from engine.overhead.presets import preset_cost_constants
from engine.tuner.config import TunerConfig


class FedAvgConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["fedavg"] = "fedavg"


class FedNovaConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["fednova"] = "fednova"


class FedAdagradConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["fedadagrad"] = "fedadagrad"
    lr: float = Field(default=0.1, gt=0)
    beta1: float = Field(default=0.0, ge=0, lt=1)
    tau: float = Field(default=1e-3, gt=0)


AggregatorConfig = Annotated[
    Union[FedAvgConfig, FedNovaConfig, FedAdagradConfig], Field(discriminator="kind")
]


class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    # 입력 차원과 클래스 수는 데이터셋에서 정해진다
    hidden_dim: int = Field(default=200, ge=1)

    def mlp_spec(self, input_dim: int, num_classes: int) -> MlpSpec:
        return MlpSpec(input_dim=input_dim, hidden_dim=self.hidden_dim, num_classes=num_classes)


class TrainingConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    m: int = Field(default=20, ge=1)               # 초기 참가자 수 M
    e: float = Field(default=20, gt=0)             # 초기 로컬 패스 수 E (스윕에서는 0.5 같은 분수 허용)
    lr: float = Field(default=0.01, ge=0)
    momentum: float = Field(default=0.9, ge=0, lt=1)
    batch_size: int = Field(default=10, ge=1)
    target_accuracy: float = Field(default=0.85, ge=0, le=1)
    max_rounds: int = Field(default=3000, ge=1)

    @field_validator("e")
    @classmethod
    def _validate_e(cls, value: float) -> float:
        validate_passes(value)
        return value


class PreferencesConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha: float = 0.25
    beta: float = 0.25
    gamma: float = 0.25
    delta: float = 0.25

    @model_validator(mode="after")
    def _validate_sum(self) -> "PreferencesConfig":
        self.to_preferences()
        return self

    def to_preferences(self) -> Preferences:
        return validate_preferences(self.alpha, self.beta, self.gamma, self.delta)

    @classmethod
    def from_preferences(cls, prefs: Preferences) -> "PreferencesConfig":
        return cls(alpha=prefs.alpha, beta=prefs.beta, gamma=prefs.gamma, delta=prefs.delta)


class CostConfig(BaseModel):
    """오버헤드 계수 C1~C4의 출처.

    아무것도 지정하지 않으면 MLP 자신의 FLOPs/파라미터 수를 쓴다.
    preset을 지정하면 측정 연구 모델(ResNet 등)의 값을, c1~c4를 모두 지정하면 그 값을 쓴다.
    scale은 최종 계수 전체에 곱해진다.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    preset: Optional[str] = None
    c1: Optional[float] = Field(default=None, gt=0)
    c2: Optional[float] = Field(default=None, gt=0)
    c3: Optional[float] = Field(default=None, gt=0)
    c4: Optional[float] = Field(default=None, gt=0)
    scale: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _validate_source(self) -> "CostConfig":
        explicit = [self.c1, self.c2, self.c3, self.c4]
        if any(v is not None for v in explicit):
            if not all(v is not None for v in explicit):
                raise ValueError("c1, c2, c3 and c4 must be given together")
            if self.preset is not None:
                raise ValueError("give either a cost preset or explicit c1..c4, not both")
        if self.preset is not None:
            preset_cost_constants(self.preset)
        return self

    def resolve(self, spec: MlpSpec) -> CostConstants:
        if self.c1 is not None:
            constants = CostConstants(self.c1, self.c2, self.c3, self.c4)
        elif self.preset is not None:
            constants = preset_cost_constants(self.preset)
        else:
            constants = model_cost_constants(*cost_counts(spec))
        return constants if self.scale == 1.0 else constants.scaled(self.scale)


class RunConfig(BaseModel):
    """학습 실행 한 번의 전체 설정. 같은 RunConfig(seed 포함)는 같은 트레이스를 만든다."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    dataset: DatasetSpec = Field(default_factory=SyntheticDatasetSpec)
    model: ModelConfig = Field(default_factory=ModelConfig)
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    aggregator: AggregatorConfig = Field(default_factory=FedAvgConfig)
    tuner: Optional[TunerConfig] = None
    preferences: Optional[PreferencesConfig] = None
    cost: CostConfig = Field(default_factory=CostConfig)
    seed: int = 0

    @model_validator(mode="after")
    def _validate_tuner(self) -> "RunConfig":
        if self.tuner is None:
            return self
        if self.preferences is None:
            raise ValueError("tuner enabled but no preferences given")
        e = self.training.e
        if e != int(e):
            raise ValueError(f"tuner needs a whole-number E, got {e}")
        t = self.tuner
        if not t.m_min <= self.training.m or (t.m_max is not None and self.training.m > t.m_max):
            raise ValueError(f"initial M={self.training.m} outside tuner bounds [{t.m_min}, {t.m_max}]")
        if not t.e_min <= int(e) <= t.e_max:
            raise ValueError(f"initial E={int(e)} outside tuner bounds [{t.e_min}, {t.e_max}]")
        return self
