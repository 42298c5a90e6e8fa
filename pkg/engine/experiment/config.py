from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from engine.core.preferences import Preferences
from engine.data.spec import DatasetSpec, SyntheticDatasetSpec
from engine.errors import ConfigError
from engine.experiment.grid import DEFAULT_PREFERENCE_GRID, preference_grid, sweep_grid
from engine.flsim.config import (
    AggregatorConfig,
    CostConfig,
    FedAvgConfig,
    ModelConfig,
    PreferencesConfig,
    RunConfig,
    TrainingConfig,
)
from engine.model.mlp import validate_passes
from engine.tuner.config import TunerConfig


class ExperimentSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "fedtune"
    repetitions: int = Field(default=3, ge=1)
    output_dir: Path = Path("runs")
    seed: int = 0     # 반복 i의 학습 seed는 seed + i

    @field_validator("name")
    @classmethod
    def _validate_name(cls, value: str) -> str:
        value = value.strip()
        if not value or any(ch in value for ch in "/\\"):
            raise ValueError(f"experiment name must be a non-empty file name, got {value!r}")
        return value


class TunerSection(TunerConfig):
    enabled: bool = False

    def to_tuner_config(self) -> TunerConfig:
        return TunerConfig(**self.model_dump(exclude={"enabled"}))


class SweepSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    m: List[int] = Field(default_factory=lambda: [1, 10, 20, 50])
    e: List[float] = Field(default_factory=lambda: [0.5, 1, 2, 4, 8])
    # 은닉층 폭 격자 (모델 복잡도 축). None이면 [model] hidden_dim 하나만 쓴다
    hidden_dim: Optional[List[int]] = None
    # --plot-data가 누적 오버헤드를 기록할 정확도 수준들
    accuracy_levels: List[float] = Field(default_factory=lambda: [0.5, 0.6, 0.7, 0.8, 0.85])

    @field_validator("m")
    @classmethod
    def _validate_m(cls, values: List[int]) -> List[int]:
        if not values:
            raise ValueError("sweep grid needs at least one M value")
        if any(v < 1 for v in values):
            raise ValueError(f"sweep M values must be >= 1, got {values}")
        return values

    @field_validator("e")
    @classmethod
    def _validate_e(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("sweep grid needs at least one E value")
        for v in values:
            validate_passes(v)
        return values

    @field_validator("hidden_dim")
    @classmethod
    def _validate_hidden_dim(cls, values: Optional[List[int]]) -> Optional[List[int]]:
        if values is None:
            return None
        if not values:
            raise ValueError("sweep hidden_dim needs at least one value when given")
        if any(v < 1 for v in values):
            raise ValueError(f"sweep hidden_dim values must be >= 1, got {values}")
        return values

    @field_validator("accuracy_levels")
    @classmethod
    def _validate_levels(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("accuracy_levels needs at least one value")
        if any(not 0.0 < v <= 1.0 for v in values):
            raise ValueError(f"accuracy levels must be in (0, 1], got {values}")
        return sorted(set(values))


class CompareSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    preferences: List[List[float]] = Field(default_factory=lambda: [list(row) for row in DEFAULT_PREFERENCE_GRID])

    @field_validator("preferences")
    @classmethod
    def _validate_grid(cls, rows: List[List[float]]) -> List[List[float]]:
        if not rows:
            raise ValueError("compare needs at least one preference row")
        preference_grid(rows)
        return rows

    def grid(self) -> List[Preferences]:
        return preference_grid(self.preferences)


class ExperimentConfig(BaseModel):
    """실험 설정 파일(TOML) 전체. 섹션 이름이 최상위 키다."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    dataset: DatasetSpec = Field(default_factory=SyntheticDatasetSpec)
    model: ModelConfig = Field(default_factory=ModelConfig)
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    aggregator: AggregatorConfig = Field(default_factory=FedAvgConfig)
    tuner: TunerSection = Field(default_factory=TunerSection)
    preferences: Optional[PreferencesConfig] = None
    cost: CostConfig = Field(default_factory=CostConfig)
    sweep: SweepSection = Field(default_factory=SweepSection)
    compare: CompareSection = Field(default_factory=CompareSection)

    @model_validator(mode="after")
    def _validate_run(self) -> "ExperimentConfig":
        # run 명령이 쓸 설정이 실제로 만들어지는지 미리 확인한다
        if self.tuner.enabled and self.preferences is None:
            raise ValueError("[tuner] enabled = true requires a [preferences] section")
        self.run_config(self.experiment.seed)
        return self

    def seeds(self) -> List[int]:
        return [self.experiment.seed + i for i in range(self.experiment.repetitions)]

    def run_config(
        self,
        seed: int,
        *,
        m: Optional[int] = None,
        e: Optional[float] = None,
        preferences: Optional[Preferences] = None,
        tuner: Optional[bool] = None,
        hidden_dim: Optional[int] = None,
    ) -> RunConfig:
        # tuner=None이면 [tuner] enabled를 따른다. preferences를 주면 [preferences]보다 우선한다.
        use_tuner = self.tuner.enabled if tuner is None else tuner
        prefs_cfg = (
            PreferencesConfig.from_preferences(preferences) if preferences is not None else self.preferences
        )
        training = self.training
        updates: Dict[str, Any] = {}
        if m is not None:
            updates["m"] = m
        if e is not None:
            updates["e"] = e
        if updates:
            training = TrainingConfig(**{**training.model_dump(), **updates})
        model = self.model
        if hidden_dim is not None:
            model = ModelConfig(**{**model.model_dump(), "hidden_dim": hidden_dim})
        return RunConfig(
            dataset=self.dataset,
            model=model,
            training=training,
            aggregator=self.aggregator,
            tuner=self.tuner.to_tuner_config() if use_tuner else None,
            preferences=prefs_cfg if use_tuner else None,
            cost=self.cost,
            seed=seed,
        )


def _deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err.get("loc", ())) or "<root>"
        parts.append(f"{loc}: {err.get('msg')}")
    return "; ".join(parts)


def build_experiment_config(raw: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    # CLI 옵션(--out, --seeds 등)을 원본 매핑에 병합한 뒤 한 번에 검증한다
    merged = _deep_merge(raw, overrides or {})
    try:
        return ExperimentConfig.model_validate(merged)
    except ValidationError as exc:
        raise ConfigError(f"invalid experiment config: {_describe(exc)}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc


# 실험 명령이 실행할 (설정, seed) 목록. 학습을 시작하기 전에 모두 만들어 두므로
# 격자 중간의 설정 오류도 출력 파일이 생기기 전에 드러난다.
@dataclass(frozen=True)
class PlannedRun:
    run: RunConfig
    seed: int
    m: int
    e: float
    preferences: Optional[Preferences] = None   # None이면 기준선(튜너 끔)


def _plan(build: Callable[[], List[PlannedRun]]) -> List[PlannedRun]:
    try:
        return build()
    except ValidationError as exc:
        raise ConfigError(f"invalid run configuration: {_describe(exc)}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid run configuration: {exc}") from exc


def plan_runs(cfg: ExperimentConfig) -> List[PlannedRun]:
    prefs = cfg.preferences.to_preferences() if cfg.tuner.enabled and cfg.preferences else None
    return _plan(lambda: [
        PlannedRun(cfg.run_config(seed), seed, cfg.training.m, cfg.training.e, prefs)
        for seed in cfg.seeds()
    ])


def sweep_widths(cfg: ExperimentConfig) -> List[int]:
    return list(cfg.sweep.hidden_dim) if cfg.sweep.hidden_dim is not None else [cfg.model.hidden_dim]


def plan_sweep(cfg: ExperimentConfig) -> List[PlannedRun]:
    # 스윕은 항상 튜너를 끈다. 순서: 은닉층 폭 → M → E → seed
    return _plan(lambda: [
        PlannedRun(cfg.run_config(seed, m=m, e=e, tuner=False, hidden_dim=width), seed, m, e)
        for width in sweep_widths(cfg)
        for m, e in sweep_grid(cfg.sweep.m, cfg.sweep.e)
        for seed in cfg.seeds()
    ])


def plan_compare(cfg: ExperimentConfig) -> Tuple[List[PlannedRun], List[PlannedRun]]:
    # (기준선 실행들, FedTune 실행들). FedTune 쪽 순서: 선호도 행 → seed
    grid = cfg.compare.grid()
    baseline = _plan(lambda: [
        PlannedRun(cfg.run_config(seed, tuner=False), seed, cfg.training.m, cfg.training.e)
        for seed in cfg.seeds()
    ])
    fedtune = _plan(lambda: [
        PlannedRun(cfg.run_config(seed, preferences=prefs, tuner=True), seed, cfg.training.m, cfg.training.e, prefs)
        for prefs in grid
        for seed in cfg.seeds()
    ])
    return baseline, fedtune
