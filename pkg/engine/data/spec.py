from __future__ import annotations

from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field


class SyntheticDatasetSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    source: Literal["synthetic"] = "synthetic"
    k_clients: int = Field(default=200, ge=1)
    num_classes: int = Field(default=10, ge=1)
    input_dim: int = Field(default=32, ge=1)
    mean_shard_size: int = Field(default=30, ge=1)
    size_skew: float = Field(default=0.5, ge=0)      # log-normal σ, 0이면 모든 샤드 크기가 같다
    label_alpha: float = Field(default=0.5, gt=0)    # 대칭 Dirichlet 농도, 작을수록 라벨 편중이 심하다
    noise: float = Field(default=0.16, ge=0)         # 클래스 평균 주변 등방 가우시안 잡음의 표준편차
    # 클래스 평균 벡터의 크기. 입력이 작을수록 SGD가 천천히 배워서 정확도가 수십 라운드에 걸쳐 오른다.
    # 평균이 one-hot 꼴이면 분리도는 class_scale / noise 비율로 정해진다 (기본 3.125, 베이즈 정확도 약 0.92).
    class_scale: float = Field(default=0.5, gt=0)
    test_size: int = Field(default=2000, ge=1)
    # 데이터셋 seed는 학습 seed와 분리되어 있어 반복 실행들이 같은 데이터를 공유한다
    seed: int = 0


class CsvDatasetSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    source: Literal["csv"] = "csv"
    train_path: Path
    test_path: Path
    client_column: str = "client"
    label_column: str = "label"


DatasetSpec = Annotated[Union[SyntheticDatasetSpec, CsvDatasetSpec], Field(discriminator="source")]
