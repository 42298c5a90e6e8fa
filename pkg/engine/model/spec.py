from __future__ import annotations

from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field


class MlpSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    input_dim: int = Field(ge=1)
    hidden_dim: int = Field(ge=1)
    num_classes: int = Field(ge=1)
    activation: Literal["relu"] = "relu"

    @property
    def layer_shapes(self) -> Tuple[Tuple[int, ...], ...]:
        # 평탄화 순서: w1, b1, w2, b2
        return (
            (self.input_dim, self.hidden_dim),
            (self.hidden_dim,),
            (self.hidden_dim, self.num_classes),
            (self.num_classes,),
        )

    @property
    def param_count(self) -> int:
        return (
            self.input_dim * self.hidden_dim
            + self.hidden_dim
            + self.hidden_dim * self.num_classes
            + self.num_classes
        )


def cost_counts(spec: MlpSpec) -> Tuple[float, float]:
    # (입력 하나당 FLOPs, 파라미터 수)
    # 곱셈-누산 1회 = 2 FLOPs, bias 덧셈과 활성화 함수는 세지 않는다.
    flops = 2 * (spec.input_dim * spec.hidden_dim + spec.hidden_dim * spec.num_classes)
    return float(flops), float(spec.param_count)
