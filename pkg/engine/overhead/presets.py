from __future__ import annotations

from typing import Dict, List

from engine.core.types import CostConstants
from engine.overhead.accounting import model_cost_constants

# 측정 연구에서 사용된 모델들의 입력당 FLOPs와 파라미터 수.
# 실제 모델을 학습하지 않고 오버헤드만 재계산(replay)할 때 [cost] preset으로 주입한다.
# EMNIST MLP(784→200→62)는 곱셈-누산 1회 = 2 FLOPs, bias 제외 규칙으로 센 값이다.
COST_PRESETS: Dict[str, Dict[str, float | str]] = {
    "resnet10": {
        "name": "ResNet-10",
        "flops_per_input": 12.5e6,
        "param_count": 79.7e3,
    },
    "resnet18": {
        "name": "ResNet-18",
        "flops_per_input": 26.8e6,
        "param_count": 177.2e3,
    },
    "resnet26": {
        "name": "ResNet-26",
        "flops_per_input": 41.1e6,
        "param_count": 274.6e3,
    },
    "resnet34": {
        "name": "ResNet-34",
        "flops_per_input": 60.1e6,
        "param_count": 515.6e3,
    },
    "emnist_mlp": {
        "name": "MLP 784-200-62",
        "flops_per_input": 338_400.0,
        "param_count": 169_462.0,
    },
}


def preset_cost_constants(preset_id: str) -> CostConstants:
    key = preset_id.strip().lower()
    if key not in COST_PRESETS:
        raise ValueError(f"Unknown cost preset: '{preset_id}'. Available: {', '.join(list_presets())}")
    item = COST_PRESETS[key]
    return model_cost_constants(float(item["flops_per_input"]), float(item["param_count"]))


def list_presets() -> List[str]:
    return sorted(COST_PRESETS)
