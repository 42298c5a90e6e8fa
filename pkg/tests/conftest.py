from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict

import pytest

from engine.data.synthetic import generate_synthetic
from engine.data.shard import FederatedDataset
from engine.flsim.config import ModelConfig, RunConfig, TrainingConfig

# 테스트 전체가 공유하는 작은 합성 과제: 몇 라운드면 끝난다
TINY_DATASET: Dict[str, Any] = {
    "source": "synthetic",
    "k_clients": 8,
    "num_classes": 3,
    "input_dim": 6,
    "mean_shard_size": 12,
    "size_skew": 0.3,
    "label_alpha": 0.5,
    "noise": 0.8,
    "class_scale": 2.0,
    "test_size": 200,
    "seed": 7,
}


@pytest.fixture(scope="session")
def tiny_dataset() -> FederatedDataset:
    spec = {k: v for k, v in TINY_DATASET.items() if k not in ("source", "seed", "test_size")}
    return generate_synthetic(**spec, seed=TINY_DATASET["seed"], test_size=TINY_DATASET["test_size"])


@pytest.fixture
def tiny_run_config() -> Callable[..., RunConfig]:
    def _make(**training: Any) -> RunConfig:
        base = dict(m=3, e=1, lr=0.05, batch_size=5, target_accuracy=1.0, max_rounds=4)
        base.update(training)
        return RunConfig(
            dataset=TINY_DATASET,
            model=ModelConfig(hidden_dim=8),
            training=TrainingConfig(**base),
        )
    return _make


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\") + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    return repr(value)


def toml_text(sections: Dict[str, Dict[str, Any]]) -> str:
    lines = []
    for name, body in sections.items():
        lines.append(f"[{name}]")
        lines.extend(f"{key} = {_toml_value(value)}" for key, value in body.items())
        lines.append("")
    return "\n".join(lines)


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """작은 합성 과제용 실험 설정 파일을 만든다. 섹션별로 덮어쓸 값을 넘긴다."""

    def _write(name: str = "exp.toml", **overrides: Dict[str, Any]) -> Path:
        sections: Dict[str, Dict[str, Any]] = {
            "experiment": {"name": "tiny", "repetitions": 1, "output_dir": str(tmp_path / "runs")},
            "dataset": dict(TINY_DATASET),
            "model": {"hidden_dim": 8},
            "training": {
                "m": 3, "e": 1, "lr": 0.05, "batch_size": 5,
                "target_accuracy": 0.0, "max_rounds": 5,
            },
        }
        for section, body in overrides.items():
            if section == "dataset" and body.get("source", "synthetic") != "synthetic":
                sections[section] = dict(body)
            else:
                sections.setdefault(section, {}).update(body)
        path = tmp_path / name
        path.write_text(toml_text(sections), encoding="utf-8")
        return path

    return _write
