from __future__ import annotations

import tomllib
from pathlib import Path
from typing import Any, Dict, Optional

from cli.settings import get_settings
from engine.errors import ConfigError
from engine.experiment.config import ExperimentConfig, build_experiment_config


def read_toml(path: Path | str) -> Dict[str, Any]:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: malformed TOML: {exc}") from exc


def load_experiment(
    path: Optional[Path | str],
    *,
    out: Optional[Path] = None,
    seeds: Optional[int] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """설정 파일을 읽고 CLI 옵션을 병합해 검증한다. path가 None이면 모든 기본값을 쓴다.

    출력 디렉터리 우선순위: --out > FEDTUNE_OUTPUT_DIR > [experiment] output_dir
    """
    overrides: Dict[str, Any] = dict(extra or {})
    output_dir = out or get_settings().output_dir
    if output_dir is not None:
        overrides.setdefault("experiment", {})["output_dir"] = str(output_dir)
    if seeds is not None:
        overrides.setdefault("experiment", {})["repetitions"] = seeds
    raw = read_toml(path) if path is not None else {}
    return build_experiment_config(raw, overrides)
