from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Sequence, Tuple

import typer
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

from cli.container import get_dataset_provider
from engine.data.spec import SyntheticDatasetSpec
from engine.experiment.config import ExperimentConfig, PlannedRun
from engine.experiment.executor import execute_runs
from engine.flsim.aggregators import list_aggregators
from engine.flsim.config import ModelConfig, TrainingConfig
from engine.flsim.trace import TrainingTrace
from engine.overhead.presets import list_presets
from engine.tuner.config import TunerConfig

logger = logging.getLogger(__name__)

# 종료 코드가 CLI의 유일한 기계용 계약이다
EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_EXHAUSTED = 3

console = Console()
err_console = Console(stderr=True)


def _config_help() -> str:
    # 생략한 키가 실제로 쓰는 기본값을 모델 정의에서 그대로 읽어 보여 준다
    data, model, training, tuner = SyntheticDatasetSpec(), ModelConfig(), TrainingConfig(), TunerConfig()
    defaults = ", ".join([
        f"training.m={training.m}",
        f"training.e={training.e:g}",
        f"training.lr={training.lr:g}",
        f"training.batch_size={training.batch_size}",
        f"training.target_accuracy={training.target_accuracy:g}",
        f"training.max_rounds={training.max_rounds}",
        f"model.hidden_dim={model.hidden_dim}",
        f"dataset.k_clients={data.k_clients}",
        f"dataset.noise={data.noise:g}",
        f"dataset.class_scale={data.class_scale:g}",
        f"tuner.epsilon={tuner.epsilon:g}",
        f"tuner.penalty_d={tuner.penalty_d:g}",
    ])
    return (
        f"실험 설정 파일 (TOML). 생략한 키의 기본값: {defaults}. "
        f"aggregator.kind: {' | '.join(list_aggregators())}. "
        f"cost.preset: {' | '.join(list_presets())}"
    )


CONFIG_HELP = _config_help()
OUT_HELP = "출력 디렉터리 (FEDTUNE_OUTPUT_DIR, [experiment] output_dir보다 우선)"
SEEDS_HELP = "반복 실행 수 ([experiment] repetitions 대체)"
JOBS_HELP = "병렬 실행 프로세스 수"
PLOT_HELP = "그래프용 데이터 표를 함께 저장"


def fail(message: str, code: int) -> typer.Exit:
    err_console.print(f"[red]오류:[/red] {message}")
    return typer.Exit(code)


def run_dir(cfg: ExperimentConfig) -> Path:
    return Path(cfg.experiment.output_dir) / cfg.experiment.name


def execute(plans: Sequence[PlannedRun], jobs: int, label: str) -> List[Tuple[PlannedRun, TrainingTrace]]:
    """계획된 실행을 진행 막대와 함께 돌린다. 실패는 호출자가 종료 코드로 바꾼다."""
    total = len(plans)
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    ) as progress:
        task = progress.add_task(label, total=total)

        def _on_done(done: int, _total: int) -> None:
            progress.update(task, completed=done)

        return execute_runs(plans, provider=get_dataset_provider(), jobs=jobs, on_done=_on_done)


def exhausted(results: Sequence[Tuple[PlannedRun, TrainingTrace]]) -> int:
    return sum(1 for _, trace in results if trace.status == "exhausted_max_rounds")
