from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from cli.commands.common import CONFIG_HELP, EXIT_CONFIG, EXIT_UNEXPECTED, console, fail, run_dir
from cli.config import load_experiment
from cli.container import get_dataset_provider
from engine.data.spec import SyntheticDatasetSpec
from engine.data.stats import ShardStats, shard_stats
from infra.data.csv_provider import load_csv, write_csv
from infra.storage.traces import write_json


def partition_command(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help=CONFIG_HELP + " (없으면 기본 합성 데이터)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="train.csv/test.csv를 쓸 디렉터리"),
    k_clients: Optional[int] = typer.Option(None, "--k-clients", min=1, help="클라이언트 수 K (합성 데이터)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="데이터셋 seed (합성 데이터)"),
) -> None:
    """연합 데이터셋을 만들어(또는 읽어) CSV로 저장하고 샤드 통계를 출력한다."""
    dataset_overrides: dict = {}
    if k_clients is not None:
        dataset_overrides["k_clients"] = k_clients
    if seed is not None:
        dataset_overrides["seed"] = seed
    extra = {"dataset": dataset_overrides} if dataset_overrides else None

    try:
        cfg = load_experiment(config, extra=extra)
        if dataset_overrides and not isinstance(cfg.dataset, SyntheticDatasetSpec):
            raise ValueError("--k-clients/--seed apply only to synthetic datasets")
    except ValueError as e:
        raise fail(str(e), EXIT_CONFIG)

    target = out or run_dir(cfg) / "data"
    try:
        dataset = get_dataset_provider().load(cfg.dataset)
        train_path, test_path = write_csv(dataset, target)
        # 쓴 파일을 다시 읽어 샤드 크기가 보존되었는지 확인한다
        reloaded = load_csv(train_path, test_path)
    except ValueError as e:
        raise fail(f"데이터 오류: {e}", EXIT_CONFIG)
    except Exception as e:
        raise fail(f"파티션 실패: {e}", EXIT_UNEXPECTED)

    if reloaded.shard_sizes() != dataset.shard_sizes():
        raise fail("다시 읽은 샤드 크기가 원본과 다릅니다", EXIT_UNEXPECTED)

    stats = shard_stats(dataset)
    write_json(stats.to_dict(), target / "stats.json")
    _print_stats(stats)
    console.print(f"\n저장됨: [cyan]{train_path}[/cyan], [cyan]{test_path}[/cyan]")


def _print_stats(stats: ShardStats) -> None:
    table = Table(title="샤드 통계", show_lines=True)
    table.add_column("항목", style="cyan", no_wrap=True)
    table.add_column("값", style="white", justify="right")
    table.add_row("클라이언트 수 K", str(stats.k))
    table.add_row("학습 데이터 수 n", str(stats.n))
    table.add_row("샤드 크기 (최소/중앙/최대)", f"{stats.min_size} / {stats.median_size:g} / {stats.max_size}")
    table.add_row("테스트 데이터 수", str(stats.test_size))
    table.add_row("클래스별 개수", ", ".join(str(c) for c in stats.class_counts))
    console.print(table)
