from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from cli.commands.common import (
    CONFIG_HELP, EXIT_CONFIG, EXIT_EXHAUSTED, EXIT_UNEXPECTED, JOBS_HELP, OUT_HELP, PLOT_HELP, SEEDS_HELP,
    console, execute, exhausted, fail, run_dir,
)
from cli.config import load_experiment
from engine.experiment.config import plan_runs
from engine.experiment.report import runs_frame, summarize_arm, trajectory_frame
from infra.storage.tables import write_table
from infra.storage.traces import write_json, write_trace


def run_command(
    config: Path = typer.Option(..., "--config", "-c", help=CONFIG_HELP),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help=OUT_HELP),
    seeds: Optional[int] = typer.Option(None, "--seeds", min=1, help=SEEDS_HELP),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1, help=JOBS_HELP),
    plot_data: bool = typer.Option(False, "--plot-data", help=PLOT_HELP),
) -> None:
    """설정 파일대로 학습을 seed 수만큼 반복하고 트레이스와 요약을 저장한다."""
    try:
        cfg = load_experiment(config, out=out, seeds=seeds)
        plans = plan_runs(cfg)
    except ValueError as e:
        raise fail(str(e), EXIT_CONFIG)

    try:
        results = execute(plans, jobs, "학습 중...")
    except ValueError as e:
        raise fail(f"데이터/설정 오류: {e}", EXIT_CONFIG)
    except Exception as e:
        raise fail(f"학습 실패: {e}", EXIT_UNEXPECTED)

    target = run_dir(cfg)
    for plan, trace in results:
        write_trace(trace, target / f"trace_seed{plan.seed}.jsonl")
    arm = summarize_arm([trace for _, trace in results])
    write_json(
        {
            "experiment": cfg.experiment.name,
            "runs": [trace.summary() for _, trace in results],
            "mean": arm.mean.to_dict(),
            "std": arm.std.to_dict(),
            "rounds_mean": arm.rounds[0],
            "reached": arm.reached,
        },
        target / "summary.json",
    )
    write_table(runs_frame(results), target / "runs.csv")
    if plot_data:
        write_table(trajectory_frame(results), target / "trajectories.csv")

    _print_runs(results)
    console.print(f"\n결과 저장됨: [cyan]{target}[/cyan]")

    missed = exhausted(results)
    if missed:
        raise fail(f"{missed}개 실행이 max_rounds 안에 목표 정확도에 도달하지 못했습니다", EXIT_EXHAUSTED)


def _print_runs(results) -> None:
    table = Table(title="학습 결과", show_lines=True)
    table.add_column("seed", style="cyan", justify="right")
    table.add_column("상태", style="white")
    table.add_column("라운드", justify="right")
    table.add_column("정확도", justify="right")
    table.add_column("최종 M", justify="right")
    table.add_column("최종 E", justify="right")
    table.add_column("CompT", justify="right")
    table.add_column("TransT", justify="right")
    table.add_column("CompL", justify="right")
    table.add_column("TransL", justify="right")

    for _, trace in results:
        totals = trace.totals
        status = "[green]도달[/green]" if trace.status == "reached_target" else "[yellow]미도달[/yellow]"
        table.add_row(
            str(trace.seed),
            status,
            str(trace.rounds),
            f"{trace.final_accuracy:.4f}",
            str(trace.final_m),
            f"{trace.final_e:g}",
            f"{totals.comp_time:.4g}",
            f"{totals.trans_time:.4g}",
            f"{totals.comp_load:.4g}",
            f"{totals.trans_load:.4g}",
        )
    console.print(table)
