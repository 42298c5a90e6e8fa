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
from engine.experiment.config import plan_compare
from engine.experiment.report import ComparisonReport, build_comparison, comparison_frame, runs_frame, trajectory_frame
from infra.storage.tables import write_table
from infra.storage.traces import write_json, write_trace


def compare_command(
    config: Path = typer.Option(..., "--config", "-c", help=CONFIG_HELP),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help=OUT_HELP),
    seeds: Optional[int] = typer.Option(None, "--seeds", min=1, help=SEEDS_HELP),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1, help=JOBS_HELP),
    plot_data: bool = typer.Option(False, "--plot-data", help=PLOT_HELP),
) -> None:
    """고정 (M, E) 기준선과 선호도별 FedTune 실행을 비교해 보고서를 저장한다."""
    try:
        cfg = load_experiment(config, out=out, seeds=seeds)
        baseline_plans, fedtune_plans = plan_compare(cfg)
    except ValueError as e:
        raise fail(str(e), EXIT_CONFIG)

    try:
        results = execute([*baseline_plans, *fedtune_plans], jobs, "비교 실험 중...")
    except ValueError as e:
        raise fail(f"데이터/설정 오류: {e}", EXIT_CONFIG)
    except Exception as e:
        raise fail(f"비교 실험 실패: {e}", EXIT_UNEXPECTED)

    baseline = results[:len(baseline_plans)]
    fedtune = results[len(baseline_plans):]
    report = build_comparison(
        [trace for _, trace in baseline],
        [(plan.preferences, trace) for plan, trace in fedtune],
        target_accuracy=cfg.training.target_accuracy,
    )

    target = run_dir(cfg)
    for plan, trace in baseline:
        write_trace(trace, target / "traces" / "baseline" / f"trace_seed{plan.seed}.jsonl")
    seeds_per_row = len(baseline_plans)
    for idx, (plan, trace) in enumerate(fedtune):
        row = idx // seeds_per_row
        write_trace(trace, target / "traces" / f"pref{row:02d}" / f"trace_seed{plan.seed}.jsonl")
    write_table(runs_frame(results), target / "runs.csv")
    write_table(comparison_frame(report), target / "report.csv")
    write_json(
        {
            "experiment": cfg.experiment.name,
            "target_accuracy": report.target_accuracy,
            "grand_mean_pct": report.grand_mean,
            "negative_rows": report.negative_rows,
            "preference_rows": len(report.rows),
        },
        target / "summary.json",
    )
    if plot_data:
        write_table(trajectory_frame(fedtune), target / "plot" / "trajectories.csv")

    _print_report(report)
    console.print(f"\n결과 저장됨: [cyan]{target}[/cyan]")

    missed = exhausted(results)
    if missed:
        raise fail(f"{missed}개 실행이 max_rounds 안에 목표 정확도에 도달하지 못했습니다", EXIT_EXHAUSTED)


def _print_report(report: ComparisonReport) -> None:
    table = Table(title=f"FedTune vs 기준선 (목표 정확도 {report.target_accuracy:g})", show_lines=True)
    table.add_column("α  β  γ  δ", style="cyan", no_wrap=True)
    for label in ("CompT", "TransT", "CompL", "TransL"):
        table.add_column(label, justify="right")
    table.add_column("최종 M", justify="right")
    table.add_column("최종 E", justify="right")
    table.add_column("Overall", justify="right")

    def _cells(arm) -> list:
        cells = [f"{m:.3g} ({s:.2g})" for m, s in zip(arm.mean, arm.std)]
        cells.append(f"{arm.final_m[0]:.2f} ({arm.final_m[1]:.2f})")
        cells.append(f"{arm.final_e[0]:.2f} ({arm.final_e[1]:.2f})")
        return cells

    table.add_row("기준선", *_cells(report.baseline), "-")
    for result in report.rows:
        mean, std = result.score
        color = "green" if mean >= 0 else "red"
        weights = " ".join(f"{w:.2f}" for w in result.preferences.weights())
        table.add_row(weights, *_cells(result.arm), f"[{color}]{mean:+.2f}% ({std:.2f})[/{color}]")
    console.print(table)
    color = "green" if report.grand_mean >= 0 else "red"
    console.print(f"전체 평균 (선호도 행 단순 평균): [{color}]{report.grand_mean:+.2f}%[/{color}]")
