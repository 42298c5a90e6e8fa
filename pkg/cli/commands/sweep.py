from __future__ import annotations

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from cli.commands.common import (
    CONFIG_HELP, EXIT_CONFIG, EXIT_EXHAUSTED, EXIT_UNEXPECTED, JOBS_HELP, OUT_HELP, PLOT_HELP, SEEDS_HELP,
    console, execute, exhausted, fail, run_dir,
)
from cli.config import load_experiment
from engine.core.types import OVERHEAD_FIELDS
from engine.experiment.config import PlannedRun, plan_sweep
from engine.experiment.report import overhead_at_accuracy_frame, sweep_frame, sweep_pivots
from infra.storage.tables import write_table
from infra.storage.traces import write_trace


def _overrides(m: Optional[List[int]], e: Optional[List[float]], hidden_dim: Optional[List[int]]) -> dict:
    sweep: dict = {}
    if m:
        sweep["m"] = list(m)
    if e:
        sweep["e"] = list(e)
    if hidden_dim:
        sweep["hidden_dim"] = list(hidden_dim)
    return {"sweep": sweep} if sweep else {}


def _trace_name(plan: PlannedRun, *, width_axis: bool) -> str:
    width = f"h{plan.run.model.hidden_dim}_" if width_axis else ""
    return f"trace_{width}m{plan.m}_e{plan.e:g}_seed{plan.seed}.jsonl"


def sweep_command(
    config: Path = typer.Option(..., "--config", "-c", help=CONFIG_HELP),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help=OUT_HELP),
    seeds: Optional[int] = typer.Option(None, "--seeds", min=1, help=SEEDS_HELP),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1, help=JOBS_HELP),
    plot_data: bool = typer.Option(False, "--plot-data", help=PLOT_HELP),
    m: Optional[List[int]] = typer.Option(None, "--m", help="M 격자 ([sweep] m 대체, 여러 번 사용 가능)"),
    e: Optional[List[float]] = typer.Option(None, "--e", help="E 격자 ([sweep] e 대체, 여러 번 사용 가능)"),
    hidden_dim: Optional[List[int]] = typer.Option(
        None, "--hidden-dim", help="은닉층 폭 격자 ([sweep] hidden_dim 대체, 여러 번 사용 가능)"
    ),
) -> None:
    """튜너 없이 (은닉층 폭, M, E) 격자 전체를 돌려 목표까지의 오버헤드 총합을 CSV로 저장한다."""
    try:
        cfg = load_experiment(config, out=out, seeds=seeds, extra=_overrides(m, e, hidden_dim))
        plans = plan_sweep(cfg)
    except ValueError as exc:
        raise fail(str(exc), EXIT_CONFIG)

    try:
        results = execute(plans, jobs, "스윕 중...")
    except ValueError as exc:
        raise fail(f"데이터/설정 오류: {exc}", EXIT_CONFIG)
    except Exception as exc:
        raise fail(f"스윕 실패: {exc}", EXIT_UNEXPECTED)

    target = run_dir(cfg)
    for plan, trace in results:
        write_trace(trace, target / "traces" / _trace_name(plan, width_axis=cfg.sweep.hidden_dim is not None))
    frame = sweep_frame(results)
    write_table(frame, target / "sweep.csv")
    if plot_data:
        for name, pivot in sweep_pivots(frame).items():
            write_table(pivot, target / "plot" / f"sweep_{name}.csv", index=True)
        levels = overhead_at_accuracy_frame(results, cfg.sweep.accuracy_levels)
        write_table(levels, target / "plot" / "overhead_by_accuracy.csv")

    _print_sweep(frame)
    console.print(f"\n결과 저장됨: [cyan]{target}[/cyan]")

    missed = exhausted(results)
    if missed:
        raise fail(f"{missed}개 실행이 max_rounds 안에 목표 정확도에 도달하지 못했습니다", EXIT_EXHAUSTED)


def _print_sweep(frame) -> None:
    # seed 평균 정규화 값 (1.0 = 은닉층 폭별 격자 최솟값)
    means = frame.groupby(["hidden_dim", "m", "e"], sort=True)[[f"{n}_norm" for n in OVERHEAD_FIELDS]].mean()
    table = Table(title="스윕 결과 (정규화 평균)", show_lines=True)
    table.add_column("H", style="cyan", justify="right")
    table.add_column("M", style="cyan", justify="right")
    table.add_column("E", style="cyan", justify="right")
    for label in ("CompT", "TransT", "CompL", "TransL"):
        table.add_column(label, justify="right")
    for (width, m_value, e_value), row in means.iterrows():
        table.add_row(str(width), str(m_value), f"{e_value:g}", *(f"{v:.3f}" for v in row.tolist()))
    console.print(table)
