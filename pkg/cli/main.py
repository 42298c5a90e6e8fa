from __future__ import annotations

import logging

import typer
from rich.console import Console
from rich.logging import RichHandler

# .env 로드는 cli.settings가 import될 때 한 번 일어난다 (FEDTUNE_OUTPUT_DIR)
import cli.settings  # noqa: F401
from cli.commands.compare import compare_command
from cli.commands.partition import partition_command
from cli.commands.run import run_command
from cli.commands.sweep import sweep_command

app = typer.Typer(
    name="fedtune-sim",
    help="FedTune 연합 학습 시뮬레이터: 하이퍼파라미터(M, E) 자동 조정과 시스템 오버헤드 실험",
    no_args_is_help=True,
)


@app.callback()
def _configure(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="DEBUG 로그 출력 (라운드별 기록 포함)"),
) -> None:
    # 로그는 stderr로 보낸다. stdout에는 결과 표만 출력된다.
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)],
        force=True,
    )


app.command("run")(run_command)
app.command("sweep")(sweep_command)
app.command("compare")(compare_command)
app.command("partition")(partition_command)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
