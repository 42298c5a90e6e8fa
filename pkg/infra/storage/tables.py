from __future__ import annotations

from pathlib import Path

import pandas as pd

from engine.errors import ParseError, SchemaMismatchError

SCHEMA_VERSION = 1
_HEADER_PREFIX = "# schema_version="


def write_table(frame: pd.DataFrame, path: Path | str, *, index: bool = False) -> Path:
    # 첫 줄은 스키마 버전 주석, 그 다음은 pandas CSV
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"{_HEADER_PREFIX}{SCHEMA_VERSION}\n")
        frame.to_csv(f, index=index, lineterminator="\n")
    return path


def read_table(path: Path | str) -> pd.DataFrame:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            first = f.readline().strip()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read table: {exc}") from exc
    if not first.startswith(_HEADER_PREFIX):
        raise SchemaMismatchError(f"{path}: missing '{_HEADER_PREFIX}' header line")
    version = first[len(_HEADER_PREFIX):]
    if version != str(SCHEMA_VERSION):
        raise SchemaMismatchError(f"{path}: schema_version {version} is not supported (expected {SCHEMA_VERSION})")
    try:
        return pd.read_csv(path, comment="#", encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ParseError(f"{path}: cannot parse table: {exc}") from exc
