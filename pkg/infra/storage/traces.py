from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List

from engine.errors import ParseError, SchemaMismatchError
from engine.flsim.trace import RoundRecord, TrainingTrace


def _dumps(payload: Dict[str, Any]) -> str:
    # 키 정렬, 타임스탬프 없음 → 같은 트레이스는 같은 바이트
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, allow_nan=False)


def write_trace(trace: TrainingTrace, path: Path | str) -> Path:
    """트레이스를 JSON Lines로 쓴다. 라운드마다 한 줄, 마지막 줄은 summary."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in trace.records:
            f.write(_dumps(record.to_dict()) + "\n")
        f.write(_dumps(trace.summary()) + "\n")
    return path


def read_trace(path: Path | str) -> TrainingTrace:
    path = Path(path)
    records: List[RoundRecord] = []
    summary: Dict[str, Any] | None = None
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read trace: {exc}") from exc

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        kind = payload.get("type")
        if kind == "round":
            try:
                records.append(RoundRecord.from_dict(payload))
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaMismatchError(f"{path}:{lineno}: bad round record: {exc}") from exc
        elif kind == "summary":
            summary = payload
        else:
            raise SchemaMismatchError(f"{path}:{lineno}: unknown record type {kind!r}")

    if summary is None:
        raise SchemaMismatchError(f"{path}: trace has no summary record")
    try:
        return TrainingTrace.from_records(tuple(records), summary)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatchError(f"{path}: bad summary record: {exc}") from exc


def write_json(payload: Dict[str, Any], path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    return path
