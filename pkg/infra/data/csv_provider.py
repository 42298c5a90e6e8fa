from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from engine.data.shard import ClientShard, Dataset, FederatedDataset
from engine.data.spec import CsvDatasetSpec, SyntheticDatasetSpec
from engine.data.synthetic import generate_from_spec
from engine.errors import EmptyShardError, ParseError, SchemaMismatchError

logger = logging.getLogger(__name__)


def _read(path: Path) -> pd.DataFrame:
    # 모든 셀을 문자열로 읽고 숫자 변환은 직접 한다 (오류 위치를 행/열 단위로 알려주기 위해)
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ParseError(f"{path}: cannot read CSV: {exc}") from exc


def _numeric(frame: pd.DataFrame, columns: List[str], path: Path) -> np.ndarray:
    out = np.empty((len(frame), len(columns)), dtype=np.float64)
    for j, column in enumerate(columns):
        values = pd.to_numeric(frame[column].str.strip(), errors="coerce")
        bad = values.isna().to_numpy()
        if bad.any():
            row = int(np.argmax(bad))
            # 헤더가 1행이므로 데이터 행 번호는 +2
            raise ParseError(
                f"{path}: row {row + 2}, column '{column}': non-numeric value {frame[column].iloc[row]!r}"
            )
        out[:, j] = values.to_numpy(dtype=np.float64)
    return out


def _labels(frame: pd.DataFrame, column: str, path: Path) -> np.ndarray:
    raw = _numeric(frame, [column], path)[:, 0]
    bad = (raw < 0) | (raw != np.floor(raw))
    if bad.any():
        row = int(np.argmax(bad))
        raise ParseError(
            f"{path}: row {row + 2}, column '{column}': label must be a non-negative integer, got {frame[column].iloc[row]!r}"
        )
    return raw.astype(np.int64)


def _client_order(keys: List[str]) -> List[str]:
    # 클라이언트 키가 모두 정수면 숫자 순서, 아니면 문자열 순서로 정렬한다
    try:
        return sorted(keys, key=lambda k: int(k))
    except ValueError:
        return sorted(keys)


def load_csv(
    train_path: Path | str,
    test_path: Path | str,
    client_column: str = "client",
    label_column: str = "label",
) -> FederatedDataset:
    """CSV 두 개(학습/테스트)를 읽어 FederatedDataset을 만든다.

    학습 파일은 client_column 값으로 묶여 샤드가 된다. 나머지 숫자 열은 모두 특징이다.
    테스트 파일에 client_column이 있으면 무시한다.
    """
    train_path, test_path = Path(train_path), Path(test_path)
    train = _read(train_path)
    test = _read(test_path)

    for required in (client_column, label_column):
        if required not in train.columns:
            raise SchemaMismatchError(f"{train_path}: missing column '{required}'")
    if label_column not in test.columns:
        raise SchemaMismatchError(f"{test_path}: missing column '{label_column}'")

    feature_columns = [c for c in train.columns if c not in (client_column, label_column)]
    test_features = [c for c in test.columns if c not in (client_column, label_column)]
    if not feature_columns:
        raise SchemaMismatchError(f"{train_path}: no feature columns")
    if test_features != feature_columns:
        raise SchemaMismatchError(
            f"feature columns differ: train={feature_columns} test={test_features}"
        )
    if train.empty:
        raise EmptyShardError(f"{train_path}: no data rows")

    train_x = _numeric(train, feature_columns, train_path)
    train_y = _labels(train, label_column, train_path)
    test_x = _numeric(test, feature_columns, test_path)
    test_y = _labels(test, label_column, test_path)

    keys = train[client_column].str.strip()
    rows_by_client: Dict[str, List[int]] = {}
    for row, key in enumerate(keys.tolist()):
        rows_by_client.setdefault(key, []).append(row)

    shards = []
    for client_id, key in enumerate(_client_order(list(rows_by_client))):
        rows = np.array(rows_by_client[key], dtype=np.int64)
        shards.append(ClientShard(features=train_x[rows], labels=train_y[rows], client_id=client_id, name=key))

    num_classes = int(max(train_y.max(), test_y.max() if test_y.size else 0)) + 1
    logger.info(
        "data.csv_loaded train=%s clients=%s rows=%s features=%s classes=%s",
        train_path, len(shards), len(train), len(feature_columns), num_classes,
    )
    return FederatedDataset(
        shards=tuple(shards),
        test_set=Dataset(features=test_x, labels=test_y),
        num_classes=num_classes,
        input_dim=len(feature_columns),
    )


def write_csv(
    dataset: FederatedDataset,
    out_dir: Path | str,
    client_column: str = "client",
    label_column: str = "label",
) -> Tuple[Path, Path]:
    # load_csv의 역연산. train.csv와 test.csv를 out_dir에 쓴다.
    # 같은 데이터셋이면 같은 바이트가 나온다.
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    feature_columns = [f"f{j}" for j in range(dataset.input_dim)]

    frames = []
    for shard in dataset.shards:
        frame = pd.DataFrame(shard.features, columns=feature_columns)
        frame.insert(0, client_column, shard.name if shard.name is not None else str(shard.client_id))
        frame[label_column] = shard.labels
        frames.append(frame)
    train = pd.concat(frames, ignore_index=True)

    test = pd.DataFrame(dataset.test_set.features, columns=feature_columns)
    test[label_column] = dataset.test_set.labels

    train_path = out_dir / "train.csv"
    test_path = out_dir / "test.csv"
    train.to_csv(train_path, index=False, encoding="utf-8", lineterminator="\n")
    test.to_csv(test_path, index=False, encoding="utf-8", lineterminator="\n")
    return train_path, test_path


class CsvDatasetProvider:
    """DatasetProvider backed by CSV files. Default for the CLI; also handles synthetic specs."""

    def load(self, spec: SyntheticDatasetSpec | CsvDatasetSpec) -> FederatedDataset:
        if isinstance(spec, SyntheticDatasetSpec):
            return generate_from_spec(spec)
        return load_csv(spec.train_path, spec.test_path, spec.client_column, spec.label_column)
