from __future__ import annotations

from engine.data.protocol import DatasetProvider
from infra.data.csv_provider import CsvDatasetProvider


def get_dataset_provider() -> DatasetProvider:
    # CLI는 CSV 파일과 합성 데이터를 모두 처리하는 provider를 쓴다.
    # 엔진 단독 테스트는 engine.data.protocol.SyntheticDatasetProvider를 쓴다.
    return CsvDatasetProvider()
