from __future__ import annotations

from typing import Protocol

from engine.data.shard import FederatedDataset
from engine.data.spec import CsvDatasetSpec, SyntheticDatasetSpec
from engine.data.synthetic import generate_from_spec


# DatasetProvider는 연합 데이터셋 소스의 공통 인터페이스(Protocol)다.
# Protocol을 사용하므로 명시적으로 상속하지 않아도 load 메서드만 구현하면
# 타입 체커가 DatasetProvider로 인정한다.
#
# 구현체:
#   - SyntheticDatasetProvider (이 파일)     → 합성 데이터만 처리, 엔진 단독 테스트용
#   - infra/data/csv_provider.py             → CSV 파일 + 합성 데이터 모두 처리 (CLI 기본값)
#
# engine/flsim은 이 인터페이스만 알고, 파일을 직접 읽지 않는다.
class DatasetProvider(Protocol):
    def load(self, spec: SyntheticDatasetSpec | CsvDatasetSpec) -> FederatedDataset:
        # spec의 source에 따라 데이터셋을 만들거나 읽어서 반환한다.
        # 처리할 수 없는 source이면 ValueError 계열 예외를 발생시킨다.
        ...


class SyntheticDatasetProvider:
    """합성 데이터셋만 만드는 기본 provider. 파일 I/O가 없다."""

    def load(self, spec: SyntheticDatasetSpec | CsvDatasetSpec) -> FederatedDataset:
        if isinstance(spec, SyntheticDatasetSpec):
            return generate_from_spec(spec)
        raise ValueError(
            f"dataset source '{spec.source}' needs a file-backed provider (see infra/data/csv_provider.py)"
        )
