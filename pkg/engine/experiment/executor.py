from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from engine.data.protocol import DatasetProvider, SyntheticDatasetProvider
from engine.data.shard import FederatedDataset
from engine.experiment.config import PlannedRun
from engine.flsim.runner import run_training
from engine.flsim.trace import TrainingTrace

logger = logging.getLogger(__name__)

# 실행 하나가 끝날 때마다 (완료 수, 전체 수)로 호출된다
RunsCallback = Callable[[int, int], None]

# 프로세스마다 데이터셋을 한 번만 만든다. 키는 데이터셋 spec (pydantic frozen 모델이라 해시 가능)
_DATASETS: Dict[object, FederatedDataset] = {}


def _dataset_for(provider: DatasetProvider, spec: object) -> FederatedDataset:
    if spec not in _DATASETS:
        _DATASETS[spec] = provider.load(spec)  # type: ignore[arg-type]
    return _DATASETS[spec]


def _run_one(plan: PlannedRun, provider: DatasetProvider) -> TrainingTrace:
    return run_training(plan.run, dataset=_dataset_for(provider, plan.run.dataset))


def execute_runs(
    plans: Sequence[PlannedRun],
    *,
    provider: Optional[DatasetProvider] = None,
    jobs: int = 1,
    on_done: Optional[RunsCallback] = None,
) -> List[Tuple[PlannedRun, TrainingTrace]]:
    """계획된 실행들을 돌리고 (계획, 트레이스) 목록을 입력 순서대로 반환한다.

    jobs > 1이면 프로세스 풀에서 병렬로 실행한다. 각 실행은 seed로 완전히 결정되므로
    병렬 여부와 관계없이 결과가 같다.
    """
    provider = provider or SyntheticDatasetProvider()
    total = len(plans)
    results: List[Optional[TrainingTrace]] = [None] * total

    if jobs <= 1 or total <= 1:
        for idx, plan in enumerate(plans):
            results[idx] = _run_one(plan, provider)
            if on_done:
                on_done(idx + 1, total)
    else:
        logger.info("experiment.parallel runs=%s jobs=%s", total, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, plan, provider) for plan in plans]
            done = 0
            # 완료 순서가 아니라 입력 순서로 모은다
            for idx, future in enumerate(futures):
                results[idx] = future.result()
                done += 1
                if on_done:
                    on_done(done, total)

    return [(plan, trace) for plan, trace in zip(plans, results) if trace is not None]
