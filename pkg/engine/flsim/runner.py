from __future__ import annotations

import logging
from typing import Callable, List, Optional

from engine.core.types import HyperParams, OverheadVector
from engine.data.protocol import DatasetProvider, SyntheticDatasetProvider
from engine.data.shard import FederatedDataset
from engine.errors import MTooLargeError
from engine.flsim.aggregators import ClientUpdate, make_aggregator
from engine.flsim.config import RunConfig
from engine.flsim.sampling import sample_participants, stream, stream_seed
from engine.flsim.trace import RoundRecord, TraceStatus, TrainingTrace
from engine.model.mlp import evaluate, init_params, train_local
from engine.overhead.accounting import RoundParticipation, accumulate, round_overhead
from engine.tuner.controller import FedTuneController

logger = logging.getLogger(__name__)


# 진행 상황 콜백 타입.
# (stage: str, pct: float | None) 형식으로 호출된다.
# stage: "load_data" | "train" | "done"
# pct: 0.0~1.0 진행률 (max_rounds 대비 현재 라운드). None이면 해당 단계의 시작만 알림
ProgressCallback = Callable[[str, Optional[float]], None]


def run_training(
    cfg: RunConfig,
    *,
    dataset_provider: DatasetProvider | None = None,
    dataset: FederatedDataset | None = None,
    progress_cb: ProgressCallback | None = None,
) -> TrainingTrace:
    # 연합 학습을 한 번 실행하고 TrainingTrace를 반환한다.
    # 파일을 직접 읽지 않는다. 데이터는 dataset으로 직접 받거나 dataset_provider로 불러온다.
    #
    # 라운드 흐름:
    #   1. 참가자 M명 선택 (stream "sampling", r)
    #   2. 참가자별 로컬 학습 E패스 (stream "shuffle", r, client_id)
    #   3. client id 오름차순으로 집계
    #   4. 테스트셋 전체로 평가
    #   5. 라운드 오버헤드 계산 후 누적
    #   6. 튜너가 켜져 있으면 observe → 결정은 다음 라운드부터 적용
    # 목표 정확도에 도달하거나 max_rounds를 다 쓰면 멈춘다. 후자는 예외가 아니다.
    if progress_cb:
        progress_cb("load_data", None)
    if dataset is None:
        provider = dataset_provider or SyntheticDatasetProvider()
        dataset = provider.load(cfg.dataset)

    training = cfg.training
    k_clients = dataset.k_clients
    if training.m > k_clients:
        raise MTooLargeError(f"initial M={training.m} exceeds K={k_clients} clients")

    spec = cfg.model.mlp_spec(dataset.input_dim, dataset.num_classes)
    cost = cfg.cost.resolve(spec)
    params = init_params(spec, stream_seed(cfg.seed, "init"))
    aggregator = make_aggregator(cfg.aggregator)

    controller: FedTuneController | None = None
    if cfg.tuner is not None and cfg.preferences is not None:
        controller = FedTuneController(
            cfg.tuner.bound_to_population(k_clients),
            cfg.preferences.to_preferences(),
            HyperParams(m=training.m, e=int(training.e)),
        )

    m, e = training.m, training.e
    cumulative = OverheadVector()
    records: List[RoundRecord] = []
    status: TraceStatus = "exhausted_max_rounds"

    logger.info(
        "flsim.start seed=%s k=%s m=%s e=%s aggregator=%s tuner=%s target=%s",
        cfg.seed, k_clients, m, e, aggregator.name, controller is not None, training.target_accuracy,
    )
    if progress_cb:
        progress_cb("train", 0.0)

    for r in range(1, training.max_rounds + 1):
        participants = sample_participants(k_clients, m, stream(cfg.seed, "sampling", r))

        # 로컬 학습은 서로 독립이다. 완료 순서와 무관하게 집계기가 id 순으로 reduce한다.
        updates = []
        for cid in participants:
            shard = dataset.shards[cid]
            local, steps = train_local(
                params, shard, e,
                batch=training.batch_size,
                lr=training.lr,
                momentum=training.momentum,
                seed=stream_seed(cfg.seed, "shuffle", r, cid),
            )
            updates.append(ClientUpdate(client_id=cid, params=local, n_samples=shard.size, local_steps=steps))

        params = aggregator.aggregate(params, updates)
        accuracy = evaluate(params, dataset.test_set)

        sizes = tuple(dataset.shards[cid].size for cid in participants)
        this_round = round_overhead(RoundParticipation(round_index=r, participant_sizes=sizes, e=e), cost)
        cumulative = accumulate(cumulative, this_round)

        decision = controller.observe(accuracy, cumulative) if controller else None
        records.append(
            RoundRecord(
                round=r,
                m=m,
                e=e,
                participants=participants,
                sizes=sizes,
                round_overhead=this_round,
                cumulative=cumulative,
                accuracy=accuracy,
                decision=decision.to_dict() if decision else None,
            )
        )
        logger.debug("flsim.round r=%s m=%s e=%s accuracy=%.4f", r, m, e, accuracy)

        if progress_cb:
            progress_cb("train", r / training.max_rounds)

        if accuracy >= training.target_accuracy:
            status = "reached_target"
            break

        if decision is not None and not decision.warmup:
            if (decision.next.m, decision.next.e) != (m, int(e)):
                logger.info(
                    "tuner.activate round=%s m=%s->%s e=%s->%s penalized=%s",
                    r, m, decision.next.m, e, decision.next.e, decision.penalized,
                )
            m, e = decision.next.m, decision.next.e

    trace = TrainingTrace(
        records=tuple(records),
        status=status,
        target_accuracy=training.target_accuracy,
        cost=cost,
        seed=cfg.seed,
        aggregator=aggregator.name,
        tuner_enabled=controller is not None,
    )
    logger.info(
        "flsim.finish seed=%s status=%s rounds=%s accuracy=%.4f final_m=%s final_e=%s",
        cfg.seed, status, trace.rounds, trace.final_accuracy, trace.final_m, trace.final_e,
    )
    if progress_cb:
        progress_cb("done", 1.0)
    return trace
