from __future__ import annotations

from typing import List, Optional, Sequence

from engine.core.preferences import Preferences
from engine.core.types import CostConstants, HyperParams, OverheadVector
from engine.flsim.trace import RoundRecord
from engine.overhead.accounting import RoundParticipation, accumulate, round_overhead
from engine.tuner.config import TunerConfig
from engine.tuner.controller import FedTuneController
from engine.tuner.state import Decision


# 기록된 트레이스를 다른 비용 계수로 다시 계산한다.
# 학습은 다시 하지 않는다. 참가자 크기, E, 정확도는 기록된 값을 그대로 쓴다.


def participations_from_records(records: Sequence[RoundRecord]) -> List[RoundParticipation]:
    return [RoundParticipation(round_index=r.round, participant_sizes=r.sizes, e=r.e) for r in records]


def replay_overheads(records: Sequence[RoundRecord], c: CostConstants) -> List[OverheadVector]:
    """라운드별 누적 오버헤드를 계수 c로 다시 계산한다."""
    cumulative = OverheadVector()
    out: List[OverheadVector] = []
    for p in participations_from_records(records):
        cumulative = accumulate(cumulative, round_overhead(p, c))
        out.append(cumulative)
    return out


def replay_decisions(
    records: Sequence[RoundRecord],
    c: CostConstants,
    tuner_cfg: TunerConfig,
    prefs: Preferences,
    *,
    k_clients: Optional[int] = None,
) -> List[Optional[Decision]]:
    """기록된 정확도와 다시 계산한 누적 오버헤드로 튜너 결정을 재현한다.

    반환 리스트는 records와 같은 길이이며 활성화가 없던 라운드는 None이다.
    튜너 결정은 오버헤드 비율만 쓰므로 c 전체에 같은 배수를 곱해도 결정이 바뀌지 않는다.
    """
    if not records:
        return []
    if k_clients is not None:
        tuner_cfg = tuner_cfg.bound_to_population(k_clients)
    first = records[0]
    controller = FedTuneController(tuner_cfg, prefs, HyperParams(m=first.m, e=int(first.e)))
    return [
        controller.observe(record.accuracy, cumulative)
        for record, cumulative in zip(records, replay_overheads(records, c))
    ]
