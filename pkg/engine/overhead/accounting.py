from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

from engine.core.types import CostConstants, OverheadVector
from engine.errors import EmptyParticipantsError, NonPositiveError


# 한 라운드의 참가 기록. 라운드 r에서 선택된 참가자들의 데이터 수 n_k와
# 그 라운드에 적용된 로컬 패스 수 E를 담는다.
# e는 정수 또는 (0, 1) 구간의 분수다 (스윕 모드에서 데이터 일부만 한 번 학습).
@dataclass(frozen=True)
class RoundParticipation:
    round_index: int
    participant_sizes: Tuple[int, ...]
    e: float

    def __post_init__(self) -> None:
        if not self.participant_sizes:
            raise EmptyParticipantsError(f"round {self.round_index} has no participants")
        if any(n < 1 for n in self.participant_sizes):
            raise NonPositiveError(f"participant sizes must be >= 1, got {self.participant_sizes}")
        if not self.e > 0:
            raise NonPositiveError(f"E must be > 0, got {self.e}")

    @property
    def m(self) -> int:
        return len(self.participant_sizes)


def round_overhead(p: RoundParticipation, c: CostConstants) -> OverheadVector:
    """한 라운드의 오버헤드 기여분.

    comp_time  = C1 · E · max(n_k)   가장 느린 참가자가 라운드 계산 시간을 결정한다
    trans_time = C2                  참가자 수와 무관한 라운드당 상수
    comp_load  = C3 · E · Σ n_k
    trans_load = C4 · M
    """
    return OverheadVector(
        comp_time=c.c1 * p.e * max(p.participant_sizes),
        trans_time=c.c2,
        comp_load=c.c3 * p.e * sum(p.participant_sizes),
        trans_load=c.c4 * len(p.participant_sizes),
    )


def accumulate(acc: OverheadVector, round: OverheadVector) -> OverheadVector:
    return acc + round


def model_cost_constants(flops_per_input: float, param_count: float) -> CostConstants:
    # C1 = C3 = 입력 하나당 FLOPs, C2 = C4 = 모델 파라미터 수
    if not flops_per_input > 0 or not param_count > 0:
        raise NonPositiveError(
            f"flops_per_input and param_count must be > 0, got {flops_per_input}, {param_count}"
        )
    return CostConstants(c1=flops_per_input, c2=param_count, c3=flops_per_input, c4=param_count)


def closed_form_totals(participations: Iterable[RoundParticipation], c: CostConstants) -> OverheadVector:
    # 누적 루프와 독립적으로, 전체 참가 기록에 대해 총합 공식을 한 번에 평가한다.
    #   CompT  = C1 · Σ_r E_r · max_k(n_k)
    #   TransT = C2 · R
    #   CompL  = C3 · Σ_r E_r · Σ_k n_k
    #   TransL = C4 · Σ_r M_r
    rows = list(participations)
    if not rows:
        return OverheadVector()
    straggler = sum(p.e * max(p.participant_sizes) for p in rows)
    volume = sum(p.e * sum(p.participant_sizes) for p in rows)
    participants = sum(len(p.participant_sizes) for p in rows)
    return OverheadVector(
        comp_time=c.c1 * straggler,
        trans_time=c.c2 * len(rows),
        comp_load=c.c3 * volume,
        trans_load=c.c4 * participants,
    )
