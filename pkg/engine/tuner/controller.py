from __future__ import annotations

import logging
from dataclasses import replace
from typing import Optional, Tuple

from engine.core.preferences import Preferences
from engine.core.types import HyperParams, OverheadVector
from engine.errors import InvalidParamError, NonMonotoneOverheadError
from engine.tuner.config import TunerConfig
from engine.tuner.deltas import compute_delta_e, compute_delta_m
from engine.tuner.rates import apply_penalty, update_rate_params
from engine.tuner.state import Checkpoint, Decision, TunerState

logger = logging.getLogger(__name__)

# 정확도는 (맞은 개수 / 전체)라서 0.31 − 0.30 같은 뺄셈이 ε보다 아주 조금 작게 나올 수 있다
_GAIN_SLACK = 1e-12


def _clamp(value: int, low: int, high: Optional[int]) -> int:
    value = max(value, low)
    if high is not None:
        value = min(value, high)
    return value


def decide(
    state: TunerState,
    prefs: Preferences,
    cfg: TunerConfig,
    *,
    i_value: float = 0.0,
    penalized: bool = False,
) -> Tuple[TunerState, Decision]:
    # ΔM, ΔE의 부호만 보고 M, E를 ±1 한다. 0은 내리는 쪽으로 처리한다.
    # 결과는 [m_min, m_max], [e_min, e_max] 범위로 잘린다.
    delta_m = compute_delta_m(state, prefs)
    delta_e = compute_delta_e(state, prefs)
    m_sign = 1 if delta_m > 0 else -1
    e_sign = 1 if delta_e > 0 else -1

    nxt = HyperParams(
        m=_clamp(state.s_cur.m + m_sign, cfg.m_min, cfg.m_max),
        e=_clamp(state.s_cur.e + e_sign, cfg.e_min, cfg.e_max),
    )
    new_state = replace(state, s_prv=state.s_cur, s_cur=nxt)
    decision = Decision(
        next=nxt,
        delta_m_sign=m_sign,
        delta_e_sign=e_sign,
        penalized=penalized,
        i_value=i_value,
        delta_m=delta_m,
        delta_e=delta_e,
        state=new_state,
    )
    return new_state, decision


def interval_overhead(
    cumulative: OverheadVector,
    prev_cumulative: OverheadVector,
    gain: float,
    cfg: TunerConfig,
) -> OverheadVector:
    # 활성화 구간 하나의 오버헤드. gain은 활성화 조건을 통과한 값이라 항상 양수다.
    raw = OverheadVector(*(max(c - p, 0.0) for c, p in zip(cumulative, prev_cumulative)))
    if cfg.interval_normalization == "none":
        return raw
    return raw.scaled(1.0 / max(gain, _GAIN_SLACK))


def observe_round(
    state: TunerState,
    cfg: TunerConfig,
    prefs: Preferences,
    accuracy: float,
    cumulative_overhead: OverheadVector,
) -> Tuple[TunerState, Optional[Decision]]:
    """라운드가 끝날 때마다 호출된다.

    정확도가 마지막 활성화 이후 ε 이상 오르지 않았으면 (상태, None)을 반환한다.
    올랐으면 체크포인트를 기록하고,
      - 체크포인트가 3개 미만이면 (M, E)를 유지하는 워밍업 결정을,
      - 3개면 벌점 → η/ζ 갱신 → ΔM/ΔE → ±1 결정 순서로 처리한 결정을 반환한다.
    """
    if not 0.0 <= accuracy <= 1.0:
        raise InvalidParamError(f"accuracy must be in [0, 1], got {accuracy}")
    if not cumulative_overhead.dominates(state.last_cumulative):
        raise NonMonotoneOverheadError(
            f"cumulative overhead went backwards: {state.last_cumulative} -> {cumulative_overhead}"
        )
    state = replace(state, last_cumulative=cumulative_overhead)

    if accuracy - state.last_activation_accuracy + _GAIN_SLACK < cfg.epsilon:
        return state, None

    # 1. 체크포인트 기록 (구간 오버헤드 = 현재 누적 − 직전 체크포인트 누적)
    prev_cum = state.history[-1].cumulative_overhead if state.history else OverheadVector()
    interval = interval_overhead(
        cumulative_overhead, prev_cum, accuracy - state.last_activation_accuracy, cfg
    )
    checkpoint = Checkpoint(
        hyper=state.s_cur,
        interval_overhead=interval,
        accuracy=accuracy,
        cumulative_overhead=cumulative_overhead,
    )
    state = replace(
        state,
        history=(state.history + (checkpoint,))[-3:],
        last_activation_accuracy=accuracy,
    )

    if not state.is_warm:
        # 워밍업: η 비율을 만들 구간이 부족하므로 하이퍼파라미터를 유지한다
        state = replace(state, s_prv=state.s_cur)
        logger.debug("tuner.warmup checkpoints=%s accuracy=%.4f", len(state.history), accuracy)
        return state, Decision(
            next=state.s_cur,
            delta_m_sign=0,
            delta_e_sign=0,
            penalized=False,
            i_value=0.0,
            warmup=True,
            state=state,
        )

    # 2. 벌점  3. η/ζ 갱신  4~5. ΔM/ΔE 계산과 결정
    moved = state.s_cur != state.s_prv
    state, i_value = apply_penalty(state, prefs, cfg)
    state = update_rate_params(state)
    state, decision = decide(state, prefs, cfg, i_value=i_value, penalized=moved and i_value > 0)
    logger.debug(
        "tuner.decide accuracy=%.4f dm=%+.4g de=%+.4g i=%+.4g next_m=%s next_e=%s",
        accuracy, decision.delta_m, decision.delta_e, i_value, decision.next.m, decision.next.e,
    )
    return state, decision


class FedTuneController:
    """학습 루프가 사용하는 상태 보관용 래퍼.

    한 학습 실행에 인스턴스 하나를 쓴다. 호출은 외부에서 직렬화되어야 한다.
    """

    def __init__(self, cfg: TunerConfig, prefs: Preferences, initial: HyperParams) -> None:
        self.cfg = cfg
        self.prefs = prefs
        self.state = TunerState.initial(initial)

    @property
    def hyper(self) -> HyperParams:
        return self.state.s_cur

    def observe(self, accuracy: float, cumulative_overhead: OverheadVector) -> Optional[Decision]:
        self.state, decision = observe_round(
            self.state, self.cfg, self.prefs, accuracy, cumulative_overhead
        )
        return decision
