from __future__ import annotations

from dataclasses import replace
from typing import List, Tuple

from engine.core.compare import compare
from engine.core.preferences import Preferences
from engine.errors import InsufficientHistoryError
from engine.tuner.config import TunerConfig
from engine.tuner.deltas import E_SIGNS, M_SIGNS
from engine.tuner.state import RateParams, TunerState

_RATE_KEYS = ("t", "q", "z", "v")


def _direction(cur: int, prv: int) -> int:
    return (cur > prv) - (cur < prv)


def _favored(signs: Tuple[int, ...], direction: int) -> List[str]:
    # 이번 결정 방향(direction)을 선호하는 오버헤드의 파라미터 키
    return [key for key, sign in zip(_RATE_KEYS, signs) if sign == direction]


def _against(signs: Tuple[int, ...], direction: int) -> List[str]:
    return [key for key, sign in zip(_RATE_KEYS, signs) if sign == -direction]


def _require_history(state: TunerState) -> None:
    if not state.is_warm:
        raise InsufficientHistoryError(f"needs 3 checkpoints, have {len(state.history)}")


def _refresh(rates: RateParams, keys: List[str], state: TunerState) -> RateParams:
    # η = |cur − prv| / |prv − prvprv|. 분모가 0이면 이전 값을 유지한다.
    prvprv, prv, cur = (cp.interval_overhead.to_dict() for cp in state.history[-3:])
    field_of = {"t": "comp_time", "q": "trans_time", "z": "comp_load", "v": "trans_load"}
    updates = {}
    for key in keys:
        name = field_of[key]
        denom = abs(prv[name] - prvprv[name])
        if denom == 0:
            continue
        updates[key] = abs(cur[name] - prv[name]) / denom
    return replace(rates, **updates) if updates else rates


def update_rate_params(state: TunerState) -> TunerState:
    """이번 결정을 지지하는 쪽의 η/ζ만 최신 변화율로 갱신한다.

    M이 커졌으면 CompT, TransT의 η를, 작아졌으면 CompL, TransL의 η를 갱신한다.
    E가 커졌으면 TransT, TransL의 ζ를, 작아졌으면 CompT, CompL의 ζ를 갱신한다.
    변화가 없는 방향은 그대로 둔다.
    """
    _require_history(state)
    m_dir = _direction(state.s_cur.m, state.s_prv.m)
    e_dir = _direction(state.s_cur.e, state.s_prv.e)

    eta, zeta = state.eta, state.zeta
    if m_dir:
        eta = _refresh(eta, _favored(M_SIGNS, m_dir), state)
    if e_dir:
        zeta = _refresh(zeta, _favored(E_SIGNS, e_dir), state)
    return replace(state, eta=eta, zeta=zeta)


def _scale(rates: RateParams, keys: List[str], factor: float) -> RateParams:
    return replace(rates, **{key: getattr(rates, key) * factor for key in keys})


def apply_penalty(state: TunerState, prefs: Preferences, cfg: TunerConfig) -> Tuple[TunerState, float]:
    """직전 구간(S_prv) 대비 현재 구간(S_cur)이 나빠졌으면 결정에 반하는 파라미터를 D배 한다.

    반환값: (새 상태, I(S_prv, S_cur))
    I ≤ 0이면 상태를 바꾸지 않는다.
    """
    _require_history(state)
    prv = state.history[-2].interval_overhead
    cur = state.history[-1].interval_overhead
    i_value = compare(prv, cur, prefs)
    if i_value <= 0:
        return state, i_value

    m_dir = _direction(state.s_cur.m, state.s_prv.m)
    e_dir = _direction(state.s_cur.e, state.s_prv.e)
    eta, zeta = state.eta, state.zeta
    if m_dir:
        eta = _scale(eta, _against(M_SIGNS, m_dir), cfg.penalty_d)
    if e_dir:
        zeta = _scale(zeta, _against(E_SIGNS, e_dir), cfg.penalty_d)
    return replace(state, eta=eta, zeta=zeta), i_value
