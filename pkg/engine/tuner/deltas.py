from __future__ import annotations

from typing import Tuple

from engine.core.preferences import Preferences
from engine.core.types import OVERHEAD_FIELDS
from engine.errors import InsufficientHistoryError, ZeroDenominatorError
from engine.tuner.state import RateParams, TunerState

# 각 오버헤드가 M, E 중 어느 쪽이 커지기를 선호하는지 (+1: 클수록 좋음, -1: 작을수록 좋음).
#           CompT  TransT  CompL  TransL
M_SIGNS = (+1,    +1,     -1,    -1)
E_SIGNS = (-1,    +1,     -1,    +1)


def _signed_vote(state: TunerState, prefs: Preferences, rates: RateParams, signs: Tuple[int, ...]) -> float:
    if not state.is_warm:
        raise InsufficientHistoryError(
            f"delta computation needs 3 checkpoints, have {len(state.history)}"
        )
    prv = state.history[-2].interval_overhead
    cur = state.history[-1].interval_overhead

    total = 0.0
    for name, sign, weight, rate, c, p in zip(OVERHEAD_FIELDS, signs, prefs.weights(), rates, cur, prv):
        if weight == 0:
            continue
        if c == 0:
            raise ZeroDenominatorError(f"current interval {name} is zero")
        total += sign * weight * rate * abs(c - p) / c
    return total


def compute_delta_m(state: TunerState, prefs: Preferences) -> float:
    """G의 M 방향 미분 근사값 ΔM. 부호만 결정에 쓰인다."""
    return _signed_vote(state, prefs, state.eta, M_SIGNS)


def compute_delta_e(state: TunerState, prefs: Preferences) -> float:
    """G의 E 방향 미분 근사값 ΔE. 부호만 결정에 쓰인다."""
    return _signed_vote(state, prefs, state.zeta, E_SIGNS)
