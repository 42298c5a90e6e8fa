from __future__ import annotations

from engine.core.preferences import Preferences
from engine.core.types import OVERHEAD_FIELDS, OverheadVector
from engine.errors import ZeroDenominatorError


def compare(s1_overhead: OverheadVector, s2_overhead: OverheadVector, prefs: Preferences) -> float:
    # 선호도 가중 상대 변화량의 합 I(S1, S2)를 계산한다.
    #   I = α·(t2−t1)/t1 + β·(q2−q1)/q1 + γ·(z2−z1)/z1 + δ·(v2−v1)/v1
    # 음수이면 S2가 더 좋다. 양수이면 S2가 더 나쁘다.
    #
    # 가중치가 0인 항은 계산하지 않는다. 가중치가 있는데 S1 성분이 0이면
    # S1이 측정되지 않은 것이므로 ZeroDenominatorError를 발생시킨다.
    total = 0.0
    for name, weight, base, other in zip(OVERHEAD_FIELDS, prefs.weights(), s1_overhead, s2_overhead):
        if weight == 0:
            continue
        if base == 0:
            raise ZeroDenominatorError(f"S1 {name} is zero; cannot form a relative delta")
        total += weight * (other - base) / base
    return total
