from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from engine.errors import NegativeWeightError, SumNotOneError

logger = logging.getLogger(__name__)

# 정확히 1로 간주하는 허용 오차
SUM_TOLERANCE = 1e-9
# 0.33 × 3 = 0.99 같은 반올림된 설정값은 이 범위 안에서 재정규화해 받아준다
RENORMALIZE_TOLERANCE = 0.02


@dataclass(frozen=True)
class Preferences:
    alpha: float   # CompT 가중치
    beta: float    # TransT 가중치
    gamma: float   # CompL 가중치
    delta: float   # TransL 가중치

    def weights(self) -> Tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def label(self) -> str:
        return "(" + ", ".join(f"{w:g}" for w in self.weights()) + ")"


def validate_preferences(alpha: float, beta: float, gamma: float, delta: float) -> Preferences:
    """네 가중치를 검증해 Preferences를 만든다.

    - 음수 가중치 → NegativeWeightError
    - 합이 1 ± 1e-9 → 그대로 사용
    - 합이 1 ± 0.02 → 합이 정확히 1이 되도록 재정규화하고 경고 로그를 남긴다
    - 그 외 → SumNotOneError
    """
    weights = (float(alpha), float(beta), float(gamma), float(delta))
    for name, w in zip(("alpha", "beta", "gamma", "delta"), weights):
        if not math.isfinite(w) or w < 0:
            raise NegativeWeightError(f"preference {name} must be >= 0, got {w}")

    total = math.fsum(weights)
    if abs(total - 1.0) <= SUM_TOLERANCE:
        return Preferences(*weights)
    if total > 0 and abs(total - 1.0) <= RENORMALIZE_TOLERANCE:
        normalized = tuple(w / total for w in weights)
        logger.warning(
            "preferences.renormalized raw=%s sum=%.6f normalized=%s",
            weights, total, tuple(round(w, 6) for w in normalized),
        )
        return Preferences(*normalized)
    raise SumNotOneError(f"preference weights must sum to 1, got {total:.6f} for {weights}")


def preferences_from_sequence(values: Sequence[float]) -> Preferences:
    if len(values) != 4:
        raise SumNotOneError(f"preference vector needs 4 weights, got {len(values)}")
    return validate_preferences(*values)
