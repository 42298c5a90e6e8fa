from __future__ import annotations

from typing import List, Sequence, Tuple

from engine.core.preferences import Preferences, preferences_from_sequence

PreferenceRow = Tuple[float, float, float, float]

_THIRD = 1.0 / 3.0

# 비교 실험의 기본 선호도 격자 15행 (α, β, γ, δ).
# 순서: 균등 1개, 단일 항목 4개, 두 항목 0.5씩 6개, 세 항목 1/3씩 4개
DEFAULT_PREFERENCE_GRID: Tuple[PreferenceRow, ...] = (
    (0.25, 0.25, 0.25, 0.25),
    (1.0, 0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0, 0.0),
    (0.0, 0.0, 1.0, 0.0),
    (0.0, 0.0, 0.0, 1.0),
    (0.5, 0.5, 0.0, 0.0),
    (0.5, 0.0, 0.5, 0.0),
    (0.5, 0.0, 0.0, 0.5),
    (0.0, 0.5, 0.5, 0.0),
    (0.0, 0.5, 0.0, 0.5),
    (0.0, 0.0, 0.5, 0.5),
    (_THIRD, _THIRD, _THIRD, 0.0),
    (_THIRD, _THIRD, 0.0, _THIRD),
    (_THIRD, 0.0, _THIRD, _THIRD),
    (0.0, _THIRD, _THIRD, _THIRD),
)


def preference_grid(rows: Sequence[Sequence[float]] = DEFAULT_PREFERENCE_GRID) -> List[Preferences]:
    # 각 행을 검증된 Preferences로 바꾼다. 0.33처럼 반올림된 값은 재정규화된다.
    return [preferences_from_sequence(row) for row in rows]


def sweep_grid(m_values: Sequence[int], e_values: Sequence[float]) -> List[Tuple[int, float]]:
    # (M, E) 조합을 M 우선 순서로 나열한다
    return [(m, e) for m in m_values for e in e_values]
