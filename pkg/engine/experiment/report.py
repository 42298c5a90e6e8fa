from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from engine.core.compare import compare
from engine.core.preferences import Preferences
from engine.core.types import OVERHEAD_FIELDS, OverheadVector
from engine.experiment.config import PlannedRun
from engine.flsim.trace import TrainingTrace

# 실행 단위 CSV의 고정 열. 순서를 바꾸면 schema_version을 올려야 한다.
RUN_FIELDS: Tuple[str, ...] = (
    "pref_alpha", "pref_beta", "pref_gamma", "pref_delta",
    "seed",
    *OVERHEAD_FIELDS,
    "final_m", "final_e", "rounds", "status",
)


def _stats(values: Sequence[float]) -> Tuple[float, float]:
    # 평균과 모집단 표준편차(N으로 나눔). 빈 리스트이면 (0.0, 0.0)
    if not values:
        return 0.0, 0.0
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def prefs_column_names() -> List[str]:
    return list(RUN_FIELDS[:4])


def _prefs_columns(prefs: Optional[Preferences]) -> Dict[str, float]:
    weights = prefs.weights() if prefs is not None else (math.nan,) * 4
    return dict(zip(prefs_column_names(), weights))


def run_row(trace: TrainingTrace, prefs: Optional[Preferences] = None) -> Dict[str, Any]:
    row: Dict[str, Any] = _prefs_columns(prefs)
    row["seed"] = trace.seed
    row.update(trace.totals.to_dict())
    row["final_m"] = trace.final_m
    row["final_e"] = trace.final_e
    row["rounds"] = trace.rounds
    row["status"] = trace.status
    return row


def runs_frame(results: Sequence[Tuple[PlannedRun, TrainingTrace]]) -> pd.DataFrame:
    return pd.DataFrame([run_row(trace, plan.preferences) for plan, trace in results], columns=list(RUN_FIELDS))


# ---------------------------------------------------------------------------
# 비교 보고서
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArmSummary:
    """같은 설정을 seed만 바꿔 반복한 실행들의 요약."""

    mean: OverheadVector
    std: OverheadVector
    final_m: Tuple[float, float]        # (평균, 표준편차)
    final_e: Tuple[float, float]
    rounds: Tuple[float, float]
    runs: int
    reached: int                        # 목표 정확도에 도달한 실행 수


def summarize_arm(traces: Sequence[TrainingTrace]) -> ArmSummary:
    if not traces:
        raise ValueError("cannot summarize an arm with no runs")
    columns = list(zip(*(t.totals.as_tuple() for t in traces)))
    stats = [_stats(list(col)) for col in columns]
    return ArmSummary(
        mean=OverheadVector(*(s[0] for s in stats)),
        std=OverheadVector(*(s[1] for s in stats)),
        final_m=_stats([float(t.final_m) for t in traces]),
        final_e=_stats([float(t.final_e) for t in traces]),
        rounds=_stats([float(t.rounds) for t in traces]),
        runs=len(traces),
        reached=sum(1 for t in traces if t.status == "reached_target"),
    )


def overall_score(baseline: OverheadVector, fedtune: OverheadVector, prefs: Preferences) -> float:
    # 양수 = 개선. compare(기준선, FedTune)가 음수일수록 FedTune이 낫다.
    # + 0.0은 같은 오버헤드에서 -0.0 대신 0.0을 돌려준다
    return -compare(baseline, fedtune, prefs) * 100.0 + 0.0


@dataclass(frozen=True)
class PreferenceResult:
    preferences: Preferences
    arm: ArmSummary
    mean_score: float                   # 기준선 평균 vs 이 행의 평균 오버헤드 (%)
    scores: Tuple[float, ...]           # seed별 점수 (%). 표준편차에만 쓰인다

    @property
    def score(self) -> Tuple[float, float]:
        # (평균, 표준편차). 평균은 seed 평균 오버헤드끼리 비교하므로 같은 오버헤드면 정확히 0이다
        return self.mean_score, _stats(list(self.scores))[1]


@dataclass(frozen=True)
class ComparisonReport:
    target_accuracy: float
    baseline: ArmSummary
    rows: Tuple[PreferenceResult, ...]

    @property
    def grand_mean(self) -> float:
        # 선호도 행별 평균 점수의 단순 평균
        if not self.rows:
            return 0.0
        return math.fsum(r.score[0] for r in self.rows) / len(self.rows)

    @property
    def negative_rows(self) -> int:
        return sum(1 for r in self.rows if r.score[0] < 0)


def build_comparison(
    baseline: Sequence[TrainingTrace],
    fedtune: Sequence[Tuple[Preferences, TrainingTrace]],
    target_accuracy: float,
) -> ComparisonReport:
    """기준선 평균 오버헤드 대비 선호도 행별 점수를 계산한다.

    fedtune은 (선호도, 트레이스) 쌍이며 같은 선호도끼리 묶여 한 행이 된다.
    행 순서는 처음 등장한 순서를 따른다.
    """
    base = summarize_arm(baseline)
    grouped: Dict[Preferences, List[TrainingTrace]] = {}
    for prefs, trace in fedtune:
        grouped.setdefault(prefs, []).append(trace)
    rows: List[PreferenceResult] = []
    for prefs, traces in grouped.items():
        arm = summarize_arm(traces)
        rows.append(PreferenceResult(
            preferences=prefs,
            arm=arm,
            mean_score=overall_score(base.mean, arm.mean, prefs),
            scores=tuple(overall_score(base.mean, t.totals, prefs) for t in traces),
        ))
    return ComparisonReport(target_accuracy=target_accuracy, baseline=base, rows=tuple(rows))


def _arm_columns(arm: ArmSummary) -> Dict[str, Any]:
    row: Dict[str, Any] = {}
    for name, mean, std in zip(OVERHEAD_FIELDS, arm.mean, arm.std):
        row[f"{name}_mean"] = mean
        row[f"{name}_std"] = std
    row["final_m_mean"], row["final_m_std"] = arm.final_m
    row["final_e_mean"], row["final_e_std"] = arm.final_e
    row["rounds_mean"], row["rounds_std"] = arm.rounds
    row["runs"] = arm.runs
    row["reached"] = arm.reached
    return row


def comparison_frame(report: ComparisonReport) -> pd.DataFrame:
    # 선호도 열 + 오버헤드 평균(표준편차) + 최종 M, E + overall 점수.
    # 첫 행은 기준선, 마지막 행은 선호도 행 점수의 단순 평균(grand_mean)
    rows: List[Dict[str, Any]] = []
    base = {"arm": "baseline", **_prefs_columns(None), **_arm_columns(report.baseline)}
    base["overall_pct_mean"], base["overall_pct_std"] = 0.0, 0.0
    rows.append(base)
    for result in report.rows:
        row = {"arm": "fedtune", **_prefs_columns(result.preferences), **_arm_columns(result.arm)}
        row["overall_pct_mean"], row["overall_pct_std"] = result.score
        rows.append(row)
    rows.append({"arm": "grand_mean", **_prefs_columns(None), "overall_pct_mean": report.grand_mean})
    return pd.DataFrame(rows)


def trajectory_frame(results: Sequence[Tuple[PlannedRun, TrainingTrace]]) -> pd.DataFrame:
    # 실행별 라운드 단위 (M, E, 정확도) 궤적. 외부 도구로 그래프를 그릴 때 쓴다.
    rows = []
    for plan, trace in results:
        prefs = _prefs_columns(plan.preferences)
        for record in trace.records:
            rows.append({
                **prefs,
                "seed": trace.seed,
                "round": record.round,
                "m": record.m,
                "e": record.e,
                "accuracy": record.accuracy,
            })
    return pd.DataFrame(rows, columns=[*prefs_column_names(), "seed", "round", "m", "e", "accuracy"])


# ---------------------------------------------------------------------------
# 스윕
# ---------------------------------------------------------------------------

def sweep_frame(results: Sequence[Tuple[PlannedRun, TrainingTrace]]) -> pd.DataFrame:
    """(은닉층 폭, M, E, seed)마다 한 행. 목표까지의 오버헤드 총합과 정규화 열.

    정규화는 은닉층 폭별 격자 최솟값으로 나눈다. 폭이 하나면 격자 전체의 최솟값이다.
    """
    rows = []
    for plan, trace in results:
        row: Dict[str, Any] = {
            "hidden_dim": plan.run.model.hidden_dim, "m": plan.m, "e": plan.e, "seed": trace.seed,
        }
        row.update(trace.totals.to_dict())
        row["rounds"] = trace.rounds
        row["status"] = trace.status
        rows.append(row)
    frame = pd.DataFrame(rows, columns=["hidden_dim", "m", "e", "seed", *OVERHEAD_FIELDS, "rounds", "status"])
    for name in OVERHEAD_FIELDS:
        low = frame.groupby("hidden_dim")[name].transform("min") if not frame.empty else frame[name]
        frame[f"{name}_norm"] = (frame[name] / low).where(low > 0, math.nan)
    return frame


def sweep_pivots(frame: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    # 지표별 정규화 평균 표 (행 M, 열 E). seed 평균. 폭이 여럿이면 행이 (은닉층 폭, M)
    index = ["hidden_dim", "m"] if frame["hidden_dim"].nunique() > 1 else "m"
    return {
        name: frame.pivot_table(index=index, columns="e", values=f"{name}_norm", aggfunc="mean")
        for name in OVERHEAD_FIELDS
    }


def overhead_at_accuracy_frame(
    results: Sequence[Tuple[PlannedRun, TrainingTrace]],
    levels: Sequence[float],
) -> pd.DataFrame:
    """실행 × 정확도 수준마다 한 행. 그 수준에 처음 도달한 라운드의 누적 오버헤드.

    도달하지 못한 수준은 round와 오버헤드 열이 NaN이다.
    """
    rows = []
    for plan, trace in results:
        for level in levels:
            hit = next((r for r in trace.records if r.accuracy >= level), None)
            row: Dict[str, Any] = {
                "hidden_dim": plan.run.model.hidden_dim,
                "m": plan.m,
                "e": plan.e,
                "seed": trace.seed,
                "accuracy_level": level,
                "round": hit.round if hit is not None else math.nan,
            }
            for name in OVERHEAD_FIELDS:
                row[name] = getattr(hit.cumulative, name) if hit is not None else math.nan
            rows.append(row)
    return pd.DataFrame(
        rows, columns=["hidden_dim", "m", "e", "seed", "accuracy_level", "round", *OVERHEAD_FIELDS]
    )
