from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Literal, Optional, Tuple

from engine.core.types import CostConstants, OverheadVector

TraceStatus = Literal["reached_target", "exhausted_max_rounds"]


def _passes(e: float) -> float | int:
    # E는 정수면 정수로 기록한다 (JSON에서 20.0 대신 20)
    return int(e) if float(e) == int(e) else float(e)


# 라운드 하나의 기록. run_training이 라운드마다 하나씩 만든다.
@dataclass(frozen=True)
class RoundRecord:
    round: int                              # 1부터 시작
    m: int
    e: float
    participants: Tuple[int, ...]           # 오름차순 client id
    sizes: Tuple[int, ...]                  # participants와 같은 순서의 n_k
    round_overhead: OverheadVector
    cumulative: OverheadVector
    accuracy: float
    decision: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "round",
            "round": self.round,
            "m": self.m,
            "e": _passes(self.e),
            "participants": list(self.participants),
            "sizes": list(self.sizes),
            "round_overhead": self.round_overhead.to_dict(),
            "cumulative": self.cumulative.to_dict(),
            "accuracy": self.accuracy,
            "decision": self.decision,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RoundRecord":
        return cls(
            round=int(data["round"]),
            m=int(data["m"]),
            e=float(data["e"]),
            participants=tuple(int(x) for x in data["participants"]),
            sizes=tuple(int(x) for x in data["sizes"]),
            round_overhead=OverheadVector.from_dict(data["round_overhead"]),
            cumulative=OverheadVector.from_dict(data["cumulative"]),
            accuracy=float(data["accuracy"]),
            decision=data.get("decision"),
        )


@dataclass(frozen=True)
class TrainingTrace:
    """학습 실행 한 번의 전체 기록.

    status가 reached_target이면 마지막 라운드가 처음으로 목표 정확도에 도달한 라운드(R)다.
    """

    records: Tuple[RoundRecord, ...]
    status: TraceStatus
    target_accuracy: float
    cost: CostConstants
    seed: int
    aggregator: str = "fedavg"
    tuner_enabled: bool = False

    @property
    def rounds(self) -> int:
        return len(self.records)

    @property
    def rounds_to_target(self) -> Optional[int]:
        return self.rounds if self.status == "reached_target" else None

    @property
    def totals(self) -> OverheadVector:
        return self.records[-1].cumulative if self.records else OverheadVector()

    @property
    def final_accuracy(self) -> float:
        return self.records[-1].accuracy if self.records else 0.0

    @property
    def final_m(self) -> int:
        return self.records[-1].m if self.records else 0

    @property
    def final_e(self) -> float:
        return self.records[-1].e if self.records else 0.0

    def summary(self) -> Dict[str, Any]:
        return {
            "type": "summary",
            "status": self.status,
            "rounds": self.rounds,
            "rounds_to_target": self.rounds_to_target,
            "target_accuracy": self.target_accuracy,
            "final_accuracy": self.final_accuracy,
            "final_m": self.final_m,
            "final_e": _passes(self.final_e),
            "totals": self.totals.to_dict(),
            "cost": {"c1": self.cost.c1, "c2": self.cost.c2, "c3": self.cost.c3, "c4": self.cost.c4},
            "seed": self.seed,
            "aggregator": self.aggregator,
            "tuner_enabled": self.tuner_enabled,
        }

    @classmethod
    def from_records(cls, records: Tuple[RoundRecord, ...], summary: Dict[str, Any]) -> "TrainingTrace":
        cost = summary["cost"]
        return cls(
            records=tuple(records),
            status=summary["status"],
            target_accuracy=float(summary["target_accuracy"]),
            cost=CostConstants(float(cost["c1"]), float(cost["c2"]), float(cost["c3"]), float(cost["c4"])),
            seed=int(summary["seed"]),
            aggregator=str(summary.get("aggregator", "fedavg")),
            tuner_enabled=bool(summary.get("tuner_enabled", False)),
        )
