from __future__ import annotations


# 실험 설정(선호도 벡터)이 잘못되었을 때의 공통 부모 예외.
# ValueError를 상속하므로 "잘못된 입력"에 해당하는 의미를 가진다.
class InvalidPreferencesError(ValueError):
    """Preference vector is not a valid experiment configuration."""


class NegativeWeightError(InvalidPreferencesError):
    """A preference weight is negative."""


class SumNotOneError(InvalidPreferencesError):
    """Preference weights do not sum to one."""


# 비교 함수나 ΔM/ΔE 계산에서 분모가 0일 때 발생한다.
# 대부분 기준 구간(S1, cur)의 오버헤드가 측정되지 않은 경우다.
class ZeroDenominatorError(ValueError):
    """A relative-delta denominator is zero for a nonzero preference weight."""


class EmptyParticipantsError(ValueError):
    """A round was accounted with no participants."""


class NonPositiveError(ValueError):
    """A quantity that must be strictly positive is not."""


class InvalidParamError(ValueError):
    """Generator, model or training parameter outside its admitted range."""


# 튜너 상태 머신의 사용 순서가 잘못되었을 때 발생한다.
# 체크포인트 3개가 쌓이기 전에 ΔM/ΔE를 계산하려 하면 여기에 해당한다.
class InsufficientHistoryError(RuntimeError):
    """Tuner operation needs three checkpoints but fewer are recorded."""


# 누적 오버헤드가 이전 관측보다 줄어들었을 때 발생한다.
# 정상적인 하네스에서는 일어날 수 없으므로 회계(accounting) 버그를 의미한다.
class NonMonotoneOverheadError(RuntimeError):
    """Cumulative overhead decreased between two observations."""


class EmptyShardError(ValueError):
    """A client shard holds no data points."""


class EmptyDatasetError(ValueError):
    """An evaluation dataset holds no data points."""


class ParseError(ValueError):
    """A dataset or config file could not be parsed."""


class SchemaMismatchError(ValueError):
    """Dataset files do not share the expected columns."""


class MTooLargeError(ValueError):
    """More participants requested than clients exist."""


class ShapeMismatchError(ValueError):
    """Model parameter vectors of different shapes were combined."""


# 실험 설정 파일(TOML)이 파싱되지 않거나 스키마 검증에 실패했을 때 발생한다.
# CLI는 이 예외를 종료 코드 2로 변환한다.
class ConfigError(ValueError):
    """Experiment configuration is malformed or fails validation."""
