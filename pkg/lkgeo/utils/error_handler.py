"""
에러 핸들링 유틸리티 모듈
계산 오류를 표준 예외 계층과 종료 코드로 정리
"""
import logging
from typing import Optional, Sequence

logger = logging.getLogger(__name__)

# 종료 코드
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_SAMPLING_FAILED = 3

VALID_FORMATS = ["json", "csv", "text"]


class LkGeoError(Exception):
    """기하 계산 에러 기본 클래스"""
    def __init__(self, message: str, exit_code: int = EXIT_CHECK_FAILED, error_code: Optional[str] = None):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        super().__init__(self.message)


class ContractViolationError(LkGeoError):
    """입력 계약(차원, 전제조건) 위반"""
    def __init__(self, message: str, field: Optional[str] = None):
        error_code = f"CONTRACT_VIOLATION_{field.upper()}" if field else "CONTRACT_VIOLATION"
        super().__init__(message, exit_code=EXIT_INVALID_INPUT, error_code=error_code)
        self.field = field


class IllConditionedError(LkGeoError):
    """특이값 간격이 불분명한 경우"""
    def __init__(self, message: str, singular_values: Optional[Sequence[float]] = None):
        super().__init__(message, exit_code=EXIT_CHECK_FAILED, error_code="ILL_CONDITIONED")
        self.singular_values = [float(s) for s in (singular_values if singular_values is not None else [])]


class ConsistencyError(LkGeoError):
    """내부 일관성 검사 실패 (케일리-해밀턴, 이중 경로 등)"""
    def __init__(self, message: str, deviation: Optional[float] = None):
        super().__init__(message, exit_code=EXIT_CHECK_FAILED, error_code="CONSISTENCY")
        self.deviation = deviation


class ClassificationError(LkGeoError):
    """표준형 분류가 모호한 경우"""
    def __init__(self, message: str, candidates: Optional[Sequence[str]] = None):
        super().__init__(message, exit_code=EXIT_CHECK_FAILED, error_code="AMBIGUOUS_CLASSIFICATION")
        self.candidates = list(candidates) if candidates else []


class ExampleConstructionError(LkGeoError):
    """카탈로그 예제 생성 실패"""
    def __init__(self, message: str):
        super().__init__(message, exit_code=EXIT_INVALID_INPUT, error_code="INVALID_EXAMPLE")


class UnknownExampleError(LkGeoError):
    """알 수 없는 카탈로그 ID"""
    def __init__(self, message: str = "요청한 예제를 찾을 수 없습니다."):
        super().__init__(message, exit_code=EXIT_INVALID_INPUT, error_code="UNKNOWN_EXAMPLE")


class SamplingError(LkGeoError):
    """곡면 위 점 샘플링 실패"""
    def __init__(self, message: str = "샘플링에 실패했습니다."):
        super().__init__(message, exit_code=EXIT_SAMPLING_FAILED, error_code="SAMPLING_FAILED")


class RankDeficientSamplesError(LkGeoError):
    """설계 행렬의 계수 부족"""
    def __init__(self, message: str, rank: int = 0, expected: int = 0):
        super().__init__(message, exit_code=EXIT_SAMPLING_FAILED, error_code="RANK_DEFICIENT")
        self.rank = rank
        self.expected = expected


class UnsupportedInputError(LkGeoError):
    """연산의 가정 밖에 있는 입력"""
    def __init__(self, message: str):
        super().__init__(message, exit_code=EXIT_INVALID_INPUT, error_code="UNSUPPORTED_INPUT")


def handle_cli_error(error: Exception, context: Optional[str] = None) -> int:
    """
    예외를 로깅하고 종료 코드로 변환

    Args:
        error: 발생한 예외
        context: 에러 발생 컨텍스트 (예: "검증 실행")

    Returns:
        프로세스 종료 코드
    """
    context_str = f"{context}: " if context else ""

    if isinstance(error, LkGeoError):
        logger.error(f"{context_str}{error.message} (코드: {error.error_code})")
        return error.exit_code

    if isinstance(error, ValueError):
        logger.error(f"{context_str}검증 에러: {error}")
        return EXIT_INVALID_INPUT

    logger.error(f"{context_str}예외 발생: {type(error).__name__}: {error}", exc_info=True)
    return EXIT_CHECK_FAILED


def validate_k_range(k: int, n: int) -> None:
    """
    L_k 차수 검증 (0 ≤ k ≤ n-1)

    Raises:
        ContractViolationError: 범위를 벗어난 경우
    """
    if not 0 <= k <= n - 1:
        raise ContractViolationError(
            f"k는 0 이상 {n - 1} 이하여야 합니다. (입력값: {k}, n={n})",
            field="k"
        )


def validate_output_format(fmt: str) -> None:
    """
    보고서 형식 검증

    Raises:
        ContractViolationError: 지원하지 않는 형식인 경우
    """
    if fmt not in VALID_FORMATS:
        raise ContractViolationError(
            f"format은 {', '.join(VALID_FORMATS)} 중 하나여야 합니다.",
            field="format"
        )


def validate_suite(suite: str, valid_suites: Sequence[str]) -> None:
    """
    속성 검사 스위트 이름 검증

    Raises:
        ContractViolationError: 알 수 없는 스위트인 경우
    """
    if suite not in valid_suites:
        raise ContractViolationError(
            f"suite는 {', '.join(valid_suites)} 중 하나여야 합니다.",
            field="suite"
        )


def validate_dimension(array_shape: Sequence[int], expected: Sequence[int], field_name: str = "input") -> None:
    """
    배열 차원 검증

    Raises:
        ContractViolationError: 차원이 맞지 않는 경우
    """
    if tuple(array_shape) != tuple(expected):
        raise ContractViolationError(
            f"{field_name}의 차원이 {tuple(expected)}이어야 합니다. (입력값: {tuple(array_shape)})",
            field=field_name
        )
