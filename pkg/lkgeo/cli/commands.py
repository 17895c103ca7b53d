"""
CLI 명령 처리
입력 검증, 서비스 호출, 에러를 종료 코드로 변환
"""
import logging
import sys
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from lkgeo.config import settings
from lkgeo.services.catalog import build_example, list_families
from lkgeo.services.property_suites import VALID_SUITES, run_suites
from lkgeo.services.verification import run_verification
from lkgeo.utils.error_handler import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    VALID_FORMATS,
    handle_cli_error,
    validate_k_range,
    validate_output_format,
    validate_suite,
)
from lkgeo.utils.report_writer import format_catalog, format_example, format_suites, format_verification

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    """verify 실행 설정"""
    example_id: str
    k: int
    samples: int = Field(default_factory=lambda: settings.DEFAULT_SAMPLES)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, lt=2 ** 64)
    tol: float = Field(default_factory=lambda: settings.TOL, gt=0)
    format: str = "json"
    enforce_self_adjoint: bool = False
    out: Optional[str] = None

    @field_validator("format")
    @classmethod
    def _check_format(cls, v: str) -> str:
        if v not in VALID_FORMATS:
            raise ValueError(f"format은 {', '.join(VALID_FORMATS)} 중 하나여야 합니다.")
        return v


def _emit(text: str, out: Optional[str] = None) -> None:
    """보고서를 파일 또는 stdout 으로 출력"""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"보고서 저장: {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def cmd_catalog_list(c: Optional[int] = None) -> int:
    """예제 계열과 매개변수 스키마, 배포 인스턴스 출력"""
    try:
        if c is not None and c not in (1, -1):
            raise ValueError(f"c는 +1 또는 -1이어야 합니다. (입력값: {c})")
        _emit(format_catalog(list_families(c)))
        return EXIT_OK
    except Exception as e:
        return handle_cli_error(e, "카탈로그 목록")


def cmd_catalog_show(example_id: str) -> int:
    """예제 하나의 부호, 주곡률, H_j, 예측 (A, b) 출력"""
    try:
        _emit(format_example(build_example(example_id)))
        return EXIT_OK
    except Exception as e:
        return handle_cli_error(e, f"카탈로그 조회 ({example_id})")


def cmd_verify(cfg: RunConfig) -> int:
    """
    예제 검증 실행

    모든 검사가 통과하면 0, 검사 실패 시 보고서를 출력한 뒤 1 을 돌려준다.
    """
    try:
        logger.info(f"검증 요청: {cfg.example_id} (k={cfg.k}, samples={cfg.samples}, seed={cfg.seed})")
        example = build_example(cfg.example_id)
        validate_k_range(cfg.k, example.n)
        validate_output_format(cfg.format)
        report = run_verification(
            example,
            k=cfg.k,
            samples=cfg.samples,
            seed=cfg.seed,
            tol=cfg.tol,
            enforce_self_adjoint=cfg.enforce_self_adjoint,
        )
        _emit(format_verification(report, cfg.format), cfg.out)
        if not report.all_passed:
            failed = ", ".join(check.name for check in report.failed_checks())
            logger.error(f"검증 실패 ({cfg.example_id}, seed={cfg.seed}): {failed}")
            return EXIT_CHECK_FAILED
        return EXIT_OK
    except Exception as e:
        return handle_cli_error(e, f"검증 실행 ({cfg.example_id})")


def cmd_props(suite: str = "all", trials: int = 1000, seed: int = 0, fmt: str = "text") -> int:
    """속성 검사 모음 실행, 실패가 있으면 1"""
    try:
        validate_suite(suite, VALID_SUITES)
        results = run_suites(suite, trials=trials, seed=seed)
        _emit(format_suites(results, fmt))
        failing = [r for r in results if not r.passed]
        if failing:
            names = ", ".join(r.suite for r in failing)
            logger.error(f"속성 검사 실패 (seed={seed}): {names}")
            return EXIT_CHECK_FAILED
        return EXIT_OK
    except Exception as e:
        return handle_cli_error(e, f"속성 검사 ({suite})")


def build_run_config(**kwargs) -> Optional[RunConfig]:
    """argparse 값으로 RunConfig 생성 (None 인 값은 설정 기본값 사용)"""
    values = {key: value for key, value in kwargs.items() if value is not None}
    try:
        return RunConfig(**values)
    except ValidationError as e:
        messages = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        logger.error(f"실행 설정 오류: {messages}")
        return None

