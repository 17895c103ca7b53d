"""
lkgeo CLI 메인
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# 프로젝트 루트를 Python 경로에 추가 (lkgeo 디렉토리에서 직접 실행하는 경우)
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from lkgeo import __version__
from lkgeo.cli.commands import (
    build_run_config,
    cmd_catalog_list,
    cmd_catalog_show,
    cmd_props,
    cmd_verify,
)
from lkgeo.config import settings
from lkgeo.services.property_suites import VALID_SUITES
from lkgeo.utils.error_handler import EXIT_INVALID_INPUT, VALID_FORMATS

logger = logging.getLogger(__name__)


def setup_logging(level: Optional[str] = None) -> None:
    """stderr (및 선택적 로그 파일) 로깅 설정, stdout 은 보고서 전용"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_FILE:
        try:
            log_path = Path(settings.LOG_FILE)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(settings.LOG_FILE))
        except Exception as e:
            logger.warning(f"로그 파일 생성 실패: {e}")

    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lkgeo",
        description="로렌츠 공간형식 초곡면의 L_k 연산자 계산 및 L_kψ = Aψ + b 검증 도구",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="로그 레벨 (기본값: LKGEO_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    catalog = sub.add_parser("catalog", help="예제 카탈로그")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)
    catalog_list = catalog_sub.add_parser("list", help="예제 계열 목록")
    catalog_list.add_argument("--c", type=int, default=None, choices=[1, -1], help="공간형식 부호 필터")
    catalog_show = catalog_sub.add_parser("show", help="예제 상세")
    catalog_show.add_argument("example_id", help="예: product:c=1,d1=1,rho=1,r=0.6,m=1")

    verify = sub.add_parser("verify", help="L_kψ = Aψ + b 검증")
    verify.add_argument("--example", required=True, help="카탈로그 ID")
    verify.add_argument("--k", type=int, required=True, help="연산자 차수 (0 ≤ k ≤ n-1)")
    verify.add_argument("--samples", type=int, default=None, help=f"샘플 수 (기본값: {settings.DEFAULT_SAMPLES})")
    verify.add_argument("--seed", type=int, default=None, help=f"난수 시드 (기본값: {settings.DEFAULT_SEED})")
    verify.add_argument("--tol", type=float, default=None, help=f"허용 오차 (기본값: {settings.TOL})")
    verify.add_argument("--format", default="json", choices=VALID_FORMATS, help="보고서 형식")
    verify.add_argument("--enforce-self-adjoint", action="store_true", help="A 를 계량 자기수반 부분공간에서 복원")
    verify.add_argument("--out", default=None, help="보고서 파일 경로 (기본값: stdout)")

    props = sub.add_parser("props", help="무작위 속성 검사")
    props.add_argument("--suite", default="all", choices=list(VALID_SUITES), help="검사 모음")
    props.add_argument("--trials", type=int, default=1000, help="시행 횟수")
    props.add_argument("--seed", type=int, default=0, help="난수 시드")
    props.add_argument("--format", default="text", choices=VALID_FORMATS, help="출력 형식")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI 진입점

    Returns:
        종료 코드 (0 통과, 1 검사 실패, 2 잘못된 입력, 3 샘플링 실패)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 사용법 오류는 잘못된 입력으로 취급
        return EXIT_INVALID_INPUT if e.code else 0

    setup_logging(args.log_level)

    if args.command == "catalog":
        if args.catalog_command == "list":
            return cmd_catalog_list(args.c)
        return cmd_catalog_show(args.example_id)

    if args.command == "verify":
        cfg = build_run_config(
            example_id=args.example,
            k=args.k,
            samples=args.samples,
            seed=args.seed,
            tol=args.tol,
            format=args.format,
            enforce_self_adjoint=args.enforce_self_adjoint,
            out=args.out,
        )
        if cfg is None:
            return EXIT_INVALID_INPUT
        return cmd_verify(cfg)

    return cmd_props(args.suite, trials=args.trials, seed=args.seed, fmt=args.format)


if __name__ == "__main__":
    sys.exit(main())
