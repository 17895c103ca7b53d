#!/usr/bin/env python3
"""
카탈로그 검증 스크립트
배포되는 모든 예제 ID 와 0 ≤ k ≤ n-1 에 대해 검증을 실행하고 한 줄씩 결과를 출력
"""
import argparse
import sys
from pathlib import Path

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from lkgeo.config import settings
from lkgeo.main import setup_logging
from lkgeo.services.catalog import build_example, shipped_example_ids
from lkgeo.services.verification import run_verification
from lkgeo.utils.error_handler import LkGeoError
from lkgeo.utils.report_writer import format_verification


def _file_name(example_id: str, k: int) -> str:
    safe = example_id.replace(":", "_").replace(",", "_").replace("=", "")
    return f"{safe}_k{k}.json"


def verify_catalog(seed: int, samples: int, out_dir: Path = None) -> int:
    """모든 배포 예제 검증, 실패 개수 반환"""
    print("=" * 80)
    print(f"카탈로그 검증 (seed={seed}, samples={samples})")
    print("=" * 80)

    failures = 0
    for example_id in shipped_example_ids():
        try:
            example = build_example(example_id)
        except LkGeoError as e:
            print(f"❌ {example_id}: 생성 실패 ({e.message})")
            failures += 1
            continue
        for k in range(example.n):
            try:
                report = run_verification(example, k=k, samples=samples, seed=seed)
            except LkGeoError as e:
                print(f"❌ {example_id} k={k}: {e.message}")
                failures += 1
                continue
            if out_dir is not None:
                out_dir.mkdir(parents=True, exist_ok=True)
                (out_dir / _file_name(example_id, k)).write_text(
                    format_verification(report, "json"), encoding="utf-8"
                )
            if report.all_passed:
                print(f"✅ {example_id} k={k}: {len(report.checks)}개 검사 통과 (잔차 {report.residual_max:.2e})")
            else:
                failures += 1
                names = ", ".join(check.name for check in report.failed_checks())
                print(f"❌ {example_id} k={k}: 실패 [{names}]")

    print("-" * 80)
    print(f"실패: {failures}")
    return failures


def main() -> int:
    parser = argparse.ArgumentParser(description="배포 예제 전체 검증")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    parser.add_argument("--out-dir", default=None, help="JSON 보고서 저장 디렉토리")
    args = parser.parse_args()
    setup_logging()
    out_dir = Path(args.out_dir) if args.out_dir else None
    return 1 if verify_catalog(args.seed, args.samples, out_dir) else 0


if __name__ == "__main__":
    sys.exit(main())
