"""
보고서 출력 유틸리티
검증 결과와 속성 검사 결과를 meta/results 표준 구조로 정규화하여 json, csv, text 로 직렬화합니다.
"""
import csv
import io
import json
import logging
from typing import Any, Dict, List

from lkgeo import __version__
from lkgeo.services.catalog import FamilyInfo, HypersurfaceExample
from lkgeo.services.property_suites import SuiteResult
from lkgeo.services.verification import VerificationReport
from lkgeo.utils.error_handler import validate_output_format

logger = logging.getLogger(__name__)

CSV_FIELDS = ["name", "pass", "measured", "bound"]


def normalize_verification(report: VerificationReport) -> Dict[str, Any]:
    """
    검증 보고서를 {meta, results} 구조로 정규화

    시각 정보는 넣지 않으므로 같은 입력에는 같은 출력이 나온다.
    """
    return {
        "meta": {
            "example_id": report.example_id,
            "k": report.k,
            "seed": report.seed,
            "tol": report.tol,
            "samples": report.sample_count,
            "tool_version": report.tool_version,
        },
        "results": {
            "residual_max": report.residual_max,
            "A_recovered": report.A_recovered,
            "A_predicted": report.A_predicted,
            "b_recovered": report.b_recovered,
            "b_predicted": report.b_predicted,
            "self_adjoint_defect": report.self_adjoint_defect,
            "rank": report.rank,
            "nullity": report.nullity,
            "classification": report.classification,
            "non_diagonalizable": report.non_diagonalizable,
            "checks": [check.model_dump(by_alias=True) for check in report.checks],
        },
    }


def normalize_suites(results: List[SuiteResult]) -> Dict[str, Any]:
    """속성 검사 결과 정규화"""
    first = results[0] if results else None
    return {
        "meta": {
            "suites": [r.suite for r in results],
            "trials": first.trials if first else 0,
            "seed": first.seed if first else 0,
            "tool_version": __version__,
        },
        "results": {
            "checks": [
                {
                    "name": r.suite,
                    "pass": r.passed,
                    "measured": r.max_deviation,
                    "bound": r.bound,
                    "failures": r.failures,
                }
                for r in results
            ],
        },
    }


def _json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=False)


def _csv(checks: List[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for check in checks:
        writer.writerow({
            "name": check["name"],
            "pass": "true" if check["pass"] else "false",
            "measured": repr(float(check["measured"])),
            "bound": repr(float(check["bound"])),
        })
    return buffer.getvalue()


def _text_checks(checks: List[Dict[str, Any]]) -> List[str]:
    width = max((len(check["name"]) for check in checks), default=0)
    lines = []
    for check in checks:
        status = "PASS" if check["pass"] else "FAIL"
        lines.append(f"  [{status}] {check['name']:<{width}}  {check['measured']:.3e} <= {check['bound']:.3e}")
    return lines


def format_verification(report: VerificationReport, fmt: str = "json") -> str:
    """
    검증 보고서 직렬화

    Raises:
        ContractViolationError: 지원하지 않는 형식
    """
    validate_output_format(fmt)
    payload = normalize_verification(report)
    checks = payload["results"]["checks"]
    if fmt == "json":
        return _json(payload)
    if fmt == "csv":
        return _csv(checks)

    meta = payload["meta"]
    lines = [
        "=" * 80,
        f"{meta['example_id']}  k={meta['k']}  samples={meta['samples']}  seed={meta['seed']}",
        "=" * 80,
        f"잔차 최대값: {report.residual_max:.3e}  (계수 {report.rank}, 영공간 {report.nullity})",
        f"형상 연산자 유형: {report.classification or '-'}",
    ]
    if report.non_diagonalizable is not None:
        lines.append(f"A 비대각화 여부: {report.non_diagonalizable}")
    lines.append("A (복원):")
    lines.extend("  " + " ".join(f"{v: .6f}" for v in row) for row in report.A_recovered)
    lines.append("b (복원): " + " ".join(f"{v: .6f}" for v in report.b_recovered))
    lines.append("검사:")
    lines.extend(_text_checks(checks))
    passed = sum(1 for check in checks if check["pass"])
    lines.append(f"통과 {passed}/{len(checks)}")
    return "\n".join(lines) + "\n"


def format_suites(results: List[SuiteResult], fmt: str = "text") -> str:
    """속성 검사 결과 직렬화"""
    validate_output_format(fmt)
    payload = normalize_suites(results)
    checks = payload["results"]["checks"]
    if fmt == "json":
        return _json(payload)
    if fmt == "csv":
        return _csv(checks)
    lines = [f"속성 검사 (trials={payload['meta']['trials']}, seed={payload['meta']['seed']})"]
    lines.extend(_text_checks(checks))
    return "\n".join(lines) + "\n"


def format_catalog(families: List[FamilyInfo]) -> str:
    """catalog list 출력"""
    lines = []
    for info in families:
        lines.append(f"{info.name}: {info.realizes}")
        lines.append(f"  매개변수: {info.schema}")
        lines.extend(f"  - {instance}" for instance in info.instances)
    return "\n".join(lines) + "\n"


def format_example(example: HypersurfaceExample) -> str:
    """catalog show 출력: 매개변수, 부호, 주곡률, 닫힌 형태 H_j, 예측 (A, b)"""
    lines = [
        f"id: {example.id}",
        f"계열: {example.family}",
        f"등거리 유형: {example.metadata}",
        f"c = {example.c}, n = {example.n}, ε = {example.eps}",
        f"형상 연산자 유형: {example.expected_kind.value}",
    ]
    if example.principal_curvatures:
        lines.append("주곡률: " + ", ".join(f"{v:.6g}" for v in example.principal_curvatures))
    lines.append("H_j: " + ", ".join(f"H_{j}={v:.6g}" for j, v in enumerate(example.closed_H)))
    for key, value in example.details.items():
        lines.append(f"{key}: {value:.6g}")
    for k in range(example.n):
        A, b = example.affine_rule(k)
        lines.append(f"k={k}: A =")
        lines.extend("  " + " ".join(f"{v: .6f}" for v in row) for row in A)
        lines.append("       b = " + " ".join(f"{v: .6f}" for v in b))
    return "\n".join(lines) + "\n"
