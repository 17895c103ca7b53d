"""
보고서 출력 테스트
"""
import json

import pytest

from lkgeo import __version__
from lkgeo.services.catalog import list_families
from lkgeo.services.property_suites import SuiteResult
from lkgeo.services.verification import CheckResult, VerificationReport
from lkgeo.utils.error_handler import ContractViolationError
from lkgeo.utils.report_writer import (
    format_catalog,
    format_example,
    format_suites,
    format_verification,
    normalize_verification,
)


@pytest.fixture
def sample_report():
    """2차원 A 를 갖는 최소 보고서"""
    return VerificationReport(
        example_id="quadric:c=-1,R=J2,d=1",
        k=0,
        sample_count=60,
        seed=7,
        tol=1e-8,
        residual_max=3.2e-13,
        A_recovered=[[1.0, 0.0], [0.0, 1.0]],
        A_predicted=[[1.0, 0.0], [0.0, 1.0]],
        b_recovered=[0.0, 0.0],
        b_predicted=[0.0, 0.0],
        self_adjoint_defect=0.0,
        rank=3,
        nullity=0,
        classification="II",
        non_diagonalizable=True,
        checks=[
            CheckResult(name="residual", passed=True, measured=3.2e-13, bound=1e-6),
            CheckResult(name="A_match", passed=False, measured=0.5, bound=1e-6),
        ],
    )


@pytest.fixture
def suite_results():
    return [
        SuiteResult(suite="lemma1", trials=10, seed=0, max_deviation=1e-14, bound=1e-9, failures=0),
        SuiteResult(suite="charpoly", trials=10, seed=0, max_deviation=2e-7, bound=1e-8, failures=1),
    ]


class TestVerificationFormats:
    """검증 보고서 직렬화 테스트"""

    def test_normalized_structure(self, sample_report):
        """meta / results 구조"""
        payload = normalize_verification(sample_report)
        assert set(payload) == {"meta", "results"}
        assert payload["meta"]["samples"] == 60
        assert payload["meta"]["tool_version"] == __version__
        assert payload["results"]["checks"][0]["pass"] is True

    def test_json(self, sample_report):
        """JSON 출력은 다시 읽을 수 있음"""
        payload = json.loads(format_verification(sample_report, "json"))
        assert payload["meta"]["example_id"] == "quadric:c=-1,R=J2,d=1"
        assert payload["results"]["classification"] == "II"
        assert [c["name"] for c in payload["results"]["checks"]] == ["residual", "A_match"]

    def test_json_deterministic(self, sample_report):
        """같은 보고서는 같은 바이트"""
        assert format_verification(sample_report, "json") == format_verification(sample_report, "json")

    def test_csv(self, sample_report):
        """name,pass,measured,bound 헤더와 true/false"""
        lines = format_verification(sample_report, "csv").strip().split("\n")
        assert lines[0] == "name,pass,measured,bound"
        assert lines[1].startswith("residual,true,")
        assert lines[2].startswith("A_match,false,")
        assert len(lines) == 3

    def test_text(self, sample_report):
        """텍스트 요약"""
        text = format_verification(sample_report, "text")
        assert "[PASS] residual" in text
        assert "[FAIL] A_match" in text
        assert "통과 1/2" in text

    def test_invalid_format(self, sample_report):
        """지원하지 않는 형식"""
        with pytest.raises(ContractViolationError) as exc:
            format_verification(sample_report, "xml")
        assert exc.value.field == "format"


class TestSuiteFormats:
    """속성 검사 결과 직렬화 테스트"""

    def test_json(self, suite_results):
        payload = json.loads(format_suites(suite_results, "json"))
        assert payload["meta"]["suites"] == ["lemma1", "charpoly"]
        assert payload["results"]["checks"][1]["failures"] == 1

    def test_csv(self, suite_results):
        lines = format_suites(suite_results, "csv").strip().split("\n")
        assert lines[0] == "name,pass,measured,bound"
        assert lines[2].startswith("charpoly,false,")

    def test_text_reports_skips(self, suite_results):
        """건너뛴 시행 표시"""
        text = format_suites(suite_results, "text")
        assert "trials=10" in text
        assert "2건 건너뜀" in text

    def test_empty(self):
        """결과 없음"""
        payload = json.loads(format_suites([], "json"))
        assert payload["results"]["checks"] == []


class TestCatalogFormats:
    """카탈로그 출력 테스트"""

    def test_catalog_list(self):
        text = format_catalog(list_families())
        for family in ("umbilical", "product", "quadric", "kmaximal"):
            assert f"{family}:" in text

    def test_example_detail(self, j2_example):
        """부호, H_j, 모든 k 의 예측 (A, b)"""
        text = format_example(j2_example)
        assert "ε = 1" in text
        assert "H_0=1" in text
        assert "k=0: A =" in text
        assert "k=1: A =" in text
