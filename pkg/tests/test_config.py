"""
설정 및 모니터링 테스트
"""
import time

import pytest

from lkgeo.config import Settings
from lkgeo.utils.monitoring import get_timing_summary, measure_time, reset_timings, track_timing


class TestSettings:
    """환경 변수 기반 설정 테스트"""

    def test_defaults(self):
        settings = Settings(_env_file=None)
        assert settings.TOL == 1e-8
        assert settings.DEFAULT_SAMPLES == 500

    def test_env_prefix(self, monkeypatch):
        """LKGEO_ 접두사 환경 변수"""
        monkeypatch.setenv("LKGEO_TOL", "1e-6")
        monkeypatch.setenv("LKGEO_DEFAULT_SEED", "7")
        settings = Settings(_env_file=None)
        assert settings.TOL == 1e-6
        assert settings.DEFAULT_SEED == 7

    def test_case_sensitive(self, monkeypatch):
        """소문자 변수는 무시"""
        monkeypatch.setenv("lkgeo_TOL", "0.5")
        assert Settings(_env_file=None).TOL == 1e-8


class TestMonitoring:
    """소요 시간 기록 테스트"""

    def test_measure_time(self):
        with measure_time("work"):
            time.sleep(0.001)
        summary = get_timing_summary()
        assert summary["work"]["count"] == 1
        assert summary["work"]["max"] >= 0.0

    def test_records_on_exception(self):
        """예외가 나도 기록"""
        try:
            with measure_time("failing"):
                raise RuntimeError("x")
        except RuntimeError:
            pass
        assert get_timing_summary()["failing"]["count"] == 1

    def test_labels_in_key(self):
        """레이블은 작업 이름 뒤에 붙음"""
        with measure_time("verify", example="quadric:c=-1,R=J2,d=1", k=0) as record:
            pass
        assert record.key == "verify:example=quadric:c=-1,R=J2,d=1:k=0"
        assert record.elapsed >= 0.0
        assert get_timing_summary()[record.key]["count"] == 1

    def test_failure_counted(self):
        """예외로 끝난 실행은 failures 에 집계"""
        with pytest.raises(RuntimeError):
            with measure_time("props", suite="lemma1") as record:
                raise RuntimeError("x")
        assert record.failed
        assert get_timing_summary()["props:suite=lemma1"]["failures"] == 1

    def test_keeps_latest_samples(self):
        """작업별 최근 1000개 유지"""
        for i in range(1005):
            track_timing("many", float(i))
        assert get_timing_summary()["many"]["count"] == 1000

    def test_reset(self):
        track_timing("x", 1.0)
        reset_timings()
        assert get_timing_summary() == {}
