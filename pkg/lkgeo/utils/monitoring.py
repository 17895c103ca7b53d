"""
성능 모니터링 유틸리티
검증 실행과 속성 스위트의 소요 시간 추적
"""
import time
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List
from contextlib import contextmanager

logger = logging.getLogger(__name__)

# 작업별 최근 기록 수
MAX_SAMPLES = 1000

# 메모리 기반 타이밍 저장소
_timings_store: Dict[str, List[float]] = {}
_failures_store: Dict[str, int] = {}


@dataclass
class TimingRecord:
    """측정 중인 작업 하나 (블록을 벗어나면 elapsed 가 채워짐)"""
    operation: str
    labels: Dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0
    failed: bool = False

    @property
    def key(self) -> str:
        """저장소 키: verify:example=…:k=0 형태"""
        if not self.labels:
            return self.operation
        return ":".join([self.operation] + [f"{name}={value}" for name, value in self.labels.items()])


def track_timing(operation_name: str, elapsed: float, failed: bool = False) -> None:
    """
    작업 소요 시간 기록

    Args:
        operation_name: 작업 이름
        elapsed: 소요 시간 (초)
        failed: 예외로 끝난 실행이면 True
    """
    samples = _timings_store.setdefault(operation_name, [])
    samples.append(elapsed)
    if len(samples) > MAX_SAMPLES:
        _timings_store[operation_name] = samples[-MAX_SAMPLES:]
    if failed:
        _failures_store[operation_name] = _failures_store.get(operation_name, 0) + 1


def get_timing_summary() -> Dict[str, Dict[str, Any]]:
    """
    작업별 소요 시간 요약 반환

    Returns:
        {작업 이름: {count, failures, total, avg, max}} 딕셔너리
    """
    summary: Dict[str, Dict[str, Any]] = {}
    for name, samples in _timings_store.items():
        if not samples:
            continue
        summary[name] = {
            "count": len(samples),
            "failures": _failures_store.get(name, 0),
            "total": round(sum(samples), 3),
            "avg": round(sum(samples) / len(samples), 3),
            "max": round(max(samples), 3),
        }
    return summary


def reset_timings() -> None:
    """타이밍 저장소 초기화"""
    _timings_store.clear()
    _failures_store.clear()


@contextmanager
def measure_time(operation: str, **labels: Any) -> Iterator[TimingRecord]:
    """
    작업 시간 측정, 레이블은 저장소 키에 붙는다

    Usage:
        with measure_time("verify", example=example.id, k=k) as record:
            ...
        record.elapsed
    """
    record = TimingRecord(operation=operation, labels=labels)
    start_time = time.perf_counter()
    try:
        yield record
    except Exception:
        record.failed = True
        raise
    finally:
        record.elapsed = time.perf_counter() - start_time
        track_timing(record.key, record.elapsed, failed=record.failed)
        if record.failed:
            logger.warning(f"{record.key} 실패 ({record.elapsed:.3f}초)")
        else:
            logger.debug(f"{record.key} 소요 시간: {record.elapsed:.3f}초")
