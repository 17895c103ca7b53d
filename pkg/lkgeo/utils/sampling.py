"""
샘플링 유틸리티
Philox 난수 생성기, 인자 의사구면 매개화, 제약 뉴턴 투영
"""
import logging
from typing import Callable, Optional

import numpy as np

from lkgeo.config import settings
from lkgeo.utils.error_handler import ContractViolationError, SamplingError

logger = logging.getLogger(__name__)

# 제약 투영으로 얻은 점의 최대 크기
MAX_POINT_NORM = 50.0


def make_rng(seed: int) -> np.random.Generator:
    """64비트 카운터 기반 Philox 생성기"""
    if seed < 0:
        raise ContractViolationError(f"seed는 0 이상이어야 합니다. (입력값: {seed})", field="seed")
    return np.random.Generator(np.random.Philox(seed))


def _unit_direction(rng: np.random.Generator, size: int) -> np.ndarray:
    """size 차원 단위구면 위의 균등 방향 (size=1 이면 ±1)"""
    if size == 1:
        return np.array([1.0 if rng.random() < 0.5 else -1.0])
    v = rng.standard_normal(size)
    return v / np.linalg.norm(v)


def sample_factor_quadric(rng: np.random.Generator, size: int, timelike: int, value: float,
                          rapidity_bound: Optional[float] = None) -> np.ndarray:
    """
    R^size_timelike 에서 <y,y> = value 인 점을 삼각/쌍곡 매개화로 추출

    처음 timelike 개의 좌표가 음의 부호를 가진다.

    Raises:
        ContractViolationError: 인자가 공집합인 경우
    """
    bound = settings.RAPIDITY_BOUND if rapidity_bound is None else rapidity_bound
    spacelike = size - timelike
    if value == 0.0:
        raise ContractViolationError("인자 값은 0이 아니어야 합니다.", field="value")
    if value > 0 and spacelike == 0:
        raise ContractViolationError(f"시간꼴 인자에서 <y,y>={value}>0 을 만족할 수 없습니다.", field="value")
    if value < 0 and timelike == 0:
        raise ContractViolationError(f"유클리드 인자에서 <y,y>={value}<0 을 만족할 수 없습니다.", field="value")

    radius = np.sqrt(abs(value))
    u = rng.uniform(-bound, bound)
    if value > 0:
        if timelike == 0:
            u = 0.0
        space_norm, time_norm = radius * np.cosh(u), radius * abs(np.sinh(u))
    else:
        if spacelike == 0:
            u = 0.0
        time_norm, space_norm = radius * np.cosh(u), radius * abs(np.sinh(u))

    y = np.zeros(size)
    if timelike:
        y[:timelike] = time_norm * _unit_direction(rng, timelike)
    if spacelike:
        y[timelike:] = space_norm * _unit_direction(rng, spacelike)
    return y


def project_onto_constraints(
    seed_point: np.ndarray,
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    max_iters: Optional[int] = None,
    damping: Optional[float] = None,
    tol: float = 1e-12,
) -> Optional[np.ndarray]:
    """
    최소 노름 가우스-뉴턴 반복으로 제약 집합 g(x) = 0 에 투영

    잔차가 커지면 보폭을 damping 배로 줄인다.

    Returns:
        수렴한 점, 실패하면 None
    """
    max_iters = settings.NEWTON_MAX_ITERS if max_iters is None else max_iters
    damping = settings.NEWTON_DAMPING if damping is None else damping
    x = np.asarray(seed_point, dtype=float).copy()
    g = residual(x)
    for _ in range(max_iters):
        if np.max(np.abs(g)) <= tol * (1.0 + np.dot(x, x)):
            return x
        step, *_ = np.linalg.lstsq(jacobian(x), -g, rcond=None)
        t = 1.0
        current = np.linalg.norm(g)
        while True:
            candidate = x + t * step
            g_candidate = residual(candidate)
            if np.linalg.norm(g_candidate) < current or t < 1e-6:
                break
            t *= damping
        x, g = candidate, g_candidate
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > MAX_POINT_NORM:
            return None
    if np.max(np.abs(g)) <= tol * (1.0 + np.dot(x, x)):
        return x
    return None


def sample_on_constraints(
    rng: np.random.Generator,
    dim: int,
    count: int,
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    max_reseeds: Optional[int] = None,
) -> np.ndarray:
    """
    무작위 가우스 시드를 제약 집합에 투영하여 count 개의 점 생성

    Raises:
        SamplingError: 한 점에서 재시드 한도를 넘긴 경우
    """
    max_reseeds = settings.MAX_RESEEDS if max_reseeds is None else max_reseeds
    points = np.zeros((count, dim))
    reseeds = 0
    for i in range(count):
        for attempt in range(max_reseeds + 1):
            seed_point = settings.ANGLE_SCALE * rng.standard_normal(dim)
            x = project_onto_constraints(seed_point, residual, jacobian)
            if x is not None:
                points[i] = x
                break
            reseeds += 1
        else:
            raise SamplingError(f"{max_reseeds}회 재시드 후에도 제약 투영이 수렴하지 않았습니다. (점 {i})")
    if reseeds:
        logger.warning(f"제약 투영 재시드 {reseeds}회 발생 ({count}개 점)")
    return points
