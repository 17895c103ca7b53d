"""
곡률 계산 모듈
특성다항식 계수, 고차 평균곡률, 뉴턴 변환, 트레이스 항등식, 리치 곡률
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, List, Optional, Sequence

import numpy as np

from lkgeo.config import settings
from lkgeo.utils.error_handler import ConsistencyError, ContractViolationError, validate_dimension

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShapeData:
    """접기저 좌표로 표현한 형상 연산자와 유도 계량, 가우스 사상 부호"""
    S: np.ndarray
    gram: np.ndarray
    eps: int
    c: int

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        gram = np.asarray(self.gram, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ContractViolationError(f"S는 정사각 행렬이어야 합니다. (입력 형태: {S.shape})", field="S")
        validate_dimension(gram.shape, S.shape, "gram")
        if self.eps not in (1, -1):
            raise ContractViolationError(f"eps는 ±1이어야 합니다. (입력값: {self.eps})", field="eps")
        if self.c not in (1, -1):
            raise ContractViolationError(f"c는 ±1이어야 합니다. (입력값: {self.c})", field="c")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "gram", gram)

    @property
    def n(self) -> int:
        return self.S.shape[0]

    def self_adjoint_defect(self) -> float:
        """‖gram·S - (gram·S)^T‖_max"""
        GS = self.gram @ self.S
        return float(np.max(np.abs(GS - GS.T))) if GS.size else 0.0

    def validate(self, tol: Optional[float] = None) -> "ShapeData":
        """
        gram 에 대한 자기수반성 검증

        Raises:
            ContractViolationError: 허용 오차를 넘는 경우
        """
        tol = settings.TOL if tol is None else tol
        scale = (1.0 + np.linalg.norm(self.S)) * (1.0 + np.linalg.norm(self.gram))
        defect = self.self_adjoint_defect()
        if defect > tol * scale:
            raise ContractViolationError(f"S가 gram에 대해 자기수반이 아닙니다. (결함: {defect:.3e})", field="S")
        return self


@dataclass(frozen=True)
class CurvatureProfile:
    """한 점에서의 특성계수 a_k, 평균곡률 H_k, 뉴턴 변환 P_k 와 상수 c_k, C_k"""
    a: np.ndarray
    H: np.ndarray
    P: List[np.ndarray]
    ck: np.ndarray
    Ck: np.ndarray

    @property
    def n(self) -> int:
        return len(self.a) - 1

    def H_at(self, j: int) -> float:
        """H_j (j > n 이면 0)"""
        return float(self.H[j]) if 0 <= j < len(self.H) else 0.0

    def a_at(self, j: int) -> float:
        """a_j (j > n 이면 0)"""
        return float(self.a[j]) if 0 <= j < len(self.a) else 0.0


@dataclass(frozen=True)
class TraceIdentity:
    """보조정리의 트레이스 항등식 측정값과 닫힌 형태"""
    k: int
    tr_P: float
    tr_P_expected: float
    tr_P_h_form: float
    tr_SP: float
    tr_SP_expected: float
    tr_SP_h_form: float
    tr_S2P: float
    tr_S2P_expected: float
    tr_S2P_h_form: float

    def max_deviation(self, include_s2: bool = True) -> float:
        deviations = [
            abs(self.tr_P - self.tr_P_expected),
            abs(self.tr_SP - self.tr_SP_expected),
        ]
        if include_s2:
            deviations.append(abs(self.tr_S2P - self.tr_S2P_expected))
        return max(deviations)


@dataclass(frozen=True)
class RicciData:
    """리치 곡률 형식 행렬과 스칼라 곡률"""
    ric: np.ndarray
    scal: float
    scal_trace: float

    @property
    def deviation(self) -> float:
        return abs(self.scal - self.scal_trace)


def char_coeffs(shape: ShapeData) -> np.ndarray:
    """
    르베리에-파데예프 점화식으로 특성다항식 계수 계산

    a_0 = 1, a_k = -(1/k) Σ_{j=1}^k a_{k-j} tr(S^j)

    Returns:
        길이 n+1 배열 (a_0, …, a_n)
    """
    n = shape.n
    traces = np.zeros(n + 1)
    power = np.eye(n)
    for j in range(1, n + 1):
        power = power @ shape.S
        traces[j] = np.trace(power)

    a = np.zeros(n + 1)
    a[0] = 1.0
    for k in range(1, n + 1):
        a[k] = -sum(a[k - j] * traces[j] for j in range(1, k + 1)) / k
    return a


def mean_curvatures(a: Sequence[float], eps: int, n: int) -> np.ndarray:
    """
    binom(n,k)·H_k = (-ε)^k·a_k 로부터 평균곡률 계산

    Raises:
        ContractViolationError: 계수 길이가 n+1 이 아닌 경우
    """
    a = np.asarray(a, dtype=float)
    validate_dimension(a.shape, (n + 1,), "a")
    H = np.array([(-eps) ** k * a[k] / comb(n, k) for k in range(n + 1)])
    H[0] = 1.0
    return H


def newton_constants(n: int, eps: int):
    """
    c_k = (-ε)^k (n-k) binom(n,k), C_k = c_k/(k+1)

    Returns:
        (ck, Ck) 길이 n+1 배열
    """
    ck = np.array([float((-eps) ** k * (n - k) * comb(n, k)) for k in range(n + 1)])
    Ck = np.array([ck[k] / (k + 1) for k in range(n + 1)])
    return ck, Ck


def newton_transforms(shape: ShapeData, a: Sequence[float], tol: Optional[float] = None) -> List[np.ndarray]:
    """
    P_0 = I, P_k = a_k I + S∘P_{k-1}

    Raises:
        ConsistencyError: P_n 이 케일리-해밀턴 허용 범위를 넘는 경우
    """
    tol = settings.TOL if tol is None else tol
    n = shape.n
    validate_dimension(np.shape(a), (n + 1,), "a")

    identity = np.eye(n)
    P = [identity.copy()]
    for k in range(1, n + 1):
        P.append(a[k] * identity + shape.S @ P[-1])

    bound = tol * max(1.0, np.linalg.norm(shape.S, 2)) ** n
    residual = float(np.max(np.abs(P[n]))) if n else 0.0
    if residual > bound:
        raise ConsistencyError(
            f"케일리-해밀턴 위반: ‖P_n‖={residual:.3e} > {bound:.3e}",
            deviation=residual
        )
    return P


def curvature_profile(shape: ShapeData, tol: Optional[float] = None) -> CurvatureProfile:
    """형상 연산자로부터 곡률 프로파일 전체 계산"""
    a = char_coeffs(shape)
    H = mean_curvatures(a, shape.eps, shape.n)
    P = newton_transforms(shape, a, tol=tol)
    ck, Ck = newton_constants(shape.n, shape.eps)
    return CurvatureProfile(a=a, H=H, P=P, ck=ck, Ck=Ck)


def lemma1_traces(shape: ShapeData, profile: CurvatureProfile) -> List[TraceIdentity]:
    """
    뉴턴 변환 트레이스 항등식 측정

    tr P_k = (n-k) a_k, tr(S P_k) = -(k+1) a_{k+1},
    tr(S² P_k) = a_1 a_{k+1} - (k+2) a_{k+2} 와 그 H 형태를 함께 반환한다.
    모든 0 ≤ k ≤ n 에 대해 계산한다 (j > n 이면 a_j = H_j = 0).
    """
    n = shape.n
    S = shape.S
    S2 = S @ S
    eps = shape.eps
    a1 = profile.a_at(1)
    records = []
    for k in range(n + 1):
        Pk = profile.P[k]
        ck = profile.ck[k]
        Ck = profile.Ck[k]
        records.append(TraceIdentity(
            k=k,
            tr_P=float(np.trace(Pk)),
            tr_P_expected=(n - k) * profile.a_at(k),
            tr_P_h_form=ck * profile.H_at(k),
            tr_SP=float(np.trace(S @ Pk)),
            tr_SP_expected=-(k + 1) * profile.a_at(k + 1),
            tr_SP_h_form=eps * ck * profile.H_at(k + 1),
            tr_S2P=float(np.trace(S2 @ Pk)),
            tr_S2P_expected=a1 * profile.a_at(k + 1) - (k + 2) * profile.a_at(k + 2),
            tr_S2P_h_form=Ck * (n * profile.H_at(1) * profile.H_at(k + 1) - (n - k - 1) * profile.H_at(k + 2)),
        ))
    return records


def mu_subset(kappas: Sequence[float], k: int, J: Iterable[int] = ()) -> float:
    """
    J 에 속한 첨자를 제외한 주곡률의 k 차 기본대칭식

    Args:
        kappas: 주곡률 리스트
        k: 차수
        J: 제외할 첨자 집합 (1부터 시작)

    Returns:
        μ_k^J (k=0 이면 1, 범위 밖이면 0)
    """
    excluded = set(J)
    remaining = [kappa for i, kappa in enumerate(kappas, start=1) if i not in excluded]
    if k == 0:
        return 1.0
    if k < 0 or k > len(remaining):
        return 0.0
    return float(sum(np.prod(combo) for combo in combinations(remaining, k)))


def ricci_and_scalar(shape: ShapeData, profile: CurvatureProfile) -> RicciData:
    """
    Ric(X,Y) = (n-1)c<X,Y> + nH_1<SX,Y> - ε<SX,SY>
    Scal = n(n-1)(c + εH_2)
    """
    n = shape.n
    g = shape.gram
    S = shape.S
    ric = (n - 1) * shape.c * g + n * profile.H_at(1) * (g @ S) - shape.eps * (S.T @ g @ S)
    ric = 0.5 * (ric + ric.T)
    scal = n * (n - 1) * (shape.c + shape.eps * profile.H_at(2))
    scal_trace = float(np.trace(np.linalg.solve(g, ric)))
    return RicciData(ric=ric, scal=float(scal), scal_trace=scal_trace)
