"""
부정부호 내적 공간 선형대수 모듈
R^{n+2}_q 의 내적, 계량 자기수반성, 최소다항식, 접공간 추출
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import linalg as sla

from lkgeo.config import settings
from lkgeo.utils.error_handler import (
    ContractViolationError,
    IllConditionedError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Signature:
    """의사 유클리드 계량의 차원과 지표 (음의 성분이 앞쪽에 위치)"""
    dim: int
    index: int

    def __post_init__(self):
        if self.dim < 1:
            raise ContractViolationError(f"dim은 양의 정수여야 합니다. (입력값: {self.dim})", field="dim")
        if not 0 <= self.index <= self.dim:
            raise ContractViolationError(
                f"index는 0 이상 {self.dim} 이하여야 합니다. (입력값: {self.index})",
                field="index"
            )

    @property
    def metric(self) -> np.ndarray:
        """계량 행렬 G = diag(-1,…,-1,+1,…,+1)"""
        return np.diag(self.diagonal)

    @property
    def diagonal(self) -> np.ndarray:
        diag = np.ones(self.dim)
        diag[:self.index] = -1.0
        return diag


@dataclass(frozen=True)
class AmbientSpaceForm:
    """곡률 c 인 로렌츠 공간형식 M^{n+1}_c ⊂ R^{n+2}_q"""
    c: int
    signature: Signature
    n: int

    def __post_init__(self):
        if self.c not in (1, -1):
            raise ContractViolationError(f"c는 +1 또는 -1이어야 합니다. (입력값: {self.c})", field="c")
        expected_q = 1 if self.c == 1 else 2
        if self.signature.index != expected_q:
            raise ContractViolationError(
                f"c={self.c} 공간형식은 지표 q={expected_q}가 필요합니다. (입력값: {self.signature.index})",
                field="index"
            )
        if self.signature.dim != self.n + 2:
            raise ContractViolationError(
                f"주변 차원은 n+2={self.n + 2}이어야 합니다. (입력값: {self.signature.dim})",
                field="dim"
            )

    @classmethod
    def of(cls, c: int, n: int) -> "AmbientSpaceForm":
        """c 와 초곡면 차원 n 으로부터 공간형식 생성 (c=1 → q=1, c=-1 → q=2)"""
        if n < 1:
            raise ContractViolationError(f"n은 1 이상이어야 합니다. (입력값: {n})", field="n")
        q = 1 if c == 1 else 2
        return cls(c=c, signature=Signature(dim=n + 2, index=q), n=n)


@dataclass(frozen=True)
class TangentSpace:
    """
    점 x 에서의 접공간 {v : <v,x> = 0 = <v,N>}

    basis 는 (n+2) x n 행렬이며 각 열이 접벡터이다. 정규직교화하지 않으며
    유도 계량은 gram 이 담는다.
    """
    base_point: np.ndarray
    normal: np.ndarray
    basis: np.ndarray
    gram: np.ndarray
    eps: int

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def coordinates(self, v: np.ndarray, sig: Signature) -> np.ndarray:
        """접벡터 v 의 기저 좌표 (gram^{-1} B^T G v)"""
        return np.linalg.solve(self.gram, self.basis.T @ (sig.metric @ v))

    def negative_count(self) -> int:
        """gram 의 음의 고윳값 개수"""
        return int(np.sum(np.linalg.eigvalsh(self.gram) < 0))


def _check_vector(v: np.ndarray, sig: Signature, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (sig.dim,):
        raise ContractViolationError(
            f"{name}의 길이는 {sig.dim}이어야 합니다. (입력 형태: {arr.shape})",
            field=name
        )
    return arr


def inner(x: np.ndarray, y: np.ndarray, sig: Signature) -> float:
    """
    부정부호 내적 <x,y> = -Σ_{i≤q} x_i y_i + Σ_{i>q} x_i y_i

    Raises:
        ContractViolationError: 차원이 맞지 않는 경우
    """
    x = _check_vector(x, sig, "x")
    y = _check_vector(y, sig, "y")
    return float(np.dot(x * sig.diagonal, y))


def self_adjoint_defect(M: np.ndarray, sig: Signature) -> float:
    """‖G·M - (G·M)^T‖_max"""
    M = np.asarray(M, dtype=float)
    if M.shape != (sig.dim, sig.dim):
        raise ContractViolationError(
            f"행렬의 차원이 ({sig.dim}, {sig.dim})이어야 합니다. (입력값: {M.shape})",
            field="matrix"
        )
    GM = sig.metric @ M
    return float(np.max(np.abs(GM - GM.T))) if M.size else 0.0


def is_metric_self_adjoint(M: np.ndarray, sig: Signature, tol: Optional[float] = None) -> bool:
    """계량 G 에 대해 <Mx,y> = <x,My> 인지 판정"""
    tol = settings.TOL if tol is None else tol
    return self_adjoint_defect(M, sig) <= tol


def minimal_polynomial(M: np.ndarray, tol: Optional[float] = None, gap: Optional[float] = None) -> List[float]:
    """
    크릴로프 열 {I, M, M², …} 의 첫 계수 부족으로 최소다항식 결정

    Args:
        M: 정사각 행렬
        tol: 상대 특이값 임계값
        gap: 연속 특이값 비율 임계값

    Returns:
        최고차항부터의 모닉 계수 리스트 (예: t² - 5t + 6 → [1, -5, 6])

    Raises:
        ContractViolationError: 정사각 행렬이 아닌 경우
        IllConditionedError: 특이값 간격이 불분명한 경우
    """
    tol = settings.TOL if tol is None else tol
    gap = settings.KRYLOV_GAP if gap is None else gap
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ContractViolationError(f"정사각 행렬이 필요합니다. (입력 형태: {M.shape})", field="matrix")
    if tol <= 0:
        raise ContractViolationError("tol은 양수여야 합니다.", field="tol")

    size = M.shape[0]
    powers = [np.eye(size)]
    for degree in range(1, size + 1):
        powers.append(powers[-1] @ M)
        columns = []
        for P in powers:
            norm = np.linalg.norm(P)
            columns.append(P.ravel() / norm if norm > 0 else P.ravel())
        s = sla.svdvals(np.column_stack(columns))
        if s[-1] > tol * s[0]:
            continue
        if degree > 1 and s[-2] < gap * s[-1]:
            raise IllConditionedError(
                f"차수 {degree}에서 특이값 간격이 불분명합니다.",
                singular_values=s
            )
        basis = np.column_stack([P.ravel() for P in powers[:-1]])
        coeffs, *_ = np.linalg.lstsq(basis, -powers[-1].ravel(), rcond=None)
        return [1.0] + [float(v) for v in coeffs[::-1]]

    # 케일리-해밀턴에 의해 도달하지 않음
    raise IllConditionedError("최소다항식을 결정할 수 없습니다.", singular_values=s)


def tangent_space(x: np.ndarray, N: np.ndarray, space: AmbientSpaceForm, tol: Optional[float] = None) -> TangentSpace:
    """
    span{x, N} 의 계량 직교여공간을 기저로 추출

    2 x (n+2) 제약 {Gx, GN} 을 열 피벗 QR 로 행축약하고 자유 변수마다
    기저 벡터 하나를 만든다. 같은 입력에는 같은 기저를 돌려준다.

    Raises:
        ContractViolationError: 전제조건 위반 또는 x, N 이 계량적으로 종속인 경우
    """
    tol = settings.TOL if tol is None else tol
    sig = space.signature
    x = _check_vector(x, sig, "x")
    N = _check_vector(N, sig, "N")

    scale = 1.0 + float(np.dot(x, x))
    xx = inner(x, x, sig)
    if abs(xx - space.c) > tol * scale:
        raise ContractViolationError(f"<x,x>={xx:.3e} 가 c={space.c}와 다릅니다.", field="x")
    NN = inner(N, N, sig)
    if abs(abs(NN) - 1.0) > tol * (1.0 + float(np.dot(N, N))):
        raise ContractViolationError(f"<N,N>={NN:.3e} 가 ±1이 아닙니다.", field="N")
    xN = inner(x, N, sig)
    if abs(xN) > tol * np.sqrt(scale * (1.0 + float(np.dot(N, N)))):
        raise ContractViolationError(f"<x,N>={xN:.3e} 가 0이 아닙니다.", field="N")

    G = sig.metric
    C = np.vstack([G @ x, G @ N])
    _, R, piv = sla.qr(C, pivoting=True)
    if abs(R[1, 1]) <= tol * max(1.0, abs(R[0, 0])):
        raise ContractViolationError("x와 N이 계량적으로 종속입니다.", field="N")

    pivots = piv[:2]
    free = sorted(set(range(sig.dim)) - set(pivots))
    block = C[:, pivots]
    basis = np.zeros((sig.dim, len(free)))
    for col, j in enumerate(free):
        basis[j, col] = 1.0
        basis[pivots, col] = -np.linalg.solve(block, C[:, j])

    gram = basis.T @ G @ basis
    gram = 0.5 * (gram + gram.T)
    return TangentSpace(
        base_point=x,
        normal=N,
        basis=basis,
        gram=gram,
        eps=1 if NN > 0 else -1,
    )


def restrict_endomorphism(L: np.ndarray, tangent: TangentSpace, sig: Signature) -> np.ndarray:
    """
    접공간을 보존하는 주변 선형사상 L 을 접기저 좌표 행렬로 제한

    Returns:
        n x n 행렬 gram^{-1} B^T G L B
    """
    B = tangent.basis
    return np.linalg.solve(tangent.gram, B.T @ sig.metric @ np.asarray(L, dtype=float) @ B)
