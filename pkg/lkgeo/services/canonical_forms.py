"""
형상 연산자 표준형 모듈
I–IV 형 분류와 표준 틀에서의 뉴턴 변환 작용 검증
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg as sla
from scipy.cluster.hierarchy import fcluster, linkage

from lkgeo.config import settings
from lkgeo.services.curvature_calculus import (
    ShapeData,
    char_coeffs,
    mu_subset,
    newton_transforms,
)
from lkgeo.utils.error_handler import ClassificationError, ContractViolationError

logger = logging.getLogger(__name__)


class CanonicalKind(str, Enum):
    """표준형 종류"""
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


class FrameKind(str, Enum):
    """표준 틀 종류"""
    ORTHONORMAL = "orthonormal"
    PSEUDO_ORTHONORMAL = "pseudo_orthonormal"


BLOCK_SIZES = {
    CanonicalKind.I: 0,
    CanonicalKind.II: 2,
    CanonicalKind.III: 2,
    CanonicalKind.IV: 3,
}


@dataclass(frozen=True)
class CanonicalForm:
    """
    표준형 매개변수

    kind I 에서는 kappas 가 모든 주곡률이고 kappa 는 None 이다.
    II–IV 에서는 kappa 가 블록 고윳값(II 는 실수부), kappas 가 나머지 실 주곡률이다.
    """
    kind: CanonicalKind
    kappa: Optional[float] = None
    b_rot: Optional[float] = None
    kappas: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "kind", CanonicalKind(self.kind))
        object.__setattr__(self, "kappas", tuple(float(v) for v in self.kappas))
        if self.kind != CanonicalKind.I and self.kappa is None:
            raise ContractViolationError(f"{self.kind.value}형에는 kappa가 필요합니다.", field="kappa")
        if self.kind == CanonicalKind.II and not self.b_rot:
            raise ContractViolationError("II형에는 0이 아닌 b_rot이 필요합니다.", field="b_rot")
        if self.dimension < 1:
            raise ContractViolationError("표준형의 차원은 1 이상이어야 합니다.", field="kappas")

    @property
    def frame_kind(self) -> FrameKind:
        if self.kind in (CanonicalKind.I, CanonicalKind.II):
            return FrameKind.ORTHONORMAL
        return FrameKind.PSEUDO_ORTHONORMAL

    @property
    def dimension(self) -> int:
        return BLOCK_SIZES[self.kind] + len(self.kappas)

    @property
    def principal_list(self) -> List[float]:
        """κ_1 = κ_2 (= κ_3) = κ 규약을 따른 주곡률 리스트"""
        return [self.kappa] * BLOCK_SIZES[self.kind] + list(self.kappas)


def canonical_matrices(form: CanonicalForm) -> Tuple[np.ndarray, np.ndarray]:
    """
    표준 틀에서의 형상 연산자 행렬과 틀의 gram 행렬

    열 i 가 S E_i 의 좌표이다.
    """
    kind = form.kind
    block = BLOCK_SIZES[kind]
    n = form.dimension
    S = np.zeros((n, n))
    gram = np.eye(n)
    kappa = form.kappa

    if kind == CanonicalKind.I:
        gram[0, 0] = -1.0
    elif kind == CanonicalKind.II:
        b = form.b_rot
        S[:2, :2] = [[kappa, -b], [b, kappa]]
        gram[0, 0] = -1.0
    elif kind == CanonicalKind.III:
        S[:2, :2] = [[kappa, 0.0], [1.0, kappa]]
        gram[:2, :2] = [[0.0, -1.0], [-1.0, 0.0]]
    else:
        S[:3, :3] = [[kappa, 0.0, 0.0], [0.0, kappa, 1.0], [-1.0, 0.0, kappa]]
        gram[:3, :3] = [[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]

    for i, value in enumerate(form.kappas):
        S[block + i, block + i] = value
    return S, gram


def canonical_shape(form: CanonicalForm, eps: int = 1, c: int = 1) -> ShapeData:
    """표준형으로부터 ShapeData 생성"""
    S, gram = canonical_matrices(form)
    return ShapeData(S=S, gram=gram, eps=eps, c=c)


def predicted_newton_action(form: CanonicalForm, k: int) -> np.ndarray:
    """
    μ 공식으로 표준 틀에서의 P_k 행렬 구성

    II형은 S E_1 = κE_1 + bE_2 에 대해 점화식이 주는 부호를 따른다.
    """
    n = form.dimension
    mu = form.principal_list
    sign = (-1.0) ** k
    P = np.zeros((n, n))
    kind = form.kind
    block = BLOCK_SIZES[kind]

    def m(order: int, *excluded: int) -> float:
        return mu_subset(mu, order, excluded)

    if kind == CanonicalKind.II:
        b = form.b_rot
        P[0, 0] = m(k, 1)
        P[1, 0] = -b * m(k - 1, 1, 2)
        P[0, 1] = b * m(k - 1, 1, 2)
        P[1, 1] = m(k, 1)
        for i in range(block + 1, n + 1):
            P[i - 1, i - 1] = m(k, i) + b * b * m(k - 2, 1, 2, i)
        return sign * P

    if kind == CanonicalKind.III:
        P[0, 0] = m(k, 1)
        P[1, 0] = -m(k - 1, 1, 2)
        P[1, 1] = m(k, 1)
    elif kind == CanonicalKind.IV:
        P[0, 0] = m(k, 1)
        P[1, 0] = -m(k - 2, 1, 2, 3)
        P[2, 0] = m(k - 1, 1, 2)
        P[1, 1] = m(k, 1)
        P[1, 2] = -m(k - 1, 1, 2)
        P[2, 2] = m(k, 1)
    for i in range(block + 1, n + 1):
        P[i - 1, i - 1] = m(k, i)
    return sign * P


def canonical_pk_check(form: CanonicalForm, k: int, tol: Optional[float] = None) -> Tuple[bool, float]:
    """
    점화식으로 구한 P_k 와 μ 공식의 열별 비교

    Returns:
        (허용 오차 이내 여부, 최대 성분 편차)
    """
    tol = 1e-9 if tol is None else tol
    n = form.dimension
    if not 0 <= k <= n:
        raise ContractViolationError(f"k는 0 이상 {n} 이하여야 합니다. (입력값: {k})", field="k")
    shape = canonical_shape(form)
    P = newton_transforms(shape, char_coeffs(shape), tol=max(tol, settings.TOL))
    deviation = float(np.max(np.abs(P[k] - predicted_newton_action(form, k))))
    bound = tol * max(1.0, np.linalg.norm(shape.S, 2)) ** k
    return deviation <= bound, deviation


@dataclass(frozen=True)
class _RealRoot:
    kappa: float
    multiplicity: int
    geometric: int
    block: int  # 군집 위에서 (S-κI)^s 가 0 이 되는 최소 s


def _coarse_clusters(eigenvalues: np.ndarray, radius: float) -> List[List[int]]:
    """단일 연결 군집화, 고윳값 인덱스 리스트로 반환"""
    if len(eigenvalues) == 1:
        return [[0]]
    points = np.column_stack([eigenvalues.real, eigenvalues.imag])
    labels = fcluster(linkage(points, method="single"), t=radius, criterion="distance")
    return [list(np.flatnonzero(labels == label)) for label in np.unique(labels)]


def _cluster_block(S: np.ndarray, eigenvalues: np.ndarray, members: List[int]) -> np.ndarray:
    """정렬된 복소 슈어 분해로 군집 고윳값에 대응하는 불변 부분공간 위의 블록 추출"""
    chosen = set(members)

    def selected(z: complex) -> bool:
        return int(np.argmin(np.abs(eigenvalues - z))) in chosen

    try:
        T, _, sdim = sla.schur(S.astype(complex), output="complex", sort=selected)
    except (sla.LinAlgError, ValueError) as e:
        raise ClassificationError(
            f"고윳값 군집의 슈어 재정렬에 실패했습니다: {e}",
            candidates=[kind.value for kind in CanonicalKind]
        )
    if sdim != len(members):
        raise ClassificationError(
            f"군집 크기와 슈어 블록 크기가 다릅니다. ({len(members)} != {sdim})",
            candidates=[kind.value for kind in CanonicalKind]
        )
    return T[:sdim, :sdim]


def _nilpotency_index(N: np.ndarray, tol: float) -> Optional[int]:
    """‖N^s‖ ≤ tol·‖N‖^s 를 만족하는 최소 s, 군집 크기 안에서 없으면 None"""
    norm = np.linalg.norm(N, 2)
    power = np.eye(N.shape[0], dtype=N.dtype)
    for s in range(1, N.shape[0] + 1):
        power = power @ N
        if np.linalg.norm(power, 2) <= tol * norm ** s:
            return s
    return None


def _resolve_real_cluster(S: np.ndarray, eigenvalues: np.ndarray, members: List[int],
                          tie: float, tol: float) -> List[_RealRoot]:
    """
    실 고윳값 군집을 하나의 고윳값 또는 더 작은 군집들로 판정

    군집 블록 B 에서 N = B - κI 가 tie 이하이면 반단순 중복 고윳값,
    N 이 상대적으로 멱영이면 조르당 구조를 가진 고윳값이다.
    둘 다 아니면 서로 다른 고윳값이므로 가장 큰 간격에서 나눈다.
    """
    m = len(members)
    block = _cluster_block(S, eigenvalues, members)
    kappa = float(np.trace(block).real / m)
    N = block - kappa * np.eye(m)
    norm = np.linalg.norm(N, 2)
    if norm <= tie:
        return [_RealRoot(kappa, m, m, 1)]

    index = _nilpotency_index(N, tol)
    if index is not None:
        rank = int(np.sum(sla.svdvals(N) > tol * norm))
        return [_RealRoot(kappa, m, m - rank, index)]

    order = sorted(members, key=lambda i: eigenvalues[i].real)
    cut = int(np.argmax(np.diff([eigenvalues[i].real for i in order]))) + 1
    logger.debug(f"고윳값 군집 분할: κ≈{kappa:.6g}, 크기 {m} → {cut} + {m - cut}")
    return (
        _resolve_real_cluster(S, eigenvalues, order[:cut], tie, tol)
        + _resolve_real_cluster(S, eigenvalues, order[cut:], tie, tol)
    )


def classify(shape: ShapeData, tol: Optional[float] = None) -> CanonicalForm:
    """
    조르당 구조로 형상 연산자의 표준형 판정

    고윳값을 반경 tol^{1/3}(1+‖S‖) 로 먼저 묶고, 실 군집마다 슈어 블록으로
    하나의 고윳값인지 판정한다. tol·(1+‖S‖) 보다 가까운 근만 병합된다.

    Raises:
        ClassificationError: 분류가 모호하거나 I–IV 형에 속하지 않는 경우
    """
    tol = settings.TOL if tol is None else tol
    S = shape.S
    scale = 1.0 + np.linalg.norm(S, 2)
    radius = tol ** (1.0 / 3.0) * scale
    tie = tol * scale

    eigenvalues = np.linalg.eigvals(S)
    real_roots: List[_RealRoot] = []
    complex_clusters = []
    for members in _coarse_clusters(eigenvalues, radius):
        center = complex(np.mean(eigenvalues[members]))
        if abs(center.imag) > radius:
            complex_clusters.append((center, len(members)))
        else:
            real_roots.extend(_resolve_real_cluster(S, eigenvalues, members, tie, tol))
    real_roots.sort(key=lambda root: root.kappa)

    if complex_clusters:
        if len(complex_clusters) != 2 or any(size != 1 for _, size in complex_clusters):
            raise ClassificationError(
                f"복소 고윳값 구조가 I–IV 형에 맞지 않습니다. (복소 군집 {len(complex_clusters)}개)",
                candidates=[CanonicalKind.II.value]
            )

    block_root: Optional[_RealRoot] = None
    for root in real_roots:
        if root.geometric == root.multiplicity:
            continue
        excess = root.multiplicity - root.geometric
        if root.geometric < 1 or block_root is not None or root.block not in (2, 3) or excess != root.block - 1:
            raise ClassificationError(
                f"조르당 블록이 하나가 아니거나 크기가 2, 3이 아닙니다. (κ={root.kappa:.6g}, 크기={root.block})",
                candidates=[CanonicalKind.III.value, CanonicalKind.IV.value]
            )
        block_root = root

    if complex_clusters and block_root is not None:
        raise ClassificationError(
            "복소 고윳값과 조르당 블록이 함께 나타났습니다.",
            candidates=[CanonicalKind.II.value, CanonicalKind.III.value, CanonicalKind.IV.value]
        )

    kappas: List[float] = []
    for root in real_roots:
        copies = root.multiplicity - root.block if root is block_root else root.multiplicity
        kappas.extend([root.kappa] * copies)

    if complex_clusters:
        center = complex_clusters[0][0]
        form = CanonicalForm(kind=CanonicalKind.II, kappa=center.real, b_rot=abs(center.imag), kappas=tuple(kappas))
    elif block_root is not None:
        kind = CanonicalKind.III if block_root.block == 2 else CanonicalKind.IV
        form = CanonicalForm(kind=kind, kappa=block_root.kappa, kappas=tuple(kappas))
    else:
        form = CanonicalForm(kind=CanonicalKind.I, kappas=tuple(kappas))

    logger.debug(f"분류 결과: {form.kind.value}형, κ={form.kappa}, b={form.b_rot}, κ_i={form.kappas}")
    return form
