"""
L_k 검증 모듈
좌표 함수, 위치 벡터, 가우스 사상에 대한 L_k 계산, 샘플로부터 (A, b) 복원,
대수적 검사 실행
"""
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg as sla

from lkgeo import __version__
from lkgeo.config import settings
from lkgeo.services.canonical_forms import CanonicalKind, classify
from lkgeo.services.catalog import HypersurfaceExample
from lkgeo.services.curvature_calculus import (
    CurvatureProfile,
    ShapeData,
    curvature_profile,
    newton_constants,
    ricci_and_scalar,
)
from lkgeo.services.indefinite_linalg import (
    AmbientSpaceForm,
    Signature,
    TangentSpace,
    inner,
    minimal_polynomial,
    self_adjoint_defect,
)
from lkgeo.utils.error_handler import (
    ConsistencyError,
    ContractViolationError,
    IllConditionedError,
    LkGeoError,
    RankDeficientSamplesError,
    UnsupportedInputError,
    validate_k_range,
)
from lkgeo.utils.monitoring import measure_time
from lkgeo.utils.sampling import make_rng

logger = logging.getLogger(__name__)

# 복원된 (A, b) 성분 비교 허용 오차
AFFINE_TOL = 1e-6
# 점별 닫힌 형태 비교 허용 오차
POINT_TOL = 1e-9
# 설계 행렬 계수 판정 임계값
RANK_TOL = 1e-9
# 무작위 좌표 벡터로 검사할 샘플 수
CHECK_SAMPLES = 100
# 분류 검사를 수행할 샘플 수
CLASSIFY_SAMPLES = 10


@dataclass(frozen=True)
class PointEvaluation:
    """한 샘플 점에서의 곡률 데이터와 L_k 값"""
    x: np.ndarray
    N: np.ndarray
    space: AmbientSpaceForm
    tangent: TangentSpace
    shape: ShapeData
    profile: CurvatureProfile
    k: int
    lk_psi: np.ndarray
    lk_psi_closed: np.ndarray
    lk_N: Optional[np.ndarray] = None

    @property
    def eps(self) -> int:
        return self.shape.eps

    def hess_coord(self, a_vec: np.ndarray) -> np.ndarray:
        return hessian_coord(a_vec, self.shape, self.x, self.N, self.space.signature)

    def scale(self) -> float:
        return (1.0 + np.linalg.norm(self.shape.S, 2)) ** (self.k + 1)


@dataclass(frozen=True)
class LkCoordResult:
    """L_k<a,ψ> 의 닫힌 형태와 트레이스 형태"""
    closed: float
    trace: float
    deviation: float


@dataclass(frozen=True)
class AffineFit:
    """최소제곱 (A, b) 복원 결과와 게이지 방향"""
    A: np.ndarray
    b: np.ndarray
    residual_max: float
    rank: int
    nullity: int
    null_directions: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    enforce_self_adjoint: bool


class CheckResult(BaseModel):
    """이름 있는 검사 결과"""
    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(alias="pass")
    measured: float
    bound: float


class VerificationReport(BaseModel):
    """검증 실행 보고서"""
    example_id: str
    k: int
    sample_count: int
    seed: int
    tol: float
    tool_version: str = __version__
    residual_max: float
    A_recovered: List[List[float]]
    A_predicted: List[List[float]]
    b_recovered: List[float]
    b_predicted: List[float]
    self_adjoint_defect: float
    rank: int
    nullity: int
    classification: Optional[str] = None
    non_diagonalizable: Optional[bool] = None
    checks: List[CheckResult]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_checks(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


def _check(name: str, measured: float, bound: float) -> CheckResult:
    measured = float(measured)
    passed = bool(np.isfinite(measured) and measured <= bound)
    return CheckResult(name=name, passed=passed, measured=measured, bound=float(bound))


# ---------------------------------------------------------------------------
# 점별 미분 연산
# ---------------------------------------------------------------------------

def grad_coord(a_vec: np.ndarray, x: np.ndarray, N: np.ndarray, space: AmbientSpaceForm) -> np.ndarray:
    """∇<a,ψ> = a - ε<a,N>N - c<a,ψ>ψ (주변 좌표)"""
    sig = space.signature
    eps = 1 if inner(N, N, sig) > 0 else -1
    return a_vec - eps * inner(a_vec, N, sig) * N - space.c * inner(a_vec, x, sig) * x


def hessian_coord(a_vec: np.ndarray, shape: ShapeData, x: np.ndarray, N: np.ndarray, sig: Signature) -> np.ndarray:
    """∇²<a,ψ> = ε<a,N>S - c<a,ψ>I (접공간 자기사상)"""
    return shape.eps * inner(a_vec, N, sig) * shape.S - shape.c * inner(a_vec, x, sig) * np.eye(shape.n)


def lk_coord(a_vec: np.ndarray, point: PointEvaluation, k: Optional[int] = None,
             tol: Optional[float] = None, strict: bool = True) -> LkCoordResult:
    """
    L_k<a,ψ> 를 닫힌 형태와 tr(P_k ∘ ∇²<a,ψ>) 두 경로로 계산

    Raises:
        ConsistencyError: strict 이고 두 경로가 허용 오차 밖에서 다른 경우
    """
    tol = settings.TOL if tol is None else tol
    k = point.k if k is None else k
    sig = point.space.signature
    prof = point.profile
    aN = inner(a_vec, point.N, sig)
    ax = inner(a_vec, point.x, sig)
    closed = prof.ck[k] * prof.H_at(k + 1) * aN - point.space.c * prof.ck[k] * prof.H_at(k) * ax
    trace = float(np.trace(prof.P[k] @ hessian_coord(a_vec, point.shape, point.x, point.N, sig)))
    deviation = abs(closed - trace)
    scale = (1.0 + np.linalg.norm(point.shape.S, 2)) ** (k + 1) * (1.0 + abs(aN) + abs(ax))
    if strict and deviation > tol * scale:
        raise ConsistencyError(
            f"L_k 이중 경로 불일치: 닫힌 형태 {closed:.12g}, 트레이스 {trace:.12g}",
            deviation=deviation
        )
    return LkCoordResult(closed=float(closed), trace=trace, deviation=float(deviation / scale))


def lk_psi_trace(x: np.ndarray, N: np.ndarray, shape: ShapeData, profile: CurvatureProfile,
                 sig: Signature, k: int) -> np.ndarray:
    """좌표별 δ_i tr(P_k ∘ ∇²<e_i,ψ>) 로 L_kψ 계산"""
    dim = sig.dim
    diagonal = sig.diagonal
    result = np.zeros(dim)
    basis = np.eye(dim)
    for i in range(dim):
        hess = hessian_coord(basis[i], shape, x, N, sig)
        result[i] = diagonal[i] * np.trace(profile.P[k] @ hess)
    return result


def lk_gauss(point: PointEvaluation, k: Optional[int] = None, isoparametric: bool = True) -> np.ndarray:
    """
    L_kN = -εC_k(nH_1H_{k+1} - (n-k-1)H_{k+2})N + εc c_kH_{k+1}ψ  (H_j, j>n 는 0)

    Raises:
        UnsupportedInputError: H_{k+1} 이 상수라는 보장이 없는 경우
    """
    if not isoparametric:
        raise UnsupportedInputError("L_kN 닫힌 형태는 H_{k+1}이 상수인 초곡면에서만 사용할 수 있습니다.")
    k = point.k if k is None else k
    prof = point.profile
    n = point.shape.n
    eps = point.eps
    c = point.space.c
    normal_coeff = -eps * prof.Ck[k] * (n * prof.H_at(1) * prof.H_at(k + 1) - (n - k - 1) * prof.H_at(k + 2))
    return normal_coeff * point.N + eps * c * prof.ck[k] * prof.H_at(k + 1) * point.x


def product_rule_check(a1: np.ndarray, a2: np.ndarray, point: PointEvaluation, k: Optional[int] = None) -> float:
    """
    |L_k(fg) - gL_kf - fL_kg - 2<P_k∇f, ∇g>|, f = <a1,ψ>, g = <a2,ψ>

    L_k(fg) 는 ∇²(fg) = f∇²g + g∇²f + ∇f⊗∇g + ∇g⊗∇f 의 트레이스로 계산한다.
    """
    k = point.k if k is None else k
    sig = point.space.signature
    tangent = point.tangent
    Pk = point.profile.P[k]
    gram = tangent.gram

    f = inner(a1, point.x, sig)
    g = inner(a2, point.x, sig)
    u = tangent.coordinates(grad_coord(a1, point.x, point.N, point.space), sig)
    v = tangent.coordinates(grad_coord(a2, point.x, point.N, point.space), sig)
    hess_f = point.hess_coord(a1)
    hess_g = point.hess_coord(a2)

    # X ↦ <∇g,X>∇f + <∇f,X>∇g
    cross = np.outer(u, gram @ v) + np.outer(v, gram @ u)
    hess_fg = f * hess_g + g * hess_f + cross

    lk_fg = np.trace(Pk @ hess_fg)
    lk_f = np.trace(Pk @ hess_f)
    lk_g = np.trace(Pk @ hess_g)
    coupling = 2.0 * float(v @ gram @ (Pk @ u))
    return float(abs(lk_fg - g * lk_f - f * lk_g - coupling))


def evaluate_point(example: HypersurfaceExample, x: np.ndarray, k: int, tol: Optional[float] = None) -> PointEvaluation:
    """샘플 점 하나의 곡률 데이터와 L_kψ, L_kN 계산"""
    tangent, shape = example.frame_at(x, tol=tol)
    profile = curvature_profile(shape, tol=tol)
    sig = example.signature
    N = tangent.normal
    c = example.c
    lk_psi = lk_psi_trace(x, N, shape, profile, sig, k)
    lk_psi_closed = profile.ck[k] * profile.H_at(k + 1) * N - c * profile.ck[k] * profile.H_at(k) * x
    point = PointEvaluation(
        x=x, N=N, space=example.space, tangent=tangent, shape=shape, profile=profile,
        k=k, lk_psi=lk_psi, lk_psi_closed=lk_psi_closed,
    )
    return replace(point, lk_N=lk_gauss(point, k))


# ---------------------------------------------------------------------------
# (A, b) 복원
# ---------------------------------------------------------------------------

def minimum_samples(dim: int) -> int:
    """과결정 최소 샘플 수 2(dim² + dim)"""
    return 2 * (dim * dim + dim)


def recover_affine(xs: np.ndarray, ys: np.ndarray, sig: Signature, enforce_self_adjoint: bool = False,
                   allowed_nullity: int = 0, rank_tol: float = RANK_TOL) -> AffineFit:
    """
    y_i = A x_i + b 최소제곱 복원 (열 피벗 QR 로 계수 판정, 최소 노름 해)

    enforce_self_adjoint 이면 A = G·Sym (Sym 대칭) 부분공간에서 푼다.

    Raises:
        ContractViolationError: 샘플 수 부족 또는 차원 불일치
        RankDeficientSamplesError: 설계 행렬의 영공간이 허용 범위를 넘는 경우
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 2 or xs.shape != ys.shape or xs.shape[1] != sig.dim:
        raise ContractViolationError(
            f"샘플 차원이 맞지 않습니다. (x: {xs.shape}, y: {ys.shape}, dim={sig.dim})",
            field="samples"
        )
    count, dim = xs.shape
    required = minimum_samples(dim)
    if count < required:
        raise ContractViolationError(
            f"샘플이 {required}개 이상 필요합니다. (입력값: {count})",
            field="samples"
        )

    design = np.hstack([xs, np.ones((count, 1))])
    _, R, _ = sla.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > rank_tol * diag[0]))
    nullity = dim + 1 - rank
    if nullity > allowed_nullity:
        raise RankDeficientSamplesError(
            f"설계 행렬 계수가 부족합니다 (계수 {rank}/{dim + 1}). 샘플 수를 늘리거나 샘플러를 확인하세요.",
            rank=rank,
            expected=dim + 1 - allowed_nullity,
        )

    if not enforce_self_adjoint:
        theta, *_ = sla.lstsq(design, ys, cond=rank_tol)
        A = theta[:dim].T
        b = theta[dim].copy()
        directions = []
        if nullity:
            identity = np.eye(dim)
            for v in sla.null_space(design, rcond=rank_tol).T:
                for j in range(dim):
                    directions.append((np.outer(identity[j], v[:dim]), v[dim] * identity[j]))
    else:
        G = sig.metric
        pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
        system = np.zeros((count * dim, len(pairs) + dim))
        for col, (i, j) in enumerate(pairs):
            E = np.zeros((dim, dim))
            E[i, j] = E[j, i] = 1.0
            system[:, col] = (xs @ E.T).ravel()
        for r in range(dim):
            system[r::dim, len(pairs) + r] = 1.0
        rhs = (ys @ G.T).ravel()

        def unpack(params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            sym = np.zeros((dim, dim))
            for value, (i, j) in zip(params[:len(pairs)], pairs):
                sym[i, j] = sym[j, i] = value
            return G @ sym, G @ params[len(pairs):]

        params, *_ = sla.lstsq(system, rhs, cond=rank_tol)
        A, b = unpack(params)
        directions = []
        if nullity:
            directions = [unpack(v) for v in sla.null_space(system, rcond=rank_tol).T]

    residual = ys - xs @ A.T - b
    residual_max = float(np.max(np.abs(residual))) if residual.size else 0.0
    logger.debug(f"(A, b) 복원: 계수 {rank}, 영공간 {nullity}, 잔차 {residual_max:.3e}")
    return AffineFit(
        A=A, b=b, residual_max=residual_max, rank=rank, nullity=nullity,
        null_directions=tuple(directions), enforce_self_adjoint=enforce_self_adjoint,
    )


def align_to_prediction(fit: AffineFit, A_pred: np.ndarray, b_pred: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """게이지 방향 안에서 예측값에 가장 가까운 해 선택"""
    if not fit.null_directions:
        return fit.A, fit.b
    basis = np.column_stack([np.concatenate([dA.ravel(), db]) for dA, db in fit.null_directions])
    target = np.concatenate([(A_pred - fit.A).ravel(), b_pred - fit.b])
    z, *_ = np.linalg.lstsq(basis, target, rcond=None)
    A = fit.A + sum(zj * dA for zj, (dA, _) in zip(z, fit.null_directions))
    b = fit.b + sum(zj * db for zj, (_, db) in zip(z, fit.null_directions))
    return A, b


# ---------------------------------------------------------------------------
# 정리 검사
# ---------------------------------------------------------------------------

def _closed_H(example: HypersurfaceExample, j: int) -> float:
    return float(example.closed_H[j]) if 0 <= j <= example.n else 0.0


def _constants(example: HypersurfaceExample, k: int) -> Tuple[float, float]:
    ck, Ck = newton_constants(example.n, example.eps)
    return float(ck[k]), float(Ck[k])


def theorem1_checks(example: HypersurfaceExample, points: Sequence[PointEvaluation], A: np.ndarray,
                    k: int, tol: Optional[float] = None) -> List[CheckResult]:
    """
    b = 0 인 L_kψ = Aψ 초곡면의 대수적 검사

    H_{k+1} = 0 이면 A 가 스칼라 행렬인지 확인하고, 아니면 α, λ 를 닫힌 형태로
    계산하여 S² + λS - εcI = 0, Aψ, AN, μ_A, 판별식, <Aψ,ψ> 상수성을 검사한다.

    Raises:
        UnsupportedInputError: 예측 b 가 0 이 아닌 경우
    """
    tol = settings.TOL if tol is None else tol
    if np.max(np.abs(example.predicted_b(k))) > 0.0:
        raise UnsupportedInputError("b ≠ 0 인 예제에는 b = 0 검사를 적용할 수 없습니다.")
    n, c, eps = example.n, example.c, example.eps
    dim = n + 2
    ck, Ck = _constants(example, k)
    Hk, Hk1, Hk2 = _closed_H(example, k), _closed_H(example, k + 1), _closed_H(example, k + 2)
    A_scale = 1.0 + float(np.max(np.abs(A)))
    checks: List[CheckResult] = []

    position = max(
        np.max(np.abs(A @ p.x - (ck * Hk1 * p.N - c * ck * Hk * p.x))) / (1.0 + np.max(np.abs(p.x)))
        for p in points
    )
    checks.append(_check("A_on_position", position, AFFINE_TOL * A_scale))

    quad_values = np.array([inner(A @ p.x, p.x, example.signature) for p in points])
    quad_mean = float(np.mean(quad_values))
    checks.append(_check(
        "position_quadratic_constancy",
        np.max(np.abs(quad_values - quad_mean)),
        AFFINE_TOL * A_scale * (1.0 + abs(quad_mean)),
    ))
    checks.append(_check("position_quadratic_value", abs(quad_mean + ck * Hk), AFFINE_TOL * A_scale))

    if abs(Hk1) <= tol:
        scalar_defect = np.max(np.abs(A - np.trace(A) / dim * np.eye(dim)))
        checks.append(_check("A_scalar", scalar_defect, AFFINE_TOL * A_scale))
        return checks

    alpha = -eps * Ck * (n * _closed_H(example, 1) * Hk1 - (n - k - 1) * Hk2)
    lam = alpha / (ck * Hk1) + c * Hk / Hk1

    identity = np.eye(n)
    quadratic = max(
        np.max(np.abs(p.shape.S @ p.shape.S + lam * p.shape.S - eps * c * identity))
        / (1.0 + np.linalg.norm(p.shape.S, 2)) ** 2
        for p in points
    )
    checks.append(_check("S_quadratic_relation", quadratic, tol))

    lambdas = []
    for p in points:
        prof = p.profile
        a_p = -eps * prof.Ck[k] * (n * prof.H_at(1) * prof.H_at(k + 1) - (n - k - 1) * prof.H_at(k + 2))
        lambdas.append(a_p / (prof.ck[k] * prof.H_at(k + 1)) + c * prof.H_at(k) / prof.H_at(k + 1))
    lambdas = np.array(lambdas)
    checks.append(_check(
        "lambda_constancy",
        np.max(np.abs(lambdas - np.mean(lambdas))),
        tol * (1.0 + abs(float(np.mean(lambdas)))),
    ))

    normal = max(
        np.max(np.abs(A @ p.N - (alpha * p.N + eps * c * ck * Hk1 * p.x))) / (1.0 + np.max(np.abs(p.x)))
        for p in points
    )
    checks.append(_check("A_on_normal", normal, AFFINE_TOL * A_scale))

    if example.expected_kind in (CanonicalKind.II, CanonicalKind.III, CanonicalKind.IV):
        a1 = 2 * c * ck * Hk - lam * ck * Hk1
        a0 = ck ** 2 * Hk ** 2 - lam * c * ck ** 2 * Hk * Hk1 - eps * c * ck ** 2 * Hk1 ** 2
        fitted_a1, fitted_a0, annihilation = quadratic_annihilator(A)
        deviation = max(abs(fitted_a1 - a1), abs(fitted_a0 - a0), annihilation)
        d_A = fitted_a1 ** 2 - 4 * fitted_a0
        checks.append(_check("A_minimal_polynomial", deviation, AFFINE_TOL * A_scale ** 2))
        d_S = lam ** 2 + 4 * eps * c
        checks.append(_check(
            "discriminant_relation",
            abs(d_A - ck ** 2 * Hk1 ** 2 * d_S),
            AFFINE_TOL * A_scale ** 2,
        ))

    return checks


def theorem2_checks(example: HypersurfaceExample, points: Sequence[PointEvaluation], b: np.ndarray,
                    k: int, tol: Optional[float] = None) -> List[CheckResult]:
    """
    b ≠ 0 인 전곡 배꼽 초곡면의 검사: b⊤ = 0, <b,ψ> 상수, <b,N> = (cH_k/H_{k+1})<b,ψ>, 배꼽성

    Raises:
        UnsupportedInputError: b = 0 이거나 H_{k+1} = 0 인 경우
    """
    tol = settings.TOL if tol is None else tol
    if not np.any(np.abs(example.predicted_b(k)) > 0.0):
        raise UnsupportedInputError("b = 0 인 예제에는 b ≠ 0 검사를 적용할 수 없습니다.")
    Hk, Hk1 = _closed_H(example, k), _closed_H(example, k + 1)
    if abs(Hk1) <= tol:
        raise UnsupportedInputError("H_{k+1} = 0 인 예제에는 b ≠ 0 검사를 적용할 수 없습니다.")
    sig = example.signature
    c = example.c
    b_scale = 1.0 + float(np.max(np.abs(b)))
    checks: List[CheckResult] = []

    tangential = max(
        np.max(np.abs(grad_coord(b, p.x, p.N, example.space))) / (1.0 + np.max(np.abs(p.x)))
        for p in points
    )
    checks.append(_check("b_tangential", tangential, POINT_TOL * b_scale))

    bx = np.array([inner(b, p.x, sig) for p in points])
    bx_mean = float(np.mean(bx))
    checks.append(_check(
        "b_position_constancy",
        np.max(np.abs(bx - bx_mean)),
        POINT_TOL * b_scale * (1.0 + abs(bx_mean)),
    ))

    relation = max(
        abs(inner(b, p.N, sig) - c * Hk / Hk1 * inner(b, p.x, sig)) / (1.0 + np.max(np.abs(p.x)))
        for p in points
    )
    checks.append(_check("b_normal_relation", relation, POINT_TOL * b_scale * (1.0 + abs(c * Hk / Hk1))))

    umbilic = max(
        np.max(np.abs(p.shape.S - np.trace(p.shape.S) / p.shape.n * np.eye(p.shape.n)))
        / (1.0 + np.linalg.norm(p.shape.S, 2))
        for p in points
    )
    checks.append(_check("umbilicity", umbilic, tol))
    return checks


# ---------------------------------------------------------------------------
# 전체 검증 실행
# ---------------------------------------------------------------------------

def _sample_checks(example: HypersurfaceExample, points: Sequence[PointEvaluation], tol: float) -> List[CheckResult]:
    sig = example.signature
    checks: List[CheckResult] = []

    constraint = max(
        np.max(np.abs(example.constraint(p.x))) / (1.0 + float(np.dot(p.x, p.x))) for p in points
    )
    checks.append(_check("sample_constraints", constraint, 1e-10))

    gauss = max(
        max(abs(inner(p.N, p.N, sig) - example.eps), abs(inner(p.N, p.x, sig)))
        / (1.0 + float(np.dot(p.x, p.x)))
        for p in points
    )
    checks.append(_check("gauss_map_norm", gauss, 1e-10))

    if "expected_eps" in example.details:
        checks.append(_check("epsilon_case_list", abs(example.eps - example.details["expected_eps"]), 0.0))

    defect = max(
        p.shape.self_adjoint_defect() / ((1.0 + np.linalg.norm(p.shape.S)) * (1.0 + np.linalg.norm(p.shape.gram)))
        for p in points
    )
    checks.append(_check("shape_self_adjoint", defect, POINT_TOL))

    # 중심 차분으로 -dN(v) = S v 확인
    weingarten = 0.0
    for p in points[:CHECK_SAMPLES]:
        B = p.tangent.basis
        for i in range(B.shape[1]):
            v = B[:, i]
            h = 1e-4 * (1.0 + np.linalg.norm(p.x)) / (1.0 + np.linalg.norm(v))
            dN = (example.gauss_map(p.x + h * v) - example.gauss_map(p.x - h * v)) / (2 * h)
            gap = np.max(np.abs(-dN - B @ p.shape.S[:, i])) / (1.0 + np.max(np.abs(B @ p.shape.S[:, i])))
            weingarten = max(weingarten, float(gap))
    checks.append(_check("weingarten_finite_difference", weingarten, 1e-7))

    H_gap = 0.0
    for p in points:
        scale = 1.0 + np.linalg.norm(p.shape.S, 2)
        for j in range(example.n + 1):
            H_gap = max(H_gap, abs(p.profile.H[j] - example.closed_H[j]) / scale ** j)
    checks.append(_check("mean_curvature_closed_form", H_gap, tol))

    ricci = max(
        ricci_and_scalar(p.shape, p.profile).deviation / (1.0 + np.linalg.norm(p.shape.S, 2)) ** 2
        for p in points[:CHECK_SAMPLES]
    )
    checks.append(_check("scalar_curvature_identity", ricci, POINT_TOL))
    return checks


def _classification(example: HypersurfaceExample, points: Sequence[PointEvaluation], tol: float):
    mismatches = 0
    kind = None
    for p in points[:CLASSIFY_SAMPLES]:
        try:
            form = classify(p.shape, tol=tol)
            kind = form.kind
            if form.kind != example.expected_kind:
                mismatches += 1
        except LkGeoError as e:
            logger.warning(f"분류 실패: {e.message}")
            mismatches += 1
    return kind, _check("classification", mismatches, 0.0)


def run_verification(example: HypersurfaceExample, k: int, samples: Optional[int] = None,
                     seed: Optional[int] = None, tol: Optional[float] = None,
                     enforce_self_adjoint: bool = False) -> VerificationReport:
    """
    예제를 샘플링하여 L_kψ = Aψ + b 를 복원하고 모든 검사를 수행

    Raises:
        ContractViolationError: k 범위 또는 샘플 수 위반
        SamplingError: 샘플링 실패
        RankDeficientSamplesError: 샘플이 아핀 공간을 채우지 못하는 경우
    """
    samples = settings.DEFAULT_SAMPLES if samples is None else samples
    seed = settings.DEFAULT_SEED if seed is None else seed
    tol = settings.TOL if tol is None else tol
    n = example.n
    validate_k_range(k, n)
    dim = n + 2
    if samples < minimum_samples(dim):
        raise ContractViolationError(
            f"samples는 {minimum_samples(dim)} 이상이어야 합니다. (입력값: {samples})",
            field="samples"
        )

    logger.info(f"검증 시작: {example.id}, k={k}, samples={samples}, seed={seed}")
    with measure_time("verify", example=example.id, k=k) as timing:
        rng = make_rng(seed)
        xs = example.sampler(samples, rng)
        with measure_time("evaluate_points"):
            points = [evaluate_point(example, x, k, tol=max(tol, 1e-10)) for x in xs]
        ys = np.array([p.lk_psi for p in points])

        fit = recover_affine(
            xs, ys, example.signature,
            enforce_self_adjoint=enforce_self_adjoint,
            allowed_nullity=example.allowed_nullity,
        )
        A_pred = example.predicted_A(k)
        b_pred = example.predicted_b(k)
        A_rec, b_rec = align_to_prediction(fit, A_pred, b_pred)

        checks = _sample_checks(example, points, tol)
        kind, classification_check = _classification(example, points, tol)
        checks.append(classification_check)

        if example.predicted_min_poly is not None:
            try:
                measured_poly = minimal_polynomial(points[0].shape.S, tol=tol)
                gap = max(abs(m - p) for m, p in zip(measured_poly, example.predicted_min_poly)) \
                    if len(measured_poly) == len(example.predicted_min_poly) else float("inf")
            except IllConditionedError:
                gap = float("inf")
            checks.append(_check("minimal_polynomial_S", gap, tol * 10))

        dual_gap = 0.0
        product_rule = 0.0
        for p in points[:CHECK_SAMPLES]:
            a1 = rng.standard_normal(dim)
            a2 = rng.standard_normal(dim)
            dual_gap = max(dual_gap, lk_coord(a1, p, k, tol=tol, strict=False).deviation)
            scale = p.scale() * (1.0 + np.linalg.norm(a1) * np.linalg.norm(p.x)) \
                * (1.0 + np.linalg.norm(a2) * np.linalg.norm(p.x))
            product_rule = max(product_rule, product_rule_check(a1, a2, p, k) / scale)
        closed_gap = max(
            np.max(np.abs(p.lk_psi - p.lk_psi_closed)) / (p.scale() * (1.0 + np.max(np.abs(p.x))))
            for p in points
        )
        checks.append(_check("dual_path_lk_coordinates", max(dual_gap, closed_gap), tol))
        checks.append(_check("product_rule", product_rule, tol))

        y_scale = 1.0 + float(np.max(np.abs(ys)))
        checks.append(_check("recovery_residual", fit.residual_max / y_scale, tol))
        A_scale = 1.0 + float(np.max(np.abs(A_pred)))
        checks.append(_check("A_matches_prediction", np.max(np.abs(A_rec - A_pred)), AFFINE_TOL * A_scale))
        checks.append(_check("b_matches_prediction", np.max(np.abs(b_rec - b_pred)), AFFINE_TOL * A_scale))
        sa_defect = self_adjoint_defect(A_rec, example.signature)
        checks.append(_check("A_self_adjoint", sa_defect, 1e-8 * A_scale))

        iterated = max(
            np.max(np.abs(
                p.profile.ck[k] * p.profile.H_at(k + 1) * p.lk_N
                - example.c * p.profile.ck[k] * p.profile.H_at(k) * p.lk_psi
                - A_pred @ p.lk_psi
            )) / (p.scale() ** 2 * (1.0 + np.max(np.abs(p.x))))
            for p in points
        )
        checks.append(_check("iterated_operator", iterated, tol * A_scale))

        checks.extend(_self_adjoint_conditions(example, points, A_rec, k))

        non_diagonalizable = None
        if np.any(np.abs(b_pred) > 0.0):
            checks.extend(theorem2_checks(example, points, b_rec, k, tol=tol))
            direction = example.translation_direction
            if direction is not None:
                unit = direction / np.linalg.norm(direction)
                off_axis = np.linalg.norm(b_rec - np.dot(b_rec, unit) * unit)
                checks.append(_check("b_parallel_to_axis", off_axis, AFFINE_TOL * (1.0 + np.linalg.norm(b_rec))))
        else:
            checks.extend(theorem1_checks(example, points, A_rec, k, tol=tol))
            if example.expected_kind != CanonicalKind.I:
                non_diagonalizable = _is_non_diagonalizable(A_rec)

    report = VerificationReport(
        example_id=example.id,
        k=k,
        sample_count=samples,
        seed=seed,
        tol=tol,
        residual_max=fit.residual_max,
        A_recovered=A_rec.tolist(),
        A_predicted=A_pred.tolist(),
        b_recovered=b_rec.tolist(),
        b_predicted=b_pred.tolist(),
        self_adjoint_defect=sa_defect,
        rank=fit.rank,
        nullity=fit.nullity,
        classification=kind.value if kind is not None else None,
        non_diagonalizable=non_diagonalizable,
        checks=checks,
    )
    failed = report.failed_checks()
    if failed:
        logger.warning(f"검증 실패 항목: {', '.join(check.name for check in failed)}")
    logger.info(f"검증 완료: {example.id}, k={k}, 통과={report.all_passed} ({timing.elapsed:.2f}초)")
    return report


def _self_adjoint_conditions(example: HypersurfaceExample, points: Sequence[PointEvaluation],
                             A: np.ndarray, k: int) -> List[CheckResult]:
    """<AX,ψ> = <X,Aψ>, <AX,N> = <X,AN>, <AN,ψ> = <N,Aψ> 와 AX = -c_kH_{k+1}SX - c c_kH_kX"""
    sig = example.signature
    c = example.c
    A_scale = 1.0 + float(np.max(np.abs(A)))
    conditions = 0.0
    action = 0.0
    for p in points[:CHECK_SAMPLES]:
        B = p.tangent.basis
        point_scale = (1.0 + np.max(np.abs(p.x))) ** 2
        for i in range(B.shape[1]):
            X = B[:, i]
            AX = A @ X
            conditions = max(
                conditions,
                abs(inner(AX, p.x, sig) - inner(X, A @ p.x, sig)) / point_scale,
                abs(inner(AX, p.N, sig) - inner(X, A @ p.N, sig)) / point_scale,
            )
            expected = -p.profile.ck[k] * p.profile.H_at(k + 1) * (B @ p.shape.S[:, i]) \
                - c * p.profile.ck[k] * p.profile.H_at(k) * X
            action = max(action, np.max(np.abs(AX - expected)) / (p.scale() * (1.0 + np.max(np.abs(X)))))
        conditions = max(conditions, abs(inner(A @ p.N, p.x, sig) - inner(p.N, A @ p.x, sig)) / point_scale)
    return [
        _check("self_adjoint_conditions", conditions, AFFINE_TOL * A_scale),
        _check("tangent_action", action, AFFINE_TOL * A_scale),
    ]


def quadratic_annihilator(A: np.ndarray) -> Tuple[float, float, float]:
    """
    A² + a1·A + a0·I ≈ 0 인 (a1, a0) 최소제곱 추정과 잔차

    복원된 A 의 잡음이 있어도 A 가 스칼라가 아니면 안정적이다 (멱영 A 포함).
    """
    A = np.asarray(A, dtype=float)
    identity = np.eye(A.shape[0])
    system = np.column_stack([A.ravel(), identity.ravel()])
    (a1, a0), *_ = np.linalg.lstsq(system, -(A @ A).ravel(), rcond=None)
    residual = float(np.max(np.abs(A @ A + a1 * A + a0 * identity)))
    return float(a1), float(a0), residual


def _is_non_diagonalizable(A: np.ndarray) -> Optional[bool]:
    A_scale = 1.0 + float(np.max(np.abs(A)))
    if np.max(np.abs(A - np.trace(A) / A.shape[0] * np.eye(A.shape[0]))) <= AFFINE_TOL * A_scale:
        return False
    a1, a0, residual = quadratic_annihilator(A)
    if residual > AFFINE_TOL * A_scale ** 2:
        # 2차 관계가 없으면 판정하지 않음
        return None
    discriminant = a1 ** 2 - 4 * a0
    return bool(discriminant <= AFFINE_TOL * A_scale ** 2)
