"""
초곡면 예제 카탈로그 모듈
전곡 배꼽 단면, 표준 곱, 비대각화 이차 초곡면, k-극대 예제와 ID 문법
"""
import logging
import re
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator
from scipy.optimize import brentq

from lkgeo.config import settings
from lkgeo.services.canonical_forms import CanonicalKind
from lkgeo.services.curvature_calculus import ShapeData, mean_curvatures, mu_subset, newton_constants
from lkgeo.services.indefinite_linalg import (
    AmbientSpaceForm,
    Signature,
    TangentSpace,
    inner,
    is_metric_self_adjoint,
    minimal_polynomial,
    restrict_endomorphism,
    tangent_space,
)
from lkgeo.utils.error_handler import (
    ContractViolationError,
    ExampleConstructionError,
    IllConditionedError,
    UnknownExampleError,
)
from lkgeo.utils.sampling import make_rng, sample_factor_quadric, sample_on_constraints

logger = logging.getLogger(__name__)

# 두 부호 규약이 허용하지 않는 (δ1, δ2, ρ, c)
EXCLUDED_PRODUCT_TUPLES = {(0, 1, -1, 1), (1, 0, 1, -1)}


@dataclass(frozen=True)
class HypersurfaceExample:
    """
    카탈로그 예제

    가우스 사상은 x 에 대해 아핀이다: N(x) = W x + n0.
    형상 연산자는 접공간으로 제한한 -W 이다.
    """
    id: str
    family: str
    space: AmbientSpaceForm
    eps: int
    gauss_linear: np.ndarray
    gauss_offset: np.ndarray
    closed_H: np.ndarray
    principal_curvatures: Tuple[float, ...]
    expected_kind: CanonicalKind
    metadata: str
    constraint: Callable[[np.ndarray], np.ndarray]
    sampler: Callable[[int, np.random.Generator], np.ndarray]
    affine_rule: Callable[[int], Tuple[np.ndarray, np.ndarray]]
    allowed_nullity: int = 0
    translation_direction: Optional[np.ndarray] = None
    predicted_min_poly: Optional[Tuple[float, ...]] = None
    tuned_k: Optional[int] = None
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def c(self) -> int:
        return self.space.c

    @property
    def signature(self) -> Signature:
        return self.space.signature

    def gauss_map(self, x: np.ndarray) -> np.ndarray:
        return self.gauss_linear @ x + self.gauss_offset

    def frame_at(self, x: np.ndarray, tol: Optional[float] = None) -> Tuple[TangentSpace, ShapeData]:
        """점 x 에서의 접공간과 형상 연산자"""
        tangent = tangent_space(x, self.gauss_map(x), self.space, tol=tol)
        S = restrict_endomorphism(-self.gauss_linear, tangent, self.signature)
        shape = ShapeData(S=S, gram=tangent.gram, eps=tangent.eps, c=self.c)
        return tangent, shape

    def shape_at(self, x: np.ndarray, tol: Optional[float] = None) -> ShapeData:
        return self.frame_at(x, tol=tol)[1]

    def predicted_A(self, k: int) -> np.ndarray:
        return self.affine_rule(k)[0]

    def predicted_b(self, k: int) -> np.ndarray:
        return self.affine_rule(k)[1]

    def sample(self, count: int, seed: int) -> np.ndarray:
        """시드 고정 샘플 (count x (n+2))"""
        return self.sampler(count, make_rng(seed))


# ---------------------------------------------------------------------------
# 매개변수 모델
# ---------------------------------------------------------------------------

class _SignModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    c: int

    @field_validator("c")
    @classmethod
    def _check_c(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("c는 +1 또는 -1이어야 합니다.")
        return v


class UmbilicalParams(_SignModel):
    """초평면 <a,x> = τ 단면의 매개변수"""
    a_vec: np.ndarray
    tau: float

    @field_validator("a_vec", mode="before")
    @classmethod
    def _to_array(cls, v):
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def _check_nondegenerate(self):
        q = 1 if self.c == 1 else 2
        aa = inner(self.a_vec, self.a_vec, Signature(dim=len(self.a_vec), index=q))
        if min(abs(aa - t) for t in (-1.0, 0.0, 1.0)) > 1e-12:
            raise ValueError(f"<a,a>는 -1, 0, 1 중 하나여야 합니다. (입력값: {aa})")
        if abs(aa - self.c * self.tau ** 2) <= 1e-12:
            raise ValueError("<a,a> - cτ² 가 0이면 초곡면이 퇴화합니다.")
        return self

    @property
    def aa(self) -> int:
        q = 1 if self.c == 1 else 2
        return int(round(inner(self.a_vec, self.a_vec, Signature(dim=len(self.a_vec), index=q))))


class ProductParams(_SignModel):
    """표준 의사 리만 곱의 매개변수"""
    m: int
    delta1: int
    rho: int
    r: float

    @field_validator("delta1")
    @classmethod
    def _check_delta(cls, v: int) -> int:
        if v not in (0, 1):
            raise ValueError("delta1은 0 또는 1이어야 합니다.")
        return v

    @field_validator("rho")
    @classmethod
    def _check_rho(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("rho는 +1 또는 -1이어야 합니다.")
        return v

    @model_validator(mode="after")
    def _check_tuple(self):
        if self.r <= 0:
            raise ValueError("r은 양수여야 합니다.")
        if abs(self.r ** 2 - self.c * self.rho) <= 1e-12:
            raise ValueError("r² - cρ 가 0이면 초곡면이 퇴화합니다.")
        key = (self.delta1, self.delta2, self.rho, self.c)
        if key in EXCLUDED_PRODUCT_TUPLES:
            raise ValueError(f"제외된 매개변수 조합입니다: (δ1,δ2,ρ,c)={key}")
        return self

    @property
    def delta2(self) -> int:
        return 1 - self.delta1


class QuadricParams(_SignModel):
    """f(x) = <Rx,x> = d 이차 초곡면의 매개변수"""
    R: np.ndarray
    d: float

    @field_validator("R", mode="before")
    @classmethod
    def _to_array(cls, v):
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def _check_R(self):
        dim = self.R.shape[0]
        if self.R.shape != (dim, dim) or dim < 3:
            raise ValueError(f"R은 3차 이상의 정사각 행렬이어야 합니다. (입력 형태: {self.R.shape})")
        sig = Signature(dim=dim, index=1 if self.c == 1 else 2)
        if not is_metric_self_adjoint(self.R, sig, tol=1e-12):
            raise ValueError("R이 계량 자기수반이 아닙니다.")
        try:
            poly = minimal_polynomial(self.R)
        except IllConditionedError as e:
            raise ValueError(f"R의 최소다항식을 결정할 수 없습니다: {e.message}")
        if len(poly) != 3:
            raise ValueError(f"R의 최소다항식은 2차여야 합니다. (차수: {len(poly) - 1})")
        a, b = poly[1], poly[2]
        if a * a - 4 * b > 1e-9:
            raise ValueError(f"a² - 4b ≤ 0 이어야 합니다. (a={a:.6g}, b={b:.6g})")
        if abs(self.mu_R(self.c * self.d)) <= 1e-12:
            raise ValueError("μ_R(cd) = 0 이면 초곡면이 퇴화합니다.")
        return self

    @property
    def poly(self) -> Tuple[float, float]:
        """(a, b) with μ_R(t) = t² + at + b (정수에 가까우면 반올림)"""
        raw = minimal_polynomial(self.R)
        return tuple(float(np.round(v)) if abs(v - np.round(v)) < 1e-10 else float(v) for v in raw[1:])

    def mu_R(self, t: float) -> float:
        a, b = self.poly
        return t * t + a * t + b


# ---------------------------------------------------------------------------
# 공통 도우미
# ---------------------------------------------------------------------------

def _closed_mean_curvatures(kappas: List[float], eps: int) -> np.ndarray:
    """대각화 가능 형상 연산자의 H_k = ε^k μ_k / binom(n,k)"""
    n = len(kappas)
    return np.array([eps ** k * mu_subset(kappas, k) / comb(n, k) for k in range(n + 1)])


def _generic_affine(example_W: np.ndarray, offset: np.ndarray, H: np.ndarray, n: int, eps: int, c: int):
    """A = c_k H_{k+1} W - c c_k H_k I, b = c_k H_{k+1} n0"""
    ck, _ = newton_constants(n, eps)
    dim = n + 2

    def rule(k: int) -> Tuple[np.ndarray, np.ndarray]:
        H_next = H[k + 1] if k + 1 <= n else 0.0
        A = ck[k] * H_next * example_W - c * ck[k] * H[k] * np.eye(dim)
        return A, ck[k] * H_next * offset

    return rule


def _quadratic_constraints(G: np.ndarray, c: int, second: Callable[[np.ndarray], float],
                           second_grad: Callable[[np.ndarray], np.ndarray]):
    def residual(x: np.ndarray) -> np.ndarray:
        return np.array([x @ G @ x - c, second(x)])

    def jacobian(x: np.ndarray) -> np.ndarray:
        return np.vstack([2.0 * (G @ x), second_grad(x)])

    return residual, jacobian


def _format_value(value: float) -> str:
    return f"{value:g}"


# ---------------------------------------------------------------------------
# 전곡 배꼽 단면
# ---------------------------------------------------------------------------

UMBILICAL_CASE_LIST = {
    # (c, <a,a>, |τ|>1 여부) → (ε, 등거리 유형)
    (1, -1, None): (-1, "S^n(sqrt(tau^2+1))"),
    (1, 0, None): (-1, "R^n"),
    (1, 1, True): (-1, "H^n(-sqrt(tau^2-1))"),
    (1, 1, False): (1, "S^n_1(sqrt(1-tau^2))"),
    (-1, -1, True): (1, "S^n_1(sqrt(tau^2-1))"),
    (-1, -1, False): (-1, "H^n(-sqrt(1-tau^2))"),
    (-1, 0, None): (1, "R^n_1"),
    (-1, 1, None): (1, "H^n_1(-sqrt(tau^2+1))"),
}


def umbilical_case(c: int, aa: int, tau: float) -> Tuple[int, str]:
    """부호 사례 목록에서 기대 ε 와 등거리 유형 조회"""
    if aa == 0 or (c == 1 and aa == -1) or (c == -1 and aa == 1):
        return UMBILICAL_CASE_LIST[(c, aa, None)]
    return UMBILICAL_CASE_LIST[(c, aa, abs(tau) > 1)]


def default_axis(aa: int, n: int) -> np.ndarray:
    """<a,a> = 1 → e_{n+2}, -1 → e_1, 0 → e_1 + e_3"""
    a = np.zeros(n + 2)
    if aa == 1:
        a[-1] = 1.0
    elif aa == -1:
        a[0] = 1.0
    elif aa == 0:
        a[0] = 1.0
        a[2] = 1.0
    else:
        raise ExampleConstructionError(f"<a,a>는 -1, 0, 1 중 하나여야 합니다. (입력값: {aa})")
    return a


def totally_umbilical(p: UmbilicalParams, n: int, example_id: Optional[str] = None) -> HypersurfaceExample:
    """
    M_τ = {x : <a,x> = τ} 전곡 배꼽 초곡면

    Raises:
        ExampleConstructionError: 차원이 맞지 않는 경우
    """
    space = AmbientSpaceForm.of(p.c, n)
    sig = space.signature
    if p.a_vec.shape != (n + 2,):
        raise ExampleConstructionError(f"a_vec의 길이는 {n + 2}이어야 합니다.")

    c, tau, a = p.c, p.tau, p.a_vec
    aa = p.aa
    gap = aa - c * tau ** 2
    w = np.sqrt(abs(gap))
    eps = 1 if gap > 0 else -1
    expected_eps, label = umbilical_case(c, aa, tau)
    if tau == 0.0:
        label = f"{label} (totally geodesic)"

    W = -(c * tau / w) * np.eye(n + 2)
    offset = a / w
    kappa = c * tau / w
    H = np.array([(eps * c * tau) ** k / w ** k for k in range(n + 1)])
    ck, _ = newton_constants(n, eps)

    def affine_rule(k: int) -> Tuple[np.ndarray, np.ndarray]:
        A = -ck[k] * (eps * c * tau) ** k * (eps * tau ** 2 + c * w ** 2) / w ** (k + 2) * np.eye(n + 2)
        b = ck[k] * (eps * c * tau) ** (k + 1) / w ** (k + 2) * a
        return A, b

    G = sig.metric
    Ga = G @ a
    residual, jacobian = _quadratic_constraints(G, c, lambda x: Ga @ x - tau, lambda x: Ga)

    def sampler(count: int, rng: np.random.Generator) -> np.ndarray:
        return sample_on_constraints(rng, n + 2, count, residual, jacobian)

    example_id = example_id or f"umbilical:c={c},aa={aa},tau={_format_value(tau)},n={n}"
    logger.debug(f"전곡 배꼽 예제 생성: {example_id} (ε={eps}, 기대 ε={expected_eps})")
    return HypersurfaceExample(
        id=example_id,
        family="umbilical",
        space=space,
        eps=eps,
        gauss_linear=W,
        gauss_offset=offset,
        closed_H=H,
        principal_curvatures=tuple([kappa] * n),
        expected_kind=CanonicalKind.I,
        metadata=label,
        constraint=residual,
        sampler=sampler,
        affine_rule=affine_rule,
        allowed_nullity=1,
        translation_direction=a.copy(),
        details={"expected_eps": float(expected_eps), "tau": float(tau), "aa": float(aa)},
    )


# ---------------------------------------------------------------------------
# 표준 의사 리만 곱
# ---------------------------------------------------------------------------

def product_groups(p: ProductParams, n: int) -> Tuple[List[int], List[int]]:
    """
    (x_1 을 포함하는 m 차원 인자의 좌표, 나머지 인자의 좌표), 0부터 시작

    x_2 는 항상 D = 1 인 좌표군에 속한다.
    """
    if p.delta1 == 1:
        first = list(range(0, p.m + 1))
        second = list(range(p.m + 1, n + 2))
    else:
        first = [0] + list(range(2, p.m + 2))
        second = [1] + list(range(p.m + 2, n + 2))
    return first, second


def product_label(p: ProductParams) -> str:
    """표의 등거리 유형"""
    labels = {
        (1, 1, 1): "S^m_1(r) x S^{n-m}(sqrt(1-r^2))",
        (1, 1, -1): "H^m(-r) x S^{n-m}(sqrt(1+r^2))",
        (1, 0, 1): ("S^m_1(sqrt(1-r^2)) x S^{n-m}(r)", "H^m(-sqrt(r^2-1)) x S^{n-m}(r)"),
        (-1, 1, -1): "H^m_1(-r) x S^{n-m}(sqrt(r^2-1))",
        (-1, 0, 1): "H^m(-sqrt(1+r^2)) x S_1^{n-m}(r)",
        (-1, 0, -1): ("H^m(-sqrt(1-r^2)) x H^{n-m}(-r)", "S^m_1(sqrt(r^2-1)) x H^{n-m}(-r)"),
    }
    label = labels[(p.c, p.delta1, p.rho)]
    if isinstance(label, tuple):
        label = label[1] if p.r > 1 else label[0]
    return label


def standard_product(p: ProductParams, n: int, example_id: Optional[str] = None) -> HypersurfaceExample:
    """
    f(x) = <Dx,x> = ρr² 의 준위집합인 표준 곱

    Raises:
        ExampleConstructionError: m 범위 위반 또는 인자가 공집합인 경우
    """
    if not 1 <= p.m <= n - 1:
        raise ExampleConstructionError(f"m은 1 이상 {n - 1} 이하여야 합니다. (입력값: {p.m})")
    space = AmbientSpaceForm.of(p.c, n)
    sig = space.signature
    c, rho, r = p.c, p.rho, p.r
    first, second = product_groups(p, n)
    D = np.zeros(n + 2)
    D[first] = p.delta1
    D[second] = p.delta2
    ones = [i for i in range(n + 2) if D[i] == 1.0]
    zeros = [i for i in range(n + 2) if D[i] == 0.0]

    # D=1 좌표군은 <y,y> = ρr², D=0 좌표군은 <y,y> = c - ρr²
    factors = []
    for coords, value in ((ones, rho * r ** 2), (zeros, c - rho * r ** 2)):
        timelike = sum(1 for i in coords if i < sig.index)
        spacelike = len(coords) - timelike
        if (value > 0 and spacelike == 0) or (value < 0 and timelike == 0):
            raise ExampleConstructionError(
                f"인자 <y,y>={value:g} 를 만족하는 점이 없습니다. (c={c}, δ1={p.delta1}, ρ={rho}, r={r:g})"
            )
        factors.append((coords, timelike, value))

    w = np.sqrt(abs(rho - c * r ** 2))
    eps = 1 if rho - c * r ** 2 > 0 else -1
    W = np.diag(D - rho * c * r ** 2) / (r * w)
    kappa1 = (rho * c * r ** 2 - p.delta1) / (r * w)
    kappa2 = (rho * c * r ** 2 - p.delta2) / (r * w)
    kappas = [kappa1] * p.m + [kappa2] * (n - p.m)
    H = _closed_mean_curvatures(kappas, eps)
    ck, _ = newton_constants(n, eps)

    def affine_rule(k: int) -> Tuple[np.ndarray, np.ndarray]:
        H_next = H[k + 1] if k + 1 <= n else 0.0
        diagonal = ck[k] * H_next * (D - rho * c * r ** 2) / (r * w) - c * ck[k] * H[k]
        return np.diag(diagonal), np.zeros(n + 2)

    G = sig.metric
    P1 = np.diag(D) @ G

    def residual(x: np.ndarray) -> np.ndarray:
        return np.array([x @ P1 @ x - rho * r ** 2, x @ (G - P1) @ x - (c - rho * r ** 2)])

    def sampler(count: int, rng: np.random.Generator) -> np.ndarray:
        points = np.zeros((count, n + 2))
        for i in range(count):
            for coords, timelike, value in factors:
                points[i, coords] = sample_factor_quadric(rng, len(coords), timelike, value)
        return points

    example_id = example_id or (
        f"product:c={c},d1={p.delta1},rho={rho},r={_format_value(r)},m={p.m},n={n}"
    )
    return HypersurfaceExample(
        id=example_id,
        family="product",
        space=space,
        eps=eps,
        gauss_linear=W,
        gauss_offset=np.zeros(n + 2),
        closed_H=H,
        principal_curvatures=tuple(kappas),
        expected_kind=CanonicalKind.I,
        metadata=product_label(p),
        constraint=residual,
        sampler=sampler,
        affine_rule=affine_rule,
        details={"kappa1": float(kappa1), "kappa2": float(kappa2), "m": float(p.m), "r": float(r)},
    )


# ---------------------------------------------------------------------------
# 이차 초곡면
# ---------------------------------------------------------------------------

def named_quadric_matrix(name: str, c: int, n: int) -> np.ndarray:
    """
    이름 있는 자기수반 R

    J2: R² = -I (q = 2, n = 2 전용), N2: R = u1 ũ2ᵀ + u2 ũ1ᵀ, R² = 0

    Raises:
        ExampleConstructionError: 알 수 없는 이름이거나 차원이 맞지 않는 경우
    """
    dim = n + 2
    if name == "J2":
        if dim != 4:
            raise ExampleConstructionError("R=J2 는 n=2 에서만 정의됩니다.")
        return np.array([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ])
    if name == "N2":
        if dim < 4:
            raise ExampleConstructionError("R=N2 는 n ≥ 2 가 필요합니다.")
        G = Signature(dim=dim, index=1 if c == 1 else 2).metric
        u1 = np.zeros(dim)
        u2 = np.zeros(dim)
        u1[[0, 2]] = 1.0
        u2[[1, 3]] = 1.0
        return np.outer(u1, G @ u2) + np.outer(u2, G @ u1)
    raise ExampleConstructionError(f"알 수 없는 R 이름입니다: {name} (J2, N2 지원)")


def quadratic_hypersurface(p: QuadricParams, n: int, example_id: Optional[str] = None) -> HypersurfaceExample:
    """
    {x ∈ M : <Rx,x> = d} 이차 초곡면

    Raises:
        ExampleConstructionError: 차원 불일치 또는 I–IV 형 밖의 형상 연산자
    """
    if p.R.shape != (n + 2, n + 2):
        raise ExampleConstructionError(f"R의 차원은 {n + 2}이어야 합니다.")
    space = AmbientSpaceForm.of(p.c, n)
    sig = space.signature
    c, d, R = p.c, p.d, p.R
    a_R, b_R = p.poly
    mu_cd = p.mu_R(c * d)
    s = np.sqrt(abs(mu_cd))
    eps = -c * (1 if mu_cd > 0 else -1)

    W = (R - c * d * np.eye(n + 2)) / s
    trace_coeff = (a_R + 2 * c * d) / s
    const_coeff = (b_R + d ** 2 + a_R * c * d) / s ** 2
    discriminant = trace_coeff ** 2 - 4 * const_coeff

    if discriminant < -1e-12:
        if n != 2:
            raise ExampleConstructionError("복소 고윳값 쌍을 가진 이차 초곡면은 n=2 에서만 존재합니다.")
        a_coeffs = np.array([1.0, -trace_coeff, const_coeff])
        H = mean_curvatures(a_coeffs, eps, n)
        kind = CanonicalKind.II
        kappas: Tuple[float, ...] = ()
    else:
        kappa = trace_coeff / 2
        H = np.array([(eps * kappa) ** k for k in range(n + 1)])
        kind = CanonicalKind.III
        kappas = tuple([kappa] * n)

    affine_rule = _generic_affine(W, np.zeros(n + 2), H, n, eps, c)
    ck, _ = newton_constants(n, eps)

    def quadric_rule(k: int) -> Tuple[np.ndarray, np.ndarray]:
        H_next = H[k + 1] if k + 1 <= n else 0.0
        A = (ck[k] * H_next / s) * R - (ck[k] * H_next * c * d / s + c * ck[k] * H[k]) * np.eye(n + 2)
        return A, np.zeros(n + 2)

    G = sig.metric
    GR = G @ R
    residual, jacobian = _quadratic_constraints(G, c, lambda x: x @ GR @ x - d, lambda x: 2.0 * (GR @ x))

    def sampler(count: int, rng: np.random.Generator) -> np.ndarray:
        return sample_on_constraints(rng, n + 2, count, residual, jacobian)

    example_id = example_id or f"quadric:c={c},d={_format_value(d)},n={n}"
    label = "Lorentzian quadric <Rx,x>=d" if eps == 1 else "Riemannian quadric <Rx,x>=d"
    logger.debug(f"이차 초곡면 생성: {example_id}, μ_S = t² - {trace_coeff:.6g}t + {const_coeff:.6g}")
    example = HypersurfaceExample(
        id=example_id,
        family="quadric",
        space=space,
        eps=eps,
        gauss_linear=W,
        gauss_offset=np.zeros(n + 2),
        closed_H=H,
        principal_curvatures=kappas,
        expected_kind=kind,
        metadata=label,
        constraint=residual,
        sampler=sampler,
        affine_rule=quadric_rule,
        predicted_min_poly=(1.0, -trace_coeff, const_coeff),
        details={"mu_R_cd": float(mu_cd), "discriminant": float(discriminant), "d": float(d)},
    )
    # 표시된 A 공식과 일반형 c_kH_{k+1}W - c c_kH_kI 가 일치해야 한다
    A_generic, _ = affine_rule(0)
    if not np.allclose(A_generic, example.predicted_A(0), atol=1e-10):
        raise ExampleConstructionError("이차 초곡면의 A 공식이 일반형과 다릅니다.")
    return example


# ---------------------------------------------------------------------------
# k-극대 예제
# ---------------------------------------------------------------------------

K_MAXIMAL_ROWS = {
    1: (1, 1),    # (δ1, ρ), r ∈ (0, 1)
    -1: (0, -1),
}


def _product_H(c: int, delta1: int, rho: int, r: float, m: int, n: int, j: int) -> float:
    delta2 = 1 - delta1
    w = np.sqrt(abs(rho - c * r ** 2))
    eps = 1 if rho - c * r ** 2 > 0 else -1
    kappa1 = (rho * c * r ** 2 - delta1) / (r * w)
    kappa2 = (rho * c * r ** 2 - delta2) / (r * w)
    kappas = [kappa1] * m + [kappa2] * (n - m)
    return eps ** j * mu_subset(kappas, j) / comb(n, j)


def _find_k_maximal_radius(c: int, n: int, k: int, m: int) -> Optional[float]:
    delta1, rho = K_MAXIMAL_ROWS[c]
    grid = np.linspace(0.01, 0.99, 197)
    values = [_product_H(c, delta1, rho, r, m, n, k + 1) for r in grid]
    for left, right, f_left, f_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_left == 0.0:
            return float(left)
        if f_left * f_right < 0:
            return float(brentq(lambda r: _product_H(c, delta1, rho, r, m, n, k + 1), left, right, xtol=1e-15))
    return None


def k_maximal_flat_example(n: int, k: int, c: int = 1, m: Optional[int] = None,
                           example_id: Optional[str] = None) -> HypersurfaceExample:
    """
    H_{k+1} = 0 이 되도록 r 을 맞춘 표준 곱, A = -c c_k H_k I 로 재표시

    Raises:
        ExampleConstructionError: 허용 범위에 근이 없는 경우
    """
    if c not in (1, -1):
        raise ExampleConstructionError("c는 +1 또는 -1이어야 합니다.")
    if not 0 <= k <= n - 1:
        raise ExampleConstructionError(f"k는 0 이상 {n - 1} 이하여야 합니다.")
    candidates = [m] if m is not None else list(range(1, n))
    radius = None
    chosen_m = None
    for candidate in candidates:
        if not 1 <= candidate <= n - 1:
            raise ExampleConstructionError(f"m은 1 이상 {n - 1} 이하여야 합니다. (입력값: {candidate})")
        radius = _find_k_maximal_radius(c, n, k, candidate)
        if radius is not None:
            chosen_m = candidate
            break
    if radius is None:
        raise ExampleConstructionError(f"r ∈ (0,1) 에서 H_{k + 1} = 0 인 근이 없습니다. (n={n}, k={k}, c={c})")

    delta1, rho = K_MAXIMAL_ROWS[c]
    params = ProductParams(c=c, m=chosen_m, delta1=delta1, rho=rho, r=radius)
    base = standard_product(params, n)
    ck, _ = newton_constants(n, base.eps)
    H = base.closed_H.copy()
    H[k + 1] = 0.0
    base_rule = base.affine_rule

    def affine_rule(j: int) -> Tuple[np.ndarray, np.ndarray]:
        if j == k:
            return -c * ck[k] * H[k] * np.eye(n + 2), np.zeros(n + 2)
        return base_rule(j)

    example_id = example_id or f"kmaximal:c={c},n={n},k={k},m={chosen_m}"
    logger.info(f"k-극대 예제: {example_id}, r={radius:.12f}")
    details = dict(base.details)
    details["r"] = radius
    return HypersurfaceExample(
        id=example_id,
        family="kmaximal",
        space=base.space,
        eps=base.eps,
        gauss_linear=base.gauss_linear,
        gauss_offset=base.gauss_offset,
        closed_H=H,
        principal_curvatures=base.principal_curvatures,
        expected_kind=base.expected_kind,
        metadata=f"{base.metadata}, r={radius:.6f}",
        constraint=base.constraint,
        sampler=base.sampler,
        affine_rule=affine_rule,
        tuned_k=k,
        details=details,
    )


# ---------------------------------------------------------------------------
# ID 문법과 목록
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyInfo:
    """예제 계열 설명"""
    name: str
    schema: str
    realizes: str
    instances: Tuple[str, ...]


FAMILIES: Tuple[FamilyInfo, ...] = (
    FamilyInfo(
        name="umbilical",
        schema="c∈{1,-1}, aa∈{-1,0,1}, tau (aa - c·tau² ≠ 0), n (기본 3)",
        realizes="totally umbilical slices <a,x> = tau",
        instances=(
            "umbilical:c=1,aa=-1,tau=0.5",
            "umbilical:c=1,aa=0,tau=0.5",
            "umbilical:c=1,aa=1,tau=2",
            "umbilical:c=1,aa=1,tau=0.5",
            "umbilical:c=1,aa=1,tau=0",
            "umbilical:c=-1,aa=-1,tau=2",
            "umbilical:c=-1,aa=-1,tau=0.5",
            "umbilical:c=-1,aa=0,tau=0.5",
            "umbilical:c=-1,aa=1,tau=0.5",
        ),
    ),
    FamilyInfo(
        name="product",
        schema="c, d1∈{0,1}, rho∈{1,-1}, r>0, m∈[1,n-1], n (기본 3)",
        realizes="standard pseudo-Riemannian products (both sign tables)",
        instances=(
            "product:c=1,d1=1,rho=1,r=0.6,m=1",
            "product:c=1,d1=1,rho=-1,r=0.6,m=1",
            "product:c=1,d1=1,rho=-1,r=2,m=2,n=4",
            "product:c=1,d1=0,rho=1,r=0.6,m=1",
            "product:c=1,d1=0,rho=1,r=2,m=2",
            "product:c=-1,d1=1,rho=-1,r=2,m=1",
            "product:c=-1,d1=1,rho=-1,r=1.5,m=2,n=4",
            "product:c=-1,d1=0,rho=1,r=0.6,m=1",
            "product:c=-1,d1=0,rho=1,r=2,m=2,n=4",
            "product:c=-1,d1=0,rho=-1,r=0.6,m=1",
            "product:c=-1,d1=0,rho=-1,r=2,m=2",
        ),
    ),
    FamilyInfo(
        name="quadric",
        schema="c, R∈{J2,N2}, d (μ_R(cd) ≠ 0), n (기본 2)",
        realizes="quadratic hypersurfaces with non-diagonalizable shape operator",
        instances=(
            "quadric:c=-1,R=J2,d=1",
            "quadric:c=-1,R=N2,d=1,n=3",
        ),
    ),
    FamilyInfo(
        name="kmaximal",
        schema="c, n, k (0 ≤ k ≤ n-2), m (선택)",
        realizes="k-maximal products with H_{k+1} = 0",
        instances=(
            "kmaximal:c=1,n=2,k=0,m=1",
            "kmaximal:c=1,n=3,k=1,m=1",
            "kmaximal:c=-1,n=3,k=0,m=1",
        ),
    ),
)

_ID_PATTERN = re.compile(r"^(?P<family>[a-z]+):(?P<body>[A-Za-z0-9_.,=+\-]*)$")

_ALLOWED_KEYS = {
    "umbilical": {"c", "aa", "tau", "n"},
    "product": {"c", "d1", "rho", "r", "m", "n"},
    "quadric": {"c", "R", "d", "n"},
    "kmaximal": {"c", "n", "k", "m"},
}

_REQUIRED_KEYS = {
    "umbilical": {"c", "aa", "tau"},
    "product": {"c", "d1", "rho", "r", "m"},
    "quadric": {"c", "R", "d"},
    "kmaximal": {"c", "n", "k"},
}


def parse_example_id(example_id: str) -> Tuple[str, Dict[str, str]]:
    """
    'family:key=value,...' 형식의 ID 해석

    Raises:
        UnknownExampleError: 문법 오류, 알 수 없는 계열 또는 키
    """
    match = _ID_PATTERN.match(example_id.strip())
    if not match:
        raise UnknownExampleError(f"ID 형식이 올바르지 않습니다: {example_id}")
    family = match.group("family")
    if family not in _ALLOWED_KEYS:
        raise UnknownExampleError(f"알 수 없는 예제 계열입니다: {family}")
    params: Dict[str, str] = {}
    body = match.group("body")
    for item in filter(None, body.split(",")):
        if "=" not in item:
            raise UnknownExampleError(f"'key=value' 형식이 아닙니다: {item}")
        key, value = item.split("=", 1)
        if key not in _ALLOWED_KEYS[family]:
            raise UnknownExampleError(f"{family} 계열에 없는 키입니다: {key}")
        params[key] = value
    missing = _REQUIRED_KEYS[family] - params.keys()
    if missing:
        raise UnknownExampleError(f"필수 키가 없습니다: {', '.join(sorted(missing))}")
    return family, params


def _as_int(params: Dict[str, str], key: str) -> int:
    try:
        return int(params[key])
    except ValueError:
        raise UnknownExampleError(f"{key}는 정수여야 합니다. (입력값: {params[key]})")


def _as_float(params: Dict[str, str], key: str) -> float:
    try:
        return float(params[key])
    except ValueError:
        raise UnknownExampleError(f"{key}는 실수여야 합니다. (입력값: {params[key]})")


def build_example(example_id: str) -> HypersurfaceExample:
    """
    카탈로그 ID 로 예제 생성

    Raises:
        UnknownExampleError: ID 해석 실패
        ExampleConstructionError: 매개변수가 유효하지 않은 경우
    """
    family, params = parse_example_id(example_id)
    c = _as_int(params, "c")
    try:
        if family == "umbilical":
            n = _as_int(params, "n") if "n" in params else settings.DEFAULT_N
            aa = _as_int(params, "aa")
            p = UmbilicalParams(c=c, a_vec=default_axis(aa, n), tau=_as_float(params, "tau"))
            return totally_umbilical(p, n, example_id=example_id)
        if family == "product":
            n = _as_int(params, "n") if "n" in params else settings.DEFAULT_N
            p = ProductParams(
                c=c, m=_as_int(params, "m"), delta1=_as_int(params, "d1"),
                rho=_as_int(params, "rho"), r=_as_float(params, "r"),
            )
            return standard_product(p, n, example_id=example_id)
        if family == "quadric":
            n = _as_int(params, "n") if "n" in params else 2
            R = named_quadric_matrix(params["R"], c, n)
            p = QuadricParams(c=c, R=R, d=_as_float(params, "d"))
            return quadratic_hypersurface(p, n, example_id=example_id)
        m = _as_int(params, "m") if "m" in params else None
        return k_maximal_flat_example(_as_int(params, "n"), _as_int(params, "k"), c=c, m=m, example_id=example_id)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise ExampleConstructionError(f"{example_id}: {messages}")
    except ContractViolationError as e:
        raise ExampleConstructionError(f"{example_id}: {e.message}")


def list_families(c: Optional[int] = None) -> List[FamilyInfo]:
    """계열 목록 (c 지정 시 해당 c 의 인스턴스만)"""
    if c is None:
        return list(FAMILIES)
    filtered = []
    for info in FAMILIES:
        instances = tuple(i for i in info.instances if f"c={c}," in i or i.endswith(f"c={c}"))
        if instances:
            filtered.append(FamilyInfo(info.name, info.schema, info.realizes, instances))
    return filtered


def shipped_example_ids(c: Optional[int] = None) -> List[str]:
    """배포되는 모든 인스턴스 ID"""
    return [i for info in list_families(c) for i in info.instances]
