"""
무작위 속성 검사 모음
트레이스 항등식, 케일리-해밀턴, 표준형, 곱 규칙, 특성다항식, 리치 곡률, 이중 경로 L_k
"""
import logging
from math import comb
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from lkgeo.services.canonical_forms import (
    BLOCK_SIZES,
    CanonicalForm,
    CanonicalKind,
    canonical_pk_check,
    canonical_shape,
    classify,
)
from lkgeo.services.catalog import HypersurfaceExample, build_example
from lkgeo.services.curvature_calculus import (
    ShapeData,
    char_coeffs,
    curvature_profile,
    lemma1_traces,
    mu_subset,
    newton_transforms,
    ricci_and_scalar,
)
from lkgeo.services.verification import evaluate_point, lk_coord, product_rule_check
from lkgeo.utils.error_handler import (
    ClassificationError,
    ConsistencyError,
    ContractViolationError,
    validate_suite,
)
from lkgeo.utils.monitoring import measure_time
from lkgeo.utils.sampling import make_rng

logger = logging.getLogger(__name__)

SUITE_NAMES = ("lemma1", "cayley", "canonical", "product_rule", "charpoly", "ricci", "dual_path")
VALID_SUITES = SUITE_NAMES + ("all",)

# III/IV 블록 고윳값과 나머지 주곡률 사이의 최소 간격
BLOCK_SEPARATION = 0.05

# 예제 기반 속성 검사에 쓰는 예제
PROPERTY_EXAMPLES = (
    "product:c=1,d1=1,rho=1,r=0.6,m=1",
    "product:c=-1,d1=0,rho=1,r=2,m=2,n=4",
    "quadric:c=-1,R=J2,d=1",
    "quadric:c=-1,R=N2,d=1,n=3",
    "umbilical:c=1,aa=1,tau=0.5",
)

SUITE_BOUNDS = {
    "lemma1": 1e-10,
    "cayley": 1e-9,
    "canonical": 1e-9,
    "product_rule": 1e-9,
    "charpoly": 1e-9,
    "ricci": 1e-9,
    "dual_path": 1e-9,
}


class SuiteResult(BaseModel):
    """속성 검사 모음 하나의 결과"""
    suite: str
    trials: int
    seed: int
    max_deviation: float
    bound: float
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class _Tally:
    worst: float = 0.0
    failures: int = 0

    def record(self, deviation: float, bound: float) -> None:
        if not np.isfinite(deviation) or deviation > bound:
            self.failures += 1
        if np.isfinite(deviation):
            self.worst = max(self.worst, float(deviation))
        else:
            self.worst = float("inf")


# ---------------------------------------------------------------------------
# 무작위 입력 생성
# ---------------------------------------------------------------------------

def random_shape(rng: np.random.Generator, n: Optional[int] = None) -> ShapeData:
    """무작위 자기수반 형상 연산자 (ε=1 이면 로렌츠 gram, ε=-1 이면 유클리드 gram)"""
    n = int(rng.integers(2, 9)) if n is None else n
    eps = 1 if rng.random() < 0.5 else -1
    c = 1 if rng.random() < 0.5 else -1
    gram = np.eye(n)
    if eps == 1:
        gram[0, 0] = -1.0
    sym = rng.standard_normal((n, n)) / np.sqrt(n)
    sym = 0.5 * (sym + sym.T)
    return ShapeData(S=np.linalg.solve(gram, sym), gram=gram, eps=eps, c=c)


def random_canonical_form(rng: np.random.Generator, max_dim: int = 8) -> CanonicalForm:
    """
    κ ~ U[-3,3], b ~ U[0.1,3] 인 무작위 표준형 (차원 ≤ max_dim)

    III/IV 형은 추가 주곡률을 블록 고윳값에서 BLOCK_SEPARATION 이상 떨어뜨린다.
    """
    kind = CanonicalKind(rng.choice([k.value for k in CanonicalKind]))
    block = BLOCK_SIZES[kind]
    extra = int(rng.integers(1 if kind == CanonicalKind.I else 0, max_dim - block + 1))
    kappa = float(rng.uniform(-3.0, 3.0))
    kappas: List[float] = []
    while len(kappas) < extra:
        value = float(rng.uniform(-3.0, 3.0))
        if kind in (CanonicalKind.III, CanonicalKind.IV) and abs(value - kappa) < BLOCK_SEPARATION:
            continue
        kappas.append(value)
    if kind == CanonicalKind.I:
        return CanonicalForm(kind=kind, kappas=tuple(kappas))
    b_rot = float(rng.uniform(0.1, 3.0)) if kind == CanonicalKind.II else None
    return CanonicalForm(kind=kind, kappa=kappa, b_rot=b_rot, kappas=tuple(kappas))


def conjugated_shape(form: CanonicalForm, rng: np.random.Generator) -> ShapeData:
    """T = I + 0.2·G/√n 로 틀을 바꾼 표준형 (자기수반성 보존)"""
    shape = canonical_shape(form)
    n = shape.n
    T = np.eye(n) + 0.2 * rng.standard_normal((n, n)) / np.sqrt(n)
    S = np.linalg.solve(T, shape.S @ T)
    gram = T.T @ shape.gram @ T
    return ShapeData(S=S, gram=0.5 * (gram + gram.T), eps=shape.eps, c=shape.c)


# ---------------------------------------------------------------------------
# 개별 검사
# ---------------------------------------------------------------------------

def _lemma1_trial(rng: np.random.Generator, bound: float, tally: _Tally) -> None:
    shape = random_shape(rng)
    profile = curvature_profile(shape)
    scale_base = 1.0 + np.linalg.norm(shape.S, 2)
    for record in lemma1_traces(shape, profile):
        scale = scale_base ** (record.k + 2)
        deviation = max(
            record.max_deviation(),
            abs(record.tr_P - record.tr_P_h_form),
            abs(record.tr_SP - record.tr_SP_h_form),
            abs(record.tr_S2P - record.tr_S2P_h_form),
        ) / scale
        tally.record(deviation, bound)


def _cayley_trial(rng: np.random.Generator, bound: float, tally: _Tally) -> None:
    shape = random_shape(rng)
    n = shape.n
    try:
        P = newton_transforms(shape, char_coeffs(shape), tol=bound)
    except ConsistencyError as e:
        tally.record(float(e.deviation), bound)
        return
    tally.record(float(np.max(np.abs(P[n]))) / max(1.0, np.linalg.norm(shape.S, 2)) ** n, bound)


def _canonical_trial(rng: np.random.Generator, bound: float, tally: _Tally) -> None:
    form = random_canonical_form(rng)
    for k in range(form.dimension + 1):
        _, deviation = canonical_pk_check(form, k, tol=bound)
        scale = max(1.0, np.linalg.norm(canonical_shape(form).S, 2)) ** k
        tally.record(deviation / scale, bound)
    try:
        recovered = classify(conjugated_shape(form, rng))
        tally.record(0.0 if recovered.kind == form.kind else float("inf"), bound)
    except ClassificationError as e:
        logger.debug(f"표준형 왕복 분류 실패: {e.message}")
        tally.record(float("inf"), bound)


def charpoly_reference(form: CanonicalForm) -> np.ndarray:
    """
    주곡률의 기본대칭식으로 만든 특성다항식 계수

    a_k = (-1)^k μ_k, II 형은 a_k = (-1)^k (μ_k + b²·μ_{k-2}^{1,2})
    """
    mu = form.principal_list
    rotation = form.b_rot ** 2 if form.kind == CanonicalKind.II else 0.0
    reference = np.zeros(form.dimension + 1)
    for k in range(form.dimension + 1):
        value = mu_subset(mu, k)
        if rotation:
            value += rotation * mu_subset(mu, k - 2, (1, 2))
        reference[k] = (-1.0) ** k * value
    return reference


def _charpoly_trial(rng: np.random.Generator, bound: float, tally: _Tally) -> None:
    form = random_canonical_form(rng)
    shape = conjugated_shape(form, rng)
    n = shape.n
    a = char_coeffs(shape)
    reference = charpoly_reference(form)
    radius = max(1.0, np.linalg.norm(shape.S, 2))
    deviation = max(abs(a[k] - reference[k]) / (comb(n, k) * radius ** k) for k in range(n + 1))
    tally.record(float(deviation), bound)


def _ricci_trial(rng: np.random.Generator, bound: float, tally: _Tally) -> None:
    shape = random_shape(rng)
    data = ricci_and_scalar(shape, curvature_profile(shape))
    symmetric = float(np.max(np.abs(data.ric - data.ric.T)))
    tally.record(max(data.deviation, symmetric) / (1.0 + np.linalg.norm(shape.S, 2)) ** 2, bound)


class _ExamplePool:
    """예제별 샘플 점을 한 번씩만 생성"""

    def __init__(self, ids: Tuple[str, ...] = PROPERTY_EXAMPLES):
        self.ids = ids
        self._examples: Dict[str, HypersurfaceExample] = {}

    def example(self, example_id: str) -> HypersurfaceExample:
        if example_id not in self._examples:
            self._examples[example_id] = build_example(example_id)
        return self._examples[example_id]

    def random_point(self, rng: np.random.Generator):
        example = self.example(self.ids[int(rng.integers(len(self.ids)))])
        k = int(rng.integers(0, example.n))
        x = example.sampler(1, rng)[0]
        return example, evaluate_point(example, x, k)


def _product_rule_trial(rng: np.random.Generator, bound: float, tally: _Tally, pool: _ExamplePool) -> None:
    example, point = pool.random_point(rng)
    dim = example.n + 2
    a1 = rng.standard_normal(dim)
    a2 = rng.standard_normal(dim)
    size = 1.0 + np.linalg.norm(point.x)
    scale = point.scale() * (1.0 + np.linalg.norm(a1) * size) * (1.0 + np.linalg.norm(a2) * size)
    tally.record(product_rule_check(a1, a2, point) / scale, bound)


def _dual_path_trial(rng: np.random.Generator, bound: float, tally: _Tally, pool: _ExamplePool) -> None:
    example, point = pool.random_point(rng)
    a_vec = rng.standard_normal(example.n + 2)
    tally.record(lk_coord(a_vec, point, strict=False).deviation, bound)


# ---------------------------------------------------------------------------
# 실행
# ---------------------------------------------------------------------------

def run_suite(suite: str, trials: int = 1000, seed: int = 0) -> SuiteResult:
    """
    이름 있는 속성 검사 모음 하나를 trials 회 실행

    Raises:
        ContractViolationError: 알 수 없는 모음이거나 trials 가 음수인 경우
    """
    validate_suite(suite, SUITE_NAMES)
    if trials < 0:
        raise ContractViolationError(f"trials는 0 이상이어야 합니다. (입력값: {trials})", field="trials")
    if trials == 0:
        logger.warning(f"{suite}: trials=0, 검사 없이 통과 처리합니다.")

    rng = make_rng(seed)
    bound = SUITE_BOUNDS[suite]
    tally = _Tally()
    pool = _ExamplePool()
    simple: Dict[str, Callable[[np.random.Generator, float, _Tally], None]] = {
        "lemma1": _lemma1_trial,
        "cayley": _cayley_trial,
        "canonical": _canonical_trial,
        "charpoly": _charpoly_trial,
        "ricci": _ricci_trial,
    }
    with measure_time("props", suite=suite, trials=trials) as timing:
        for _ in range(trials):
            if suite in simple:
                simple[suite](rng, bound, tally)
            elif suite == "product_rule":
                _product_rule_trial(rng, bound, tally, pool)
            else:
                _dual_path_trial(rng, bound, tally, pool)

    result = SuiteResult(
        suite=suite, trials=trials, seed=seed,
        max_deviation=tally.worst, bound=bound,
        failures=tally.failures,
    )
    if result.failures:
        logger.warning(f"{suite}: {result.failures}건 실패 (최대 편차 {result.max_deviation:.3e})")
    else:
        logger.info(f"{suite}: {trials}회 통과 (최대 편차 {result.max_deviation:.3e}, {timing.elapsed:.2f}초)")
    return result


def run_suites(suite: str = "all", trials: int = 1000, seed: int = 0) -> List[SuiteResult]:
    """'all' 이면 모든 모음을 같은 시드로 순서대로 실행"""
    validate_suite(suite, VALID_SUITES)
    names = SUITE_NAMES if suite == "all" else (suite,)
    return [run_suite(name, trials=trials, seed=seed) for name in names]
