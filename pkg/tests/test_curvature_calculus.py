"""
곡률 계산 모듈 테스트
"""
import numpy as np
import pytest

from lkgeo.services.curvature_calculus import (
    ShapeData,
    char_coeffs,
    curvature_profile,
    lemma1_traces,
    mean_curvatures,
    mu_subset,
    newton_constants,
    newton_transforms,
    ricci_and_scalar,
)
from lkgeo.utils.error_handler import ConsistencyError, ContractViolationError
from lkgeo.utils.sampling import make_rng

LORENTZ_GRAM = np.diag([-1.0, 1.0, 1.0])


@pytest.fixture
def diagonal_shape() -> ShapeData:
    return ShapeData(S=np.diag([1.0, 2.0, 3.0]), gram=LORENTZ_GRAM, eps=1, c=1)


class TestShapeData:
    """형상 연산자 데이터 검증"""

    def test_invalid_eps(self):
        """ε 는 ±1"""
        with pytest.raises(ContractViolationError):
            ShapeData(S=np.eye(2), gram=np.eye(2), eps=0, c=1)

    def test_gram_shape_mismatch(self):
        """gram 차원 불일치"""
        with pytest.raises(ContractViolationError) as exc:
            ShapeData(S=np.eye(2), gram=np.eye(3), eps=1, c=1)
        assert exc.value.field == "gram"

    def test_validate_rejects_non_self_adjoint(self):
        """gram 에 대해 자기수반이 아닌 S"""
        shape = ShapeData(S=np.array([[0.0, 1.0], [1.0, 0.0]]), gram=np.diag([-1.0, 1.0]), eps=1, c=1)
        with pytest.raises(ContractViolationError):
            shape.validate()

    def test_validate_accepts_self_adjoint(self, diagonal_shape):
        """대각 S 는 통과"""
        assert diagonal_shape.validate() is diagonal_shape


class TestCharCoeffs:
    """특성다항식 계수 테스트"""

    def test_diagonal(self, diagonal_shape):
        """(t-1)(t-2)(t-3)"""
        assert np.allclose(char_coeffs(diagonal_shape), [1.0, -6.0, 11.0, -6.0])

    def test_matches_numpy(self, rng):
        """numpy.poly 와 일치"""
        S = rng.standard_normal((5, 5))
        shape = ShapeData(S=S, gram=np.eye(5), eps=-1, c=1)
        assert np.allclose(char_coeffs(shape), np.real(np.poly(S)), atol=1e-9)


class TestMeanCurvatures:
    """고차 평균곡률 테스트"""

    def test_spacelike_normal(self):
        """ε=1: H_k = μ_k / binom(n,k)"""
        H = mean_curvatures([1.0, -6.0, 11.0, -6.0], eps=1, n=3)
        assert np.allclose(H, [1.0, 2.0, 11.0 / 3.0, 6.0])

    def test_timelike_normal(self):
        """ε=-1: 홀수 차수 부호 반전"""
        H = mean_curvatures([1.0, -6.0, 11.0, -6.0], eps=-1, n=3)
        assert np.allclose(H, [1.0, -2.0, 11.0 / 3.0, -6.0])

    def test_length_mismatch(self):
        """계수 길이 불일치"""
        with pytest.raises(ContractViolationError):
            mean_curvatures([1.0, 0.0], eps=1, n=3)


class TestNewtonConstants:
    """c_k, C_k 상수 테스트"""

    def test_spacelike(self):
        """n=3, ε=1"""
        ck, Ck = newton_constants(3, 1)
        assert np.allclose(ck, [3.0, -6.0, 3.0, 0.0])
        assert np.allclose(Ck, [3.0, -3.0, 1.0, 0.0])

    def test_timelike(self):
        """n=3, ε=-1 은 모두 양수"""
        ck, _ = newton_constants(3, -1)
        assert np.allclose(ck, [3.0, 6.0, 3.0, 0.0])


class TestNewtonTransforms:
    """뉴턴 변환 테스트"""

    def test_diagonal_eigenvalues(self, diagonal_shape):
        """P_1 e_i = -μ_1^i e_i"""
        P = newton_transforms(diagonal_shape, char_coeffs(diagonal_shape))
        assert np.allclose(P[0], np.eye(3))
        assert np.allclose(P[1], np.diag([-5.0, -4.0, -3.0]))
        assert np.allclose(P[2], np.diag([6.0, 3.0, 2.0]))
        assert np.allclose(P[3], 0.0)

    def test_cayley_hamilton_violation(self, diagonal_shape):
        """잘못된 계수는 P_n ≠ 0"""
        with pytest.raises(ConsistencyError) as exc:
            newton_transforms(diagonal_shape, [1.0, 0.0, 0.0, 0.0])
        assert exc.value.deviation > 0

    def test_length_mismatch(self, diagonal_shape):
        """계수 길이 불일치"""
        with pytest.raises(ContractViolationError):
            newton_transforms(diagonal_shape, [1.0, -6.0])

    def test_commutes_with_shape(self, rng):
        """P_k 는 S 와 가환"""
        sym = rng.standard_normal((4, 4))
        gram = np.diag([-1.0, 1.0, 1.0, 1.0])
        shape = ShapeData(S=np.linalg.solve(gram, sym + sym.T), gram=gram, eps=1, c=-1)
        profile = curvature_profile(shape)
        for Pk in profile.P:
            assert np.allclose(Pk @ shape.S, shape.S @ Pk, atol=1e-9)


class TestCurvatureProfile:
    """곡률 프로파일 테스트"""

    def test_H_beyond_range(self, diagonal_shape):
        """j > n 이면 0"""
        profile = curvature_profile(diagonal_shape)
        assert profile.H_at(4) == 0.0
        assert profile.a_at(5) == 0.0
        assert profile.H_at(1) == pytest.approx(2.0)

    def test_umbilical_shape(self):
        """S = κI 이면 H_k = (εκ)^k"""
        shape = ShapeData(S=0.5 * np.eye(3), gram=np.eye(3), eps=-1, c=1)
        profile = curvature_profile(shape)
        assert np.allclose(profile.H, [1.0, -0.5, 0.25, -0.125])


class TestTraceIdentities:
    """트레이스 항등식 테스트"""

    def test_identities_hold(self, rng):
        """측정값, a 형태, H 형태가 일치"""
        sym = rng.standard_normal((5, 5))
        gram = np.diag([-1.0, 1.0, 1.0, 1.0, 1.0])
        shape = ShapeData(S=np.linalg.solve(gram, 0.5 * (sym + sym.T)), gram=gram, eps=1, c=1)
        profile = curvature_profile(shape)
        records = lemma1_traces(shape, profile)
        assert [r.k for r in records] == list(range(6))
        for record in records:
            assert record.max_deviation() < 1e-8
            assert record.tr_P == pytest.approx(record.tr_P_h_form, abs=1e-8)
            assert record.tr_SP == pytest.approx(record.tr_SP_h_form, abs=1e-8)
            assert record.tr_S2P == pytest.approx(record.tr_S2P_h_form, abs=1e-8)

    def test_top_order_vanishes(self, diagonal_shape):
        """k = n 에서 모든 트레이스가 0"""
        records = lemma1_traces(diagonal_shape, curvature_profile(diagonal_shape))
        top = records[-1]
        assert top.tr_P == pytest.approx(0.0, abs=1e-12)
        assert top.tr_SP == pytest.approx(0.0, abs=1e-12)


class TestMuSubset:
    """기본대칭식 테스트"""

    def test_full(self):
        """μ_2(1,2,3) = 11"""
        assert mu_subset([1.0, 2.0, 3.0], 2) == pytest.approx(11.0)

    def test_excluded(self):
        """첫 첨자 제외"""
        assert mu_subset([1.0, 2.0, 3.0], 1, [1]) == pytest.approx(5.0)

    def test_zero_order(self):
        """k=0 은 1"""
        assert mu_subset([1.0, 2.0], 0) == 1.0

    def test_out_of_range(self):
        """범위 밖은 0"""
        assert mu_subset([1.0, 2.0, 3.0], 4) == 0.0
        assert mu_subset([1.0, 2.0, 3.0], -1) == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_expansion_in_one_index(self, seed):
        """μ_k^J = κ_m μ_{k-1}^{J∪{m}} + μ_k^{J∪{m}} (m ∉ J)"""
        rng = make_rng(seed)
        n = int(rng.integers(3, 8))
        kappas = list(rng.uniform(-3.0, 3.0, size=n))
        for _ in range(10):
            J = {int(i) for i in rng.choice(np.arange(1, n + 1), size=int(rng.integers(0, n - 1)), replace=False)}
            m = int(rng.choice([i for i in range(1, n + 1) if i not in J]))
            for k in range(0, n + 1):
                lhs = mu_subset(kappas, k, J)
                rhs = kappas[m - 1] * mu_subset(kappas, k - 1, J | {m}) + mu_subset(kappas, k, J | {m})
                assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-9)


class TestRicci:
    """리치 곡률과 스칼라 곡률 테스트"""

    def test_totally_geodesic(self):
        """S = 0 이면 Ric = (n-1)c g, Scal = n(n-1)c"""
        shape = ShapeData(S=np.zeros((3, 3)), gram=LORENTZ_GRAM, eps=1, c=1)
        data = ricci_and_scalar(shape, curvature_profile(shape))
        assert np.allclose(data.ric, 2.0 * LORENTZ_GRAM)
        assert data.scal == pytest.approx(6.0)
        assert data.deviation == pytest.approx(0.0, abs=1e-12)

    def test_trace_matches_closed_form(self, diagonal_shape):
        """Scal = n(n-1)(c + εH_2) = tr(Ric)"""
        data = ricci_and_scalar(diagonal_shape, curvature_profile(diagonal_shape))
        assert data.scal == pytest.approx(6.0 * (1.0 + 11.0 / 3.0))
        assert data.deviation < 1e-10
