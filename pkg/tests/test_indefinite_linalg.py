"""
부정부호 내적 공간 선형대수 테스트
"""
import numpy as np
import pytest

from lkgeo.services.indefinite_linalg import (
    AmbientSpaceForm,
    Signature,
    inner,
    is_metric_self_adjoint,
    minimal_polynomial,
    restrict_endomorphism,
    self_adjoint_defect,
    tangent_space,
)
from lkgeo.utils.error_handler import ContractViolationError, IllConditionedError


class TestSignature:
    """계량 부호 테스트"""

    def test_metric_diagonal(self):
        """음의 성분이 앞쪽에 위치"""
        sig = Signature(dim=4, index=1)
        assert np.array_equal(sig.metric, np.diag([-1.0, 1.0, 1.0, 1.0]))

    def test_index_two(self):
        """지표 2"""
        sig = Signature(dim=5, index=2)
        assert list(sig.diagonal) == [-1.0, -1.0, 1.0, 1.0, 1.0]

    def test_invalid_dimension(self):
        """차원 0 거부"""
        with pytest.raises(ContractViolationError):
            Signature(dim=0, index=0)

    def test_invalid_index(self):
        """지표가 차원보다 큰 경우"""
        with pytest.raises(ContractViolationError) as exc:
            Signature(dim=3, index=4)
        assert exc.value.error_code == "CONTRACT_VIOLATION_INDEX"


class TestAmbientSpaceForm:
    """공간형식 테스트"""

    def test_de_sitter_index(self):
        """c=1 은 q=1"""
        space = AmbientSpaceForm.of(1, 3)
        assert space.signature.index == 1
        assert space.signature.dim == 5

    def test_anti_de_sitter_index(self):
        """c=-1 은 q=2"""
        space = AmbientSpaceForm.of(-1, 2)
        assert space.signature.index == 2

    def test_mismatched_index(self):
        """c 와 지표 불일치"""
        with pytest.raises(ContractViolationError):
            AmbientSpaceForm(c=-1, signature=Signature(dim=4, index=1), n=2)

    def test_invalid_c(self):
        """c 는 ±1"""
        with pytest.raises(ContractViolationError):
            AmbientSpaceForm.of(0, 2)


class TestInner:
    """부정부호 내적 테스트"""

    def test_timelike(self, lorentz_sig):
        """e_1 은 시간꼴"""
        e1 = np.array([1.0, 0.0, 0.0, 0.0])
        assert inner(e1, e1, lorentz_sig) == -1.0

    def test_null_vector(self, lorentz_sig):
        """e_1 + e_4 는 영벡터"""
        v = np.array([1.0, 0.0, 0.0, 1.0])
        assert inner(v, v, lorentz_sig) == 0.0

    def test_symmetric(self, lorentz_sig, rng):
        """대칭성"""
        x = rng.standard_normal(4)
        y = rng.standard_normal(4)
        assert inner(x, y, lorentz_sig) == pytest.approx(inner(y, x, lorentz_sig))

    def test_length_mismatch(self, lorentz_sig):
        """길이 불일치 거부"""
        with pytest.raises(ContractViolationError):
            inner(np.ones(3), np.ones(4), lorentz_sig)


class TestSelfAdjoint:
    """계량 자기수반성 테스트"""

    def test_boost_generator_is_self_adjoint(self):
        """로렌츠 부스트 생성자 형태는 G 에 대해 자기수반"""
        sig = Signature(dim=2, index=1)
        M = np.array([[0.0, -1.0], [1.0, 0.0]])
        assert self_adjoint_defect(M, sig) == 0.0
        assert is_metric_self_adjoint(M, sig)

    def test_symmetric_matrix_is_not(self):
        """유클리드 대칭 행렬은 로렌츠 계량에서 자기수반이 아님"""
        sig = Signature(dim=2, index=1)
        M = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert self_adjoint_defect(M, sig) == pytest.approx(2.0)
        assert not is_metric_self_adjoint(M, sig)

    def test_shape_mismatch(self, lorentz_sig):
        """차원 불일치"""
        with pytest.raises(ContractViolationError):
            self_adjoint_defect(np.eye(3), lorentz_sig)


class TestMinimalPolynomial:
    """최소다항식 테스트"""

    def test_diagonal_repeated(self):
        """diag(2,3,3) → t² - 5t + 6"""
        poly = minimal_polynomial(np.diag([2.0, 3.0, 3.0]))
        assert np.allclose(poly, [1.0, -5.0, 6.0], atol=1e-10)

    def test_jordan_block(self):
        """2x2 조르당 블록 → (t-2)²"""
        poly = minimal_polynomial(np.array([[2.0, 1.0], [0.0, 2.0]]))
        assert np.allclose(poly, [1.0, -4.0, 4.0], atol=1e-10)

    def test_scalar_matrix(self):
        """스칼라 행렬은 1차"""
        poly = minimal_polynomial(3.0 * np.eye(4))
        assert np.allclose(poly, [1.0, -3.0], atol=1e-12)

    def test_rotation(self):
        """회전 행렬 → t² + 1"""
        poly = minimal_polynomial(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert np.allclose(poly, [1.0, 0.0, 1.0], atol=1e-10)

    def test_non_square(self):
        """정사각 행렬이 아닌 경우"""
        with pytest.raises(ContractViolationError):
            minimal_polynomial(np.ones((2, 3)))

    def test_unclear_gap(self):
        """간격 임계값을 만족할 수 없으면 판정 거부"""
        M = np.diag([1.0, 2.0, 2.0 + 1e-6])
        with pytest.raises(IllConditionedError):
            minimal_polynomial(M, tol=1e-5, gap=1e12)


class TestTangentSpace:
    """접공간 추출 테스트"""

    def test_timelike_normal(self, de_sitter_space):
        """시간꼴 법선 → 리만 접공간"""
        x = np.array([0.0, 0.0, 0.0, 1.0])
        N = np.array([1.0, 0.0, 0.0, 0.0])
        tangent = tangent_space(x, N, de_sitter_space)
        assert tangent.eps == -1
        assert tangent.n == 2
        assert tangent.negative_count() == 0

    def test_spacelike_normal(self, de_sitter_space):
        """공간꼴 법선 → 로렌츠 접공간"""
        x = np.array([0.0, 0.0, 0.0, 1.0])
        N = np.array([0.0, 1.0, 0.0, 0.0])
        tangent = tangent_space(x, N, de_sitter_space)
        assert tangent.eps == 1
        assert tangent.negative_count() == 1

    def test_basis_orthogonal(self, de_sitter_space):
        """기저는 x, N 과 계량 직교"""
        u = 0.3
        x = np.array([np.sinh(u), 0.0, 0.0, np.cosh(u)])
        N = np.array([0.0, 0.0, 1.0, 0.0])
        tangent = tangent_space(x, N, de_sitter_space)
        G = de_sitter_space.signature.metric
        assert np.allclose(tangent.basis.T @ G @ x, 0.0, atol=1e-12)
        assert np.allclose(tangent.basis.T @ G @ N, 0.0, atol=1e-12)

    def test_deterministic(self, de_sitter_space):
        """같은 입력에는 같은 기저"""
        x = np.array([0.0, 0.0, 0.0, 1.0])
        N = np.array([0.0, 1.0, 0.0, 0.0])
        first = tangent_space(x, N, de_sitter_space)
        second = tangent_space(x, N, de_sitter_space)
        assert np.array_equal(first.basis, second.basis)

    def test_coordinates(self, de_sitter_space):
        """접벡터의 기저 좌표 복원"""
        x = np.array([0.0, 0.0, 0.0, 1.0])
        N = np.array([0.0, 1.0, 0.0, 0.0])
        tangent = tangent_space(x, N, de_sitter_space)
        v = tangent.basis @ np.array([1.0, 2.0])
        assert np.allclose(tangent.coordinates(v, de_sitter_space.signature), [1.0, 2.0])

    def test_point_off_space_form(self, de_sitter_space):
        """<x,x> ≠ c"""
        with pytest.raises(ContractViolationError) as exc:
            tangent_space(np.array([0.0, 0.0, 0.0, 2.0]), np.array([1.0, 0.0, 0.0, 0.0]), de_sitter_space)
        assert exc.value.field == "x"

    def test_normal_not_orthogonal(self, de_sitter_space):
        """<x,N> ≠ 0"""
        x = np.array([0.0, 0.0, 0.0, 1.0])
        N = np.array([0.0, 0.0, 0.6, 0.8])
        with pytest.raises(ContractViolationError):
            tangent_space(x, N, de_sitter_space)

    def test_restrict_identity(self, de_sitter_space):
        """-I 의 제한은 -I_n"""
        x = np.array([0.0, 0.0, 0.0, 1.0])
        N = np.array([1.0, 0.0, 0.0, 0.0])
        tangent = tangent_space(x, N, de_sitter_space)
        S = restrict_endomorphism(-np.eye(4), tangent, de_sitter_space.signature)
        assert np.allclose(S, -np.eye(2))
