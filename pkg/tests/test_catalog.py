"""
초곡면 예제 카탈로그 테스트
"""
import numpy as np
import pytest

from lkgeo.services.canonical_forms import CanonicalKind
from lkgeo.services.catalog import (
    FAMILIES,
    ProductParams,
    build_example,
    default_axis,
    list_families,
    parse_example_id,
    product_groups,
    shipped_example_ids,
    umbilical_case,
)
from lkgeo.services.indefinite_linalg import inner
from lkgeo.utils.error_handler import ExampleConstructionError, UnknownExampleError
from tests.conftest import J2_ID, KMAXIMAL_ID, N2_ID, PRODUCT_ID, UMBILICAL_ID


class TestParseExampleId:
    """ID 문법 테스트"""

    def test_valid(self):
        """계열과 매개변수 분리"""
        family, params = parse_example_id(PRODUCT_ID)
        assert family == "product"
        assert params == {"c": "1", "d1": "1", "rho": "1", "r": "0.6", "m": "1"}

    def test_unknown_family(self):
        """알 수 없는 계열"""
        with pytest.raises(UnknownExampleError):
            parse_example_id("torus:c=1")

    def test_bad_syntax(self):
        """콜론 누락"""
        with pytest.raises(UnknownExampleError):
            parse_example_id("bogus")

    def test_unknown_key(self):
        """허용되지 않은 키"""
        with pytest.raises(UnknownExampleError):
            parse_example_id("product:c=1,d1=1,rho=1,r=0.6,m=1,zz=2")

    def test_missing_key(self):
        """필수 키 누락"""
        with pytest.raises(UnknownExampleError) as exc:
            parse_example_id("umbilical:c=1,aa=1")
        assert "tau" in exc.value.message

    def test_non_numeric_value(self):
        """정수가 아닌 값"""
        with pytest.raises(UnknownExampleError):
            build_example("umbilical:c=one,aa=1,tau=0.5")


class TestUmbilical:
    """전곡 배꼽 예제 테스트"""

    def test_case_list(self):
        """부호 사례 목록 조회"""
        assert umbilical_case(1, 1, 0.5)[0] == 1
        assert umbilical_case(1, 1, 2.0)[0] == -1
        assert umbilical_case(-1, 0, 0.5)[0] == 1

    def test_default_axis(self):
        """<a,a> 값별 기본 축"""
        assert list(default_axis(1, 3)) == [0.0, 0.0, 0.0, 0.0, 1.0]
        assert list(default_axis(0, 3)) == [1.0, 0.0, 1.0, 0.0, 0.0]

    def test_closed_form(self, umbilical_example):
        """ε=1, H_1 = τ/√(1-τ²)"""
        w = np.sqrt(0.75)
        assert umbilical_example.eps == 1
        assert umbilical_example.closed_H[1] == pytest.approx(0.5 / w)
        assert umbilical_example.allowed_nullity == 1
        assert umbilical_example.expected_kind == CanonicalKind.I

    def test_predicted_rule(self, umbilical_example):
        """A 는 스칼라, b 는 a 에 평행"""
        A, b = umbilical_example.affine_rule(0)
        assert np.allclose(A, A[0, 0] * np.eye(5))
        assert np.allclose(b[:-1], 0.0)
        assert b[-1] != 0.0

    def test_totally_geodesic_b_zero(self):
        """τ=0 이면 b=0"""
        example = build_example("umbilical:c=1,aa=1,tau=0")
        assert np.allclose(example.predicted_b(0), 0.0)
        assert "totally geodesic" in example.metadata

    def test_degenerate(self):
        """<a,a> - cτ² = 0"""
        with pytest.raises(ExampleConstructionError):
            build_example("umbilical:c=1,aa=1,tau=1")

    def test_gauss_map_unit(self, umbilical_example):
        """샘플 점에서 <N,N> = ε, <N,x> = 0"""
        sig = umbilical_example.signature
        for x in umbilical_example.sample(20, 0):
            N = umbilical_example.gauss_map(x)
            assert inner(N, N, sig) == pytest.approx(1.0, abs=1e-9)
            assert inner(N, x, sig) == pytest.approx(0.0, abs=1e-9)


class TestProduct:
    """표준 곱 예제 테스트"""

    def test_principal_curvatures(self, product_example):
        """κ1 = -4/3, κ2 = 3/4"""
        assert product_example.details["kappa1"] == pytest.approx(-4.0 / 3.0)
        assert product_example.details["kappa2"] == pytest.approx(0.75)
        assert product_example.eps == 1

    def test_mean_curvatures(self, product_example):
        """H_1 = (κ1 + 2κ2)/3"""
        assert product_example.closed_H[1] == pytest.approx(1.0 / 18.0)

    def test_groups(self):
        """δ1=0 이면 x_2 는 두 번째 인자"""
        p = ProductParams(c=1, m=2, delta1=0, rho=1, r=2.0)
        first, second = product_groups(p, 3)
        assert first == [0, 2, 3]
        assert second == [1, 4]

    def test_excluded_tuple(self):
        """제외된 (δ1,δ2,ρ,c)"""
        with pytest.raises(ExampleConstructionError):
            build_example("product:c=1,d1=0,rho=-1,r=0.6,m=1")

    def test_m_out_of_range(self):
        """m = n 거부"""
        with pytest.raises(ExampleConstructionError):
            build_example("product:c=1,d1=1,rho=1,r=0.6,m=3")

    def test_samples_on_surface(self, product_example):
        """샘플은 두 인자 제약을 만족"""
        xs = product_example.sample(30, 1)
        for x in xs:
            assert np.max(np.abs(product_example.constraint(x))) < 1e-10

    def test_shape_diagonalizable(self, product_example):
        """형상 연산자 고윳값은 두 주곡률"""
        x = product_example.sample(1, 0)[0]
        eigenvalues = np.sort(np.linalg.eigvals(product_example.shape_at(x).S).real)
        assert np.allclose(eigenvalues, [-4.0 / 3.0, 0.75, 0.75], atol=1e-9)


class TestQuadric:
    """이차 초곡면 예제 테스트"""

    def test_complex_pair(self, j2_example):
        """J2: μ_S = t² + √2 t + 1, II형"""
        assert j2_example.expected_kind == CanonicalKind.II
        assert j2_example.predicted_min_poly == pytest.approx((1.0, np.sqrt(2.0), 1.0))
        assert j2_example.closed_H[1] == pytest.approx(-np.sqrt(2.0) / 2.0)
        assert j2_example.eps == 1

    def test_null_block(self, n2_example):
        """N2: III형, H_k = (-1)^k"""
        assert n2_example.expected_kind == CanonicalKind.III
        assert np.allclose(n2_example.closed_H, [1.0, -1.0, 1.0, -1.0])
        assert n2_example.predicted_min_poly == pytest.approx((1.0, 2.0, 1.0))

    def test_j2_rejected_for_de_sitter(self):
        """c=1 에서 J2 는 자기수반이 아님"""
        with pytest.raises(ExampleConstructionError):
            build_example("quadric:c=1,R=J2,d=1")

    def test_unknown_matrix_name(self):
        """알 수 없는 R"""
        with pytest.raises(ExampleConstructionError):
            build_example("quadric:c=-1,R=Q7,d=1")

    def test_gauss_map_unit(self, j2_example):
        """<N,N> = 1"""
        sig = j2_example.signature
        for x in j2_example.sample(10, 0):
            N = j2_example.gauss_map(x)
            assert inner(N, N, sig) == pytest.approx(1.0, abs=1e-9)


class TestKMaximal:
    """k-극대 예제 테스트"""

    def test_radius(self, kmaximal_example):
        """n=2, k=0 → r = 1/√2"""
        assert kmaximal_example.details["r"] == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-12)
        assert kmaximal_example.closed_H[1] == 0.0
        assert kmaximal_example.tuned_k == 0

    def test_scalar_rule(self, kmaximal_example):
        """A = -c c_0 H_0 I, b = 0"""
        A, b = kmaximal_example.affine_rule(0)
        assert np.allclose(A, -2.0 * np.eye(4))
        assert np.allclose(b, 0.0)

    def test_no_root(self):
        """H_n 은 (0,1) 에서 0 이 되지 않음"""
        with pytest.raises(ExampleConstructionError):
            build_example("kmaximal:c=1,n=2,k=1")


class TestCatalogListing:
    """카탈로그 목록 테스트"""

    def test_four_families(self):
        """네 계열"""
        assert [info.name for info in FAMILIES] == ["umbilical", "product", "quadric", "kmaximal"]

    def test_filter_by_c(self):
        """c=-1 필터"""
        for info in list_families(-1):
            assert all("c=-1" in instance for instance in info.instances)

    def test_every_shipped_instance_builds(self):
        """배포 인스턴스 모두 생성 가능"""
        ids = shipped_example_ids()
        assert len(ids) == 25
        for example_id in ids:
            example = build_example(example_id)
            assert example.id == example_id
            if "expected_eps" in example.details:
                assert example.eps == example.details["expected_eps"]

    @pytest.mark.parametrize("example_id", [PRODUCT_ID, UMBILICAL_ID, J2_ID, N2_ID, KMAXIMAL_ID])
    def test_sampling_deterministic(self, example_id):
        """같은 시드는 같은 샘플"""
        example = build_example(example_id)
        assert np.array_equal(example.sample(5, 11), example.sample(5, 11))
