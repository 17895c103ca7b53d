"""
pytest 설정 및 공통 픽스처
"""
import os

import numpy as np
import pytest

# 테스트 환경 변수 설정
os.environ.setdefault("LKGEO_LOG_LEVEL", "WARNING")
os.environ.setdefault("LKGEO_DEFAULT_SEED", "42")

from lkgeo.services.catalog import build_example  # noqa: E402
from lkgeo.services.indefinite_linalg import AmbientSpaceForm, Signature  # noqa: E402
from lkgeo.utils.monitoring import reset_timings  # noqa: E402
from lkgeo.utils.sampling import make_rng  # noqa: E402

PRODUCT_ID = "product:c=1,d1=1,rho=1,r=0.6,m=1"
UMBILICAL_ID = "umbilical:c=1,aa=1,tau=0.5"
GEODESIC_ID = "umbilical:c=1,aa=1,tau=0"
J2_ID = "quadric:c=-1,R=J2,d=1"
N2_ID = "quadric:c=-1,R=N2,d=1,n=3"
KMAXIMAL_ID = "kmaximal:c=1,n=2,k=0,m=1"


@pytest.fixture
def rng() -> np.random.Generator:
    """시드 0 Philox 생성기"""
    return make_rng(0)


@pytest.fixture
def lorentz_sig() -> Signature:
    """R^4_1 계량"""
    return Signature(dim=4, index=1)


@pytest.fixture
def de_sitter_space() -> AmbientSpaceForm:
    """c=1, n=2 공간형식 (R^4_1)"""
    return AmbientSpaceForm.of(1, 2)


@pytest.fixture(scope="session")
def product_example():
    return build_example(PRODUCT_ID)


@pytest.fixture(scope="session")
def umbilical_example():
    return build_example(UMBILICAL_ID)


@pytest.fixture(scope="session")
def j2_example():
    return build_example(J2_ID)


@pytest.fixture(scope="session")
def n2_example():
    return build_example(N2_ID)


@pytest.fixture(scope="session")
def kmaximal_example():
    return build_example(KMAXIMAL_ID)


@pytest.fixture(autouse=True)
def clean_timings():
    """테스트마다 타이밍 저장소 초기화"""
    reset_timings()
    yield
    reset_timings()
