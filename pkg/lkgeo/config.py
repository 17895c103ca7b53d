"""
설정 관리 모듈
"""
import logging
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """수치 계산 및 CLI 설정 (환경 변수 접두사: LKGEO_)"""

    # 수치 허용 오차
    TOL: float = 1e-8
    KRYLOV_GAP: float = 1e6  # 최소다항식 판정용 특이값 간격 비율

    # 샘플링 설정
    DEFAULT_SAMPLES: int = 500
    DEFAULT_SEED: int = 42
    DEFAULT_N: int = 3
    NEWTON_MAX_ITERS: int = 50
    NEWTON_DAMPING: float = 0.5
    MAX_RESEEDS: int = 20
    RAPIDITY_BOUND: float = 2.0
    ANGLE_SCALE: float = 1.0

    # 로깅 설정
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None  # None이면 파일 로깅 비활성화

    class Config:
        env_prefix = "LKGEO_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True
        extra = "ignore"


# 전역 설정 인스턴스
settings = Settings()

config_logger = logging.getLogger(__name__)
config_logger.debug(f"설정 로딩 완료: TOL={settings.TOL}, SEED={settings.DEFAULT_SEED}")
