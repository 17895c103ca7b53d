"""
로렌츠 공간형식 초곡면의 L_k 연산자 검증 도구
"""
__version__ = "1.0.0"
