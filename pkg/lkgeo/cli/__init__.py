"""
명령줄 인터페이스 패키지
"""
