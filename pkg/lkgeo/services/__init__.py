"""
기하 계산 서비스 패키지
"""
