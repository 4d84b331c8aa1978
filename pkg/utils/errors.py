"""예외 계층"""


class OCCError(Exception):
    """툴킷 공통 예외"""


class DataValidationError(OCCError, ValueError):
    """입력 데이터 / 차원 오류"""


class InfeasibleProblemError(OCCError, ValueError):
    """해가 존재하지 않는 문제 설정 (C < 1/N 등)"""


class ConfigError(OCCError, ValueError):
    """설정 값 오류 - 메시지에 키 이름 포함"""


class ModelFormatError(OCCError):
    """모델 파일을 읽을 수 없음"""
