# errors.py - uavsec 예외 계층


class UavsecError(Exception):
    """uavsec 예외의 기반 클래스"""


class ScenarioError(UavsecError, ValueError):
    """잘못되었거나 실현 불가능한 시나리오, 길이 불일치, 범위 밖 입력"""


class ConfigError(UavsecError):
    """설정 문서를 해석하거나 검증할 수 없음"""


class SolverError(UavsecError):
    """수치 해법 실패"""


class ClosedFormUnavailable(SolverError):
    """α 닫힌 형태 해의 전제가 성립하지 않음 (대체 탐색 필요)"""


class DomainGuardTriggered(SolverError):
    """선형화된 Eve 거리가 도메인 가드 아래로 내려감 (스텝 거부 신호)"""
