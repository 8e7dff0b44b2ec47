"""
qkern 예외 정의

핵심 모듈은 예외를 던지고, main.py 가 이를 잡아서
error.json 과 종료 코드로 변환한다.
"""

from typing import Any, Dict, Optional


class QuantumKernelError(Exception):
    """qkern 기본 예외"""

    code = "qkern_error"
    # 1: 사용법 오류, 2: 계산 오류
    exit_status = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': self.code,
            'message': self.message,
            'details': self.details,
        }


class DimensionMismatchError(QuantumKernelError):
    code = "dimension_mismatch"


class NotHermitianError(QuantumKernelError):
    code = "not_hermitian"


class InvariantViolationError(QuantumKernelError):
    """타입 불변식(정규화, 대각합, 유니터리성 등) 위반"""
    code = "invariant_violation"


class MalformedInputError(QuantumKernelError):
    code = "malformed_input"


class TruncationError(QuantumKernelError):
    """코히어런트 상태 절단 오차가 허용치를 넘음"""
    code = "truncation_error"


class UnsupportedStrategyError(QuantumKernelError):
    code = "unsupported_strategy"


class EnumerationLimitError(QuantumKernelError):
    code = "enumeration_limit"


class NumericalResidueError(QuantumKernelError):
    """실수여야 하는 값의 허수부 잔차가 허용치를 넘음"""
    code = "numerical_residue"


class ConvergenceError(QuantumKernelError):
    code = "convergence_error"

    def __init__(self, message: str, gap: float, passes: int):
        super().__init__(message, {'gap': gap, 'passes': passes})
        self.gap = gap
        self.passes = passes


class DivergenceError(QuantumKernelError):
    code = "divergence_error"

    def __init__(self, message: str, epoch: int):
        super().__init__(message, {'epoch': epoch})
        self.epoch = epoch


class UnsupportedGateError(QuantumKernelError):
    code = "unsupported_gate"


class DatasetError(QuantumKernelError):
    code = "dataset_error"
    exit_status = 1

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        details: Dict[str, Any] = {}
        if row is not None:
            details['row'] = row
        if column is not None:
            details['column'] = column
        super().__init__(message, details)
        self.row = row
        self.column = column


class ConfigError(QuantumKernelError):
    code = "config_error"
    exit_status = 1
