import os
from dotenv import load_dotenv
from typing import Dict, Any

# .env 파일에서 환경변수 로드
load_dotenv()


def _env_int(key: str, default: int) -> int:
    value = os.getenv(key)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except ValueError:
        return default


def _env_float(key: str, default: float) -> float:
    value = os.getenv(key)
    if value is None or value == '':
        return default
    try:
        return float(value)
    except ValueError:
        return default


class Config:
    """프로젝트 설정 관리 클래스

    실험 자체(태스크, 인코딩, 데이터셋)는 JSON 실험 설정 파일로 관리하고,
    여기에는 실행 환경에 따라 바뀌는 수치 한계값과 로깅 설정만 둔다.
    """

    # 로깅 설정
    LOG_LEVEL = os.getenv('QKERN_LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('QKERN_LOG_FILE') or None

    # 산출물 기본 디렉토리
    OUTPUT_DIR = os.getenv('QKERN_OUTPUT_DIR', 'results')

    # Fourier 분석 설정
    FOURIER_ENUMERATION_CAP = _env_int('QKERN_FOURIER_ENUMERATION_CAP', 1_000_000)
    FOURIER_WORKERS = _env_int('QKERN_FOURIER_WORKERS', 1)

    # SVM 쌍대 문제 설정
    SVM_MAX_PASSES = _env_int('QKERN_SVM_MAX_PASSES', 100_000)
    SVM_GAP_TOL = _env_float('QKERN_SVM_GAP_TOL', 1e-8)
    SVM_STEP_TOL = _env_float('QKERN_SVM_STEP_TOL', 1e-10)

    # KRR 유사역행렬 컷오프 (최대 고유값 대비 비율)
    PINV_CUTOFF = _env_float('QKERN_PINV_CUTOFF', 1e-10)

    # Gram 행렬 병렬 계산
    GRAM_WORKERS = _env_int('QKERN_GRAM_WORKERS', 1)

    # 변분 학습 설정
    VARIATIONAL_RESTARTS = _env_int('QKERN_VARIATIONAL_RESTARTS', 10)
    VARIATIONAL_WORKERS = _env_int('QKERN_VARIATIONAL_WORKERS', 1)

    # 코히어런트 상태 절단 허용 오차
    COHERENT_DEFICIT_TOL = _env_float('QKERN_COHERENT_DEFICIT_TOL', 1e-12)

    @classmethod
    def validate_config(cls) -> Dict[str, Any]:
        """설정 유효성 검사"""
        positive_int_keys = [
            'FOURIER_ENUMERATION_CAP', 'FOURIER_WORKERS', 'SVM_MAX_PASSES',
            'GRAM_WORKERS', 'VARIATIONAL_RESTARTS', 'VARIATIONAL_WORKERS',
        ]
        positive_float_keys = [
            'SVM_GAP_TOL', 'SVM_STEP_TOL', 'PINV_CUTOFF', 'COHERENT_DEFICIT_TOL',
        ]

        invalid_keys = []
        for key in positive_int_keys:
            value = getattr(cls, key)
            if not isinstance(value, int) or value < 1:
                invalid_keys.append(key)
        for key in positive_float_keys:
            if not getattr(cls, key) > 0:
                invalid_keys.append(key)
        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            invalid_keys.append('LOG_LEVEL')

        return {
            'is_valid': len(invalid_keys) == 0,
            'invalid_keys': invalid_keys,
            'errors': [f"QKERN_{key} 값이 올바르지 않습니다: {getattr(cls, key)!r}" for key in invalid_keys]
        }

    @classmethod
    def get_solver_config(cls) -> Dict[str, Any]:
        """SVM/KRR 솔버 설정 반환"""
        return {
            'max_passes': cls.SVM_MAX_PASSES,
            'gap_tol': cls.SVM_GAP_TOL,
            'step_tol': cls.SVM_STEP_TOL,
            'pinv_cutoff': cls.PINV_CUTOFF,
        }

