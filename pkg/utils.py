import os
import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import Config


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """로깅 설정"""
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, log_level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )
    return logging.getLogger('qkern')


def set_log_level(log_level: str) -> None:
    """실행 중 로그 레벨 변경 (--verbose 용)"""
    level = getattr(logging, log_level.upper(), logging.INFO)
    logging.getLogger().setLevel(level)
    logger.setLevel(level)


def ensure_directory_exists(directory: str) -> None:
    """디렉토리가 존재하지 않으면 생성"""
    if directory and not os.path.exists(directory):
        os.makedirs(directory)


# ---------------------------------------------------------------------------
# 복소수 <-> JSON 변환 ([re, im] 쌍)
# ---------------------------------------------------------------------------

def complex_to_pair(value: complex) -> List[float]:
    """복소수를 [re, im] 쌍으로 변환"""
    value = complex(value)
    return [float(value.real), float(value.imag)]


def pair_to_complex(pair: Any) -> complex:
    """[re, im] 쌍(또는 실수)을 복소수로 변환"""
    if isinstance(pair, (list, tuple)):
        if len(pair) != 2:
            raise ValueError(f"복소수는 [re, im] 형식이어야 합니다: {pair!r}")
        return complex(float(pair[0]), float(pair[1]))
    return complex(float(pair))


def matrix_to_pairs(matrix: np.ndarray) -> List[List[List[float]]]:
    """복소 행렬을 [re, im] 쌍의 중첩 리스트로 변환"""
    matrix = np.asarray(matrix, dtype=complex)
    return [[complex_to_pair(entry) for entry in row] for row in matrix]


def pairs_to_matrix(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    """[re, im] 쌍의 중첩 리스트를 복소 행렬로 변환"""
    matrix = np.array([[pair_to_complex(entry) for entry in row] for row in rows], dtype=complex)
    if matrix.ndim != 2:
        raise ValueError("행렬은 2차원 리스트여야 합니다.")
    return matrix


def vector_to_json(values: np.ndarray) -> List[Any]:
    """실수 벡터는 실수 리스트로, 복소 벡터는 [re, im] 쌍 리스트로 변환"""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return [complex_to_pair(v) for v in values]
    return [float(v) for v in values]


def vector_from_json(values: Sequence[Any]) -> np.ndarray:
    """vector_to_json 의 역변환"""
    if any(isinstance(v, (list, tuple)) for v in values):
        return np.array([pair_to_complex(v) for v in values], dtype=complex)
    return np.array([float(v) for v in values], dtype=float)


# ---------------------------------------------------------------------------
# 결정적(deterministic) 산출물 기록
# ---------------------------------------------------------------------------

def to_jsonable(obj: Any) -> Any:
    """numpy 타입을 포함한 객체를 JSON 직렬화 가능한 형태로 변환"""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_pair(obj)
    return obj


def format_float(value: float) -> str:
    """실수를 유효숫자 17자리 고정 표기로 변환 (IEEE double 정확 복원)"""
    if not np.isfinite(value):
        raise ValueError(f"JSON 에 유한하지 않은 실수를 기록할 수 없습니다: {value!r}")
    # '#' 는 뒤쪽 0 을 유지한다. 정수부만 17자리면 남는 소수점은 JSON 에 맞게 뗀다
    return format(float(value), '#.17g').rstrip('.')


class FixedPrecisionEncoder(json.JSONEncoder):
    """실수를 format_float 로 기록하는 JSON 인코더"""

    def iterencode(self, o: Any, _one_shot: bool = False):
        markers: Optional[Dict[int, Any]] = {} if self.check_circular else None
        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        return json.encoder._make_iterencode(
            markers, self.default, encoder, self.indent, format_float,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def dumps_json(payload: Any) -> str:
    """정렬된 키, 고정 들여쓰기로 JSON 문자열 생성 (실수는 유효숫자 17자리)"""
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True, cls=FixedPrecisionEncoder) + "\n"


def write_json(path: str, payload: Any) -> str:
    """JSON 파일 저장"""
    ensure_directory_exists(os.path.dirname(path))
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps_json(payload))
    logger.debug(f"JSON 저장: {path}")
    return path


def write_csv(path: str, df: pd.DataFrame) -> str:
    """CSV 파일 저장 (실수는 최단 왕복 표현)"""
    ensure_directory_exists(os.path.dirname(path))
    df.to_csv(path, index=False, lineterminator='\n')
    logger.debug(f"CSV 저장: {path}")
    return path


logger = setup_logging(Config.LOG_LEVEL, Config.LOG_FILE)
