"""
데이터셋 CSV 입출력

형식: 헤더 `x_1,...,x_N,y`, 이후 한 줄에 샘플 하나.
오류의 row 는 파일의 줄 번호(헤더 = 1), column 은 열 이름이다.
"""

import os
import re
from typing import List

import numpy as np
import pandas as pd

from errors import DatasetError, MalformedInputError
from feature_maps import DataPoint
from training import Dataset
from utils import logger, write_csv

_PARSER_LINE = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")


def _parse_cell(cell: object, row: int, column: str) -> complex:
    if not isinstance(cell, str):
        raise DatasetError(f"{row}번째 줄의 열 개수가 부족합니다 ('{column}' 값 없음)", row=row, column=column)
    text = cell.strip()
    try:
        return float(text)
    except ValueError:
        pass
    if 'j' in text:
        try:
            return complex(text.replace(' ', ''))
        except ValueError:
            pass
    raise DatasetError(f"{row}번째 줄 '{column}' 열이 숫자가 아닙니다: {cell!r}", row=row, column=column)


def _feature_columns(columns: List[str]) -> List[str]:
    if 'y' not in columns:
        raise DatasetError("'y' 열이 없습니다.", row=1, column='y')
    features = [c for c in columns if c != 'y']
    expected = [f"x_{k}" for k in range(1, len(features) + 1)]
    if not features:
        raise DatasetError("입력 열(x_1, ...)이 없습니다.", row=1, column='x_1')
    for actual, wanted in zip(features, expected):
        if actual != wanted:
            raise DatasetError(f"헤더 열 이름이 올바르지 않습니다: {actual!r} (기대값 {wanted!r})", row=1, column=actual)
    return features


def load_dataset(path: str) -> Dataset:
    """CSV → Dataset"""
    if not os.path.isfile(path):
        raise DatasetError(f"데이터셋 파일이 없습니다: {path}")

    try:
        df = pd.read_csv(path, dtype=str, na_filter=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DatasetError(f"데이터셋 파일이 비어 있습니다: {path}") from None
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        if match:
            expected, line, seen = (int(v) for v in match.groups())
            raise DatasetError(
                f"{line}번째 줄의 열 개수가 {seen}개입니다 (기대값 {expected}개)", row=line
            ) from None
        raise DatasetError(f"CSV 파싱 실패: {e}") from None

    columns = [str(c).strip() for c in df.columns]
    df.columns = columns
    features = _feature_columns(columns)
    if df.empty:
        raise DatasetError(f"데이터 행이 없습니다 (no rows): {path}", row=2)

    inputs: List[DataPoint] = []
    labels: List[float] = []
    for index, record in enumerate(df.itertuples(index=False, name=None)):
        row = index + 2
        cells = dict(zip(columns, record))
        values = np.array([_parse_cell(cells[c], row, c) for c in features])
        label = _parse_cell(cells['y'], row, 'y')
        if isinstance(label, complex):
            raise DatasetError(f"{row}번째 줄의 레이블이 실수가 아닙니다: {cells['y']!r}", row=row, column='y')
        try:
            inputs.append(DataPoint(values))
        except MalformedInputError as e:
            raise DatasetError(f"{row}번째 줄 입력이 올바르지 않습니다: {e.message}", row=row) from None
        labels.append(label)

    dataset = Dataset(tuple(inputs), np.asarray(labels))
    logger.info(f"데이터셋 로드: {path} (M={dataset.size}, N={dataset.input_dim})")
    return dataset


def save_dataset(path: str, data: Dataset) -> str:
    """Dataset → CSV (복소 입력은 Python complex 표기)"""
    matrix = np.array([x.values for x in data.inputs])
    columns = {}
    for k in range(data.input_dim):
        column = matrix[:, k]
        columns[f"x_{k + 1}"] = [str(v) for v in column] if np.iscomplexobj(column) else column.real
    columns['y'] = data.labels
    return write_csv(path, pd.DataFrame(columns))
