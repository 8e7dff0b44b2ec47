"""
양자 커널 계산 모듈

κ(x, x′) = |⟨φ(x′)|φ(x)⟩|² 의 정확한 계산, 닫힌 형태 공식, 샷 샘플링 추정,
Gram 행렬 구성과 양의 준정부호(PSD) 검증을 담당한다.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import Config
from feature_maps import DataPoint, EncodingSpec, PointLike, Strategy, as_point, encode, validate_input
from errors import InvariantViolationError, MalformedInputError, UnsupportedStrategyError
from linalg_core import StateVector, hermitian_eigendecomposition
from utils import logger, write_csv

GRAM_SYMMETRY_TOL = 1e-12
GRAM_DIAGONAL_TOL = 1e-10
GRAM_PSD_TOL = 1e-9


@dataclass(frozen=True)
class GramMatrix:
    """K[m][m′] = κ(x^m, x^{m′})"""

    values: np.ndarray
    inputs: Tuple[DataPoint, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] < 1:
            raise InvariantViolationError(f"Gram 행렬은 비어 있지 않은 정방 행렬이어야 합니다 (shape={values.shape})")
        asymmetry = float(np.max(np.abs(values - values.T)))
        if asymmetry > GRAM_SYMMETRY_TOL:
            raise InvariantViolationError(f"Gram 행렬이 대칭이 아닙니다: {asymmetry:.3e}")
        diagonal_error = float(np.max(np.abs(np.diag(values) - 1.0)))
        if diagonal_error > GRAM_DIAGONAL_TOL:
            raise InvariantViolationError(f"Gram 행렬 대각 원소가 1이 아닙니다: {diagonal_error:.3e}")
        inputs = tuple(self.inputs)
        if inputs and len(inputs) != values.shape[0]:
            raise InvariantViolationError(f"입력 개수 {len(inputs)} ≠ Gram 크기 {values.shape[0]}")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'inputs', inputs)

        smallest = min_eigenvalue(self)
        if smallest < -GRAM_PSD_TOL:
            raise InvariantViolationError(
                f"Gram 행렬이 양의 준정부호가 아닙니다: λ_min={smallest:.3e}", {'min_eigenvalue': smallest}
            )

    @property
    def size(self) -> int:
        return int(self.values.shape[0])

    def labels(self) -> List[str]:
        return [f"x{m}" for m in range(self.size)]

    def to_dataframe(self) -> pd.DataFrame:
        labels = self.labels()
        df = pd.DataFrame(self.values, columns=labels)
        df.insert(0, 'id', labels)
        return df

    def to_csv(self, path: str) -> str:
        return write_csv(path, self.to_dataframe())

    def to_json(self) -> Dict[str, Any]:
        return {
            'ids': self.labels(),
            'inputs': [x.to_json() for x in self.inputs],
            'values': self.values.tolist(),
            'min_eigenvalue': min_eigenvalue(self),
        }


@dataclass(frozen=True)
class ShotEstimate:
    """샷 기반 커널 추정치 (성공 횟수 / shots)"""

    estimate: float
    shots: int
    seed: int

    @property
    def successes(self) -> int:
        return int(round(self.estimate * self.shots))

    @property
    def standard_error(self) -> float:
        return float(np.sqrt(self.estimate * (1.0 - self.estimate) / self.shots))

    def to_json(self) -> Dict[str, Any]:
        return {'estimate': self.estimate, 'shots': self.shots, 'seed': self.seed}


def _overlap_probability(a: StateVector, b: StateVector) -> float:
    # 반올림으로 [0,1] 을 벗어나는 값 제거
    return float(min(1.0, max(0.0, abs(np.vdot(b.amplitudes, a.amplitudes)) ** 2)))


def kernel(spec: EncodingSpec, x: PointLike, x2: PointLike) -> float:
    """κ(x, x′) = |⟨φ(x′)|φ(x)⟩|²"""
    psi = encode(spec, x)
    phi = encode(spec, x2)
    if psi.dimension != phi.dimension:
        raise MalformedInputError(f"두 입력의 상태 차원이 다릅니다: {psi.dimension} vs {phi.dimension}")
    return _overlap_probability(psi, phi)


def closed_form_kernel(spec: EncodingSpec, x: PointLike, x2: PointLike) -> float:
    """인코딩 전략별 해석적 커널 공식"""
    if spec.strategy is Strategy.GENERAL_EVOLUTION:
        raise UnsupportedStrategyError("GeneralEvolution 인코딩에는 닫힌 형태 커널이 없습니다.")
    x = validate_input(spec, x)
    x2 = validate_input(spec, x2)
    if x.dimension != x2.dimension:
        raise MalformedInputError(f"입력 길이가 다릅니다: {x.dimension} vs {x2.dimension}")
    a, b = x.values, x2.values

    if spec.strategy is Strategy.BASIS:
        return 1.0 if np.array_equal(a, b) else 0.0

    if spec.strategy in (Strategy.AMPLITUDE, Strategy.REPEATED_AMPLITUDE):
        overlap = float(abs(np.vdot(b, a)) ** 2)
        return overlap ** spec.repetitions if spec.strategy is Strategy.REPEATED_AMPLITUDE else overlap

    if spec.strategy is Strategy.ROTATION:
        if spec.axis == "Z":
            # RZ|0⟩ 는 전역 위상만 바꾼다
            return 1.0
        scale = 0.5 if spec.convention == "gate" else 1.0
        return float(np.prod(np.cos(scale * (a - b)) ** 2))

    return float(np.exp(-np.sum((a - b) ** 2)))


def _encode_all(spec: EncodingSpec, data: Sequence[PointLike]) -> Tuple[List[DataPoint], List[StateVector]]:
    points = [as_point(x) for x in data]
    states = [encode(spec, x) for x in points]
    dimensions = {s.dimension for s in states}
    if len(dimensions) > 1:
        raise MalformedInputError(f"데이터셋 안에 서로 다른 상태 차원이 섞여 있습니다: {sorted(dimensions)}")
    return points, states


def gram(spec: EncodingSpec, data: Sequence[PointLike], workers: Optional[int] = None) -> GramMatrix:
    """Gram 행렬 (상삼각만 계산 후 대칭 복사)"""
    if len(data) == 0:
        raise MalformedInputError("빈 데이터셋으로는 Gram 행렬을 만들 수 없습니다.")
    workers = Config.GRAM_WORKERS if workers is None else workers
    points, states = _encode_all(spec, data)
    size = len(states)

    pairs = [(i, j) for i in range(size) for j in range(i, size)]

    def entry(pair: Tuple[int, int]) -> float:
        i, j = pair
        return _overlap_probability(states[i], states[j])

    # 각 원소는 독립적으로 계산되므로 병렬 여부와 무관하게 결과가 같다
    if workers > 1 and size > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            entries = list(executor.map(entry, pairs))
    else:
        entries = [entry(pair) for pair in pairs]

    values = np.zeros((size, size), dtype=float)
    for (i, j), value in zip(pairs, entries):
        values[i, j] = value
        values[j, i] = value

    logger.debug(f"Gram 행렬 계산 완료: {size}x{size} ({len(pairs)}개 원소)")
    return GramMatrix(values, tuple(points))


def cross_gram(spec: EncodingSpec, rows: Sequence[PointLike], columns: Sequence[PointLike]) -> np.ndarray:
    """K[a][b] = κ(rows[a], columns[b]) (예측용 직사각 행렬)"""
    _, row_states = _encode_all(spec, rows)
    _, column_states = _encode_all(spec, columns)
    a = np.array([s.amplitudes for s in row_states])
    b = np.array([s.amplitudes for s in column_states])
    return np.clip(np.abs(a.conj() @ b.T) ** 2, 0.0, 1.0)


def min_eigenvalue(k: Any) -> float:
    """Gram 행렬의 최소 고유값"""
    values = k.values if isinstance(k, GramMatrix) else np.asarray(k, dtype=float)
    eigenvalues, _ = hermitian_eigendecomposition(0.5 * (values + values.T))
    return float(eigenvalues[0])


def sample_kernel(spec: EncodingSpec, x: PointLike, x2: PointLike, shots: int, seed: int) -> ShotEstimate:
    """겹침(overlap) 테스트의 성공 확률 κ(x, x′) 를 shots 번의 베르누이 시행으로 추정"""
    if int(shots) < 1:
        raise MalformedInputError(f"shots 는 1 이상이어야 합니다: {shots}")
    probability = kernel(spec, x, x2)
    rng = np.random.default_rng(seed)
    successes = int(rng.binomial(int(shots), probability))
    return ShotEstimate(estimate=successes / int(shots), shots=int(shots), seed=int(seed))


def sample_gram(spec: EncodingSpec, data: Sequence[PointLike], shots: int, seed: int) -> np.ndarray:
    """샷 추정 Gram 행렬

    상삼각(대각 포함) 원소마다 sample_kernel 을 시드 seed + 원소 순번으로 호출한다.
    노이즈가 섞인 추정치라 PSD 가 보장되지 않으므로 GramMatrix 가 아닌 ndarray 를 반환한다.
    """
    points = [as_point(x) for x in data]
    if not points:
        raise MalformedInputError("빈 데이터셋으로는 Gram 행렬을 만들 수 없습니다.")
    size = len(points)
    estimates = np.zeros((size, size), dtype=float)
    index = 0
    for i in range(size):
        for j in range(i, size):
            value = sample_kernel(spec, points[i], points[j], shots, seed + index).estimate
            estimates[i, j] = value
            estimates[j, i] = value
            index += 1
    return estimates
