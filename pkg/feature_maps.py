"""
데이터 인코딩(feature map) 모듈

입력 x 를 양자 상태 |φ(x)⟩ / ρ(x) 로 보내는 인코딩 전략들:
Basis, Amplitude, RepeatedAmplitude(r), Rotation(axis), Coherent(cutoff),
그리고 시간 진화 인코딩 GeneralEvolution (W^(N+1) e^{-i x_N G_N} ... W^(2) e^{-i x_1 G_1} W^(1)).
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammainc, gammaln

from config import Config
from errors import (
    DimensionMismatchError, InvariantViolationError, MalformedInputError,
    TruncationError, UnsupportedStrategyError,
)
from linalg_core import (
    DensityMatrix, HermitianOperator, StateVector, Unitary,
    apply_unitary, hermitian_eigendecomposition, pauli_rotation, tensor_power, tensor_product,
)
from utils import matrix_to_pairs, pairs_to_matrix, vector_from_json, vector_to_json

AMPLITUDE_NORM_TOL = 1e-10


class Strategy(str, Enum):
    BASIS = "Basis"
    AMPLITUDE = "Amplitude"
    REPEATED_AMPLITUDE = "RepeatedAmplitude"
    ROTATION = "Rotation"
    COHERENT = "Coherent"
    GENERAL_EVOLUTION = "GeneralEvolution"


ROTATION_CONVENTIONS = ("gate", "table")


@dataclass(frozen=True)
class DataPoint:
    """입력 x (Basis: 비트, Amplitude: 단위 노름 복소 벡터, 그 외: 실수 벡터)"""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values).reshape(-1)
        if values.size < 1:
            raise MalformedInputError("입력 벡터가 비어 있습니다.")
        if np.iscomplexobj(values):
            values = values.astype(complex)
        else:
            values = values.astype(float)
        if not np.all(np.isfinite(values)):
            raise MalformedInputError("입력에 유한하지 않은 값이 있습니다.")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def of(cls, *values: Any) -> "DataPoint":
        """DataPoint.of(0.1, 0.2) 또는 DataPoint.of([0.1, 0.2])"""
        if len(values) == 1 and np.ndim(values[0]) > 0:
            return cls(np.asarray(values[0]))
        return cls(np.asarray(values))

    @property
    def dimension(self) -> int:
        return int(self.values.size)

    def to_json(self) -> List[Any]:
        return vector_to_json(self.values)

    @classmethod
    def from_json(cls, values: Sequence[Any]) -> "DataPoint":
        return cls(vector_from_json(values))


PointLike = Union[DataPoint, Sequence[float], np.ndarray, float]


def as_point(x: PointLike) -> DataPoint:
    if isinstance(x, DataPoint):
        return x
    return DataPoint(np.atleast_1d(np.asarray(x)))


@dataclass(frozen=True)
class EncodingSpec:
    """인코딩 회로의 선언적 기술 (feature map φ)"""

    strategy: Strategy
    repetitions: int = 1
    axis: str = "X"
    convention: str = "gate"
    cutoff: int = 0
    n_qubits: int = 0
    input_dim: int = 0
    generators: Tuple[HermitianOperator, ...] = ()
    interleavers: Tuple[Unitary, ...] = ()
    _eigensystems: Tuple[Tuple[np.ndarray, Unitary], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        strategy = Strategy(self.strategy)
        object.__setattr__(self, 'strategy', strategy)

        if strategy is Strategy.REPEATED_AMPLITUDE and self.repetitions < 1:
            raise InvariantViolationError(f"RepeatedAmplitude 의 r 은 1 이상이어야 합니다: {self.repetitions}")
        if strategy is Strategy.COHERENT and self.cutoff < 2:
            raise InvariantViolationError(f"Coherent 의 cutoff 는 2 이상이어야 합니다: {self.cutoff}")
        if strategy is Strategy.ROTATION:
            axis = str(self.axis).upper()
            if axis not in ("X", "Y", "Z"):
                raise InvariantViolationError(f"Rotation 축은 X/Y/Z 중 하나여야 합니다: {self.axis!r}")
            if self.convention not in ROTATION_CONVENTIONS:
                raise InvariantViolationError(f"Rotation 규약은 {ROTATION_CONVENTIONS} 중 하나여야 합니다: {self.convention!r}")
            object.__setattr__(self, 'axis', axis)
        if strategy is Strategy.GENERAL_EVOLUTION:
            self._validate_general_evolution()

    def _validate_general_evolution(self) -> None:
        if self.n_qubits < 1 or self.input_dim < 1:
            raise InvariantViolationError(
                f"GeneralEvolution 은 n_qubits ≥ 1, input_dim ≥ 1 이 필요합니다 ({self.n_qubits}, {self.input_dim})"
            )
        dimension = 2 ** self.n_qubits
        generators = tuple(self.generators)
        if len(generators) == 1 and self.input_dim > 1:
            generators = generators * self.input_dim
        if len(generators) != self.input_dim:
            raise InvariantViolationError(
                f"생성자는 1개 또는 N={self.input_dim}개여야 합니다 (받은 개수 {len(self.generators)})"
            )
        interleavers = tuple(self.interleavers) or tuple(Unitary.identity(dimension) for _ in range(self.input_dim + 1))
        if len(interleavers) != self.input_dim + 1:
            raise InvariantViolationError(
                f"인터리버는 정확히 N+1={self.input_dim + 1}개여야 합니다 (받은 개수 {len(interleavers)})"
            )
        for g in generators:
            if g.dimension != dimension:
                raise DimensionMismatchError(f"생성자 차원 {g.dimension} ≠ D={dimension}")
        for w in interleavers:
            if w.dimension != dimension:
                raise DimensionMismatchError(f"인터리버 차원 {w.dimension} ≠ D={dimension}")

        object.__setattr__(self, 'generators', generators)
        object.__setattr__(self, 'interleavers', interleavers)
        object.__setattr__(self, '_eigensystems', tuple(hermitian_eigendecomposition(g) for g in generators))

    # ------------------------------------------------------------------
    # 생성자 헬퍼
    # ------------------------------------------------------------------

    @classmethod
    def basis(cls) -> "EncodingSpec":
        return cls(Strategy.BASIS)

    @classmethod
    def amplitude(cls) -> "EncodingSpec":
        return cls(Strategy.AMPLITUDE)

    @classmethod
    def repeated_amplitude(cls, r: int) -> "EncodingSpec":
        return cls(Strategy.REPEATED_AMPLITUDE, repetitions=int(r))

    @classmethod
    def rotation(cls, axis: str = "X", convention: str = "gate") -> "EncodingSpec":
        return cls(Strategy.ROTATION, axis=axis, convention=convention)

    @classmethod
    def coherent(cls, cutoff: int) -> "EncodingSpec":
        return cls(Strategy.COHERENT, cutoff=int(cutoff))

    @classmethod
    def general_evolution(
        cls,
        n_qubits: int,
        input_dim: int,
        generators: Union[HermitianOperator, Sequence[HermitianOperator]],
        interleavers: Optional[Sequence[Unitary]] = None,
    ) -> "EncodingSpec":
        if isinstance(generators, HermitianOperator):
            generators = (generators,)
        return cls(
            Strategy.GENERAL_EVOLUTION,
            n_qubits=int(n_qubits),
            input_dim=int(input_dim),
            generators=tuple(generators),
            interleavers=tuple(interleavers or ()),
        )

    # ------------------------------------------------------------------

    @property
    def eigensystems(self) -> Tuple[Tuple[np.ndarray, Unitary], ...]:
        """GeneralEvolution 생성자별 (고유값, 고유벡터)"""
        return self._eigensystems

    @property
    def is_qubit_encoding(self) -> bool:
        return self.strategy is not Strategy.COHERENT

    def state_dimension(self, input_dim: int) -> int:
        """입력 차원 N 에 대한 상태 공간 차원 D"""
        if self.strategy is Strategy.BASIS:
            return 2 ** input_dim
        if self.strategy is Strategy.AMPLITUDE:
            return input_dim
        if self.strategy is Strategy.REPEATED_AMPLITUDE:
            return input_dim ** self.repetitions
        if self.strategy is Strategy.ROTATION:
            return 2 ** input_dim
        if self.strategy is Strategy.COHERENT:
            return self.cutoff ** input_dim
        return 2 ** self.n_qubits

    def to_json(self) -> Dict[str, Any]:
        """{"strategy": ..., "params": {...}, "generator(s)": ..., "interleavers": ...}"""
        payload: Dict[str, Any] = {'strategy': self.strategy.value, 'params': {}}
        if self.strategy is Strategy.REPEATED_AMPLITUDE:
            payload['params'] = {'r': self.repetitions}
        elif self.strategy is Strategy.ROTATION:
            payload['params'] = {'axis': self.axis, 'convention': self.convention}
        elif self.strategy is Strategy.COHERENT:
            payload['params'] = {'cutoff': self.cutoff}
        elif self.strategy is Strategy.GENERAL_EVOLUTION:
            payload['params'] = {'n_qubits': self.n_qubits, 'input_dim': self.input_dim}
            first = self.generators[0].entries
            if all(np.array_equal(g.entries, first) for g in self.generators):
                payload['generator'] = matrix_to_pairs(first)
            else:
                payload['generators'] = [matrix_to_pairs(g.entries) for g in self.generators]
            payload['interleavers'] = [matrix_to_pairs(w.entries) for w in self.interleavers]
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "EncodingSpec":
        if not isinstance(payload, dict) or 'strategy' not in payload:
            raise MalformedInputError("인코딩 JSON 에 'strategy' 키가 없습니다.")
        try:
            strategy = Strategy(payload['strategy'])
        except ValueError:
            raise UnsupportedStrategyError(f"알 수 없는 인코딩 전략: {payload['strategy']!r}") from None
        params = payload.get('params', {}) or {}

        if strategy is Strategy.BASIS:
            return cls.basis()
        if strategy is Strategy.AMPLITUDE:
            return cls.amplitude()
        if strategy is Strategy.REPEATED_AMPLITUDE:
            return cls.repeated_amplitude(int(params.get('r', 1)))
        if strategy is Strategy.ROTATION:
            return cls.rotation(params.get('axis', 'X'), params.get('convention', 'gate'))
        if strategy is Strategy.COHERENT:
            if 'cutoff' not in params:
                raise MalformedInputError("Coherent 인코딩에는 params.cutoff 가 필요합니다.")
            return cls.coherent(int(params['cutoff']))

        if 'generators' in payload:
            generators = [HermitianOperator(pairs_to_matrix(g)) for g in payload['generators']]
        elif 'generator' in payload:
            generators = [HermitianOperator(pairs_to_matrix(payload['generator']))]
        else:
            raise MalformedInputError("GeneralEvolution 인코딩에는 generator 또는 generators 가 필요합니다.")
        interleavers = [Unitary(pairs_to_matrix(w)) for w in payload.get('interleavers', [])]
        return cls.general_evolution(
            n_qubits=int(params['n_qubits']),
            input_dim=int(params['input_dim']),
            generators=generators,
            interleavers=interleavers,
        )


# ---------------------------------------------------------------------------
# 입력 검증
# ---------------------------------------------------------------------------

def _require_real(spec: EncodingSpec, x: DataPoint) -> np.ndarray:
    if np.iscomplexobj(x.values):
        if np.max(np.abs(x.values.imag)) > 0:
            raise MalformedInputError(f"{spec.strategy.value} 인코딩 입력은 실수여야 합니다.")
        return x.values.real
    return x.values


def truncation_deficit(x: PointLike, cutoff: int) -> float:
    """코히어런트 상태 절단 노름 결손 1 − Π_k Σ_{j<c} e^{−x_k²} x_k^{2j}/j!"""
    values = np.abs(as_point(x).values)
    # Σ_{j≥c} e^{-μ} μ^j / j! = P(c, μ) (정규화된 하부 불완전 감마 함수)
    tails = np.array([gammainc(cutoff, v ** 2) if v > 0 else 0.0 for v in values])
    return float(-np.expm1(np.sum(np.log1p(-tails))))


def suggest_cutoff(max_abs_x: float, tol: Optional[float] = None) -> int:
    """결손이 tol 이하가 되는 최소 cutoff"""
    tol = Config.COHERENT_DEFICIT_TOL if tol is None else tol
    mu = float(max_abs_x) ** 2
    cutoff = 2
    while gammainc(cutoff, mu) > tol:
        cutoff += 1
    return cutoff


def validate_input(spec: EncodingSpec, x: PointLike) -> DataPoint:
    """전략별 입력 제약 검사"""
    x = as_point(x)

    if spec.strategy is Strategy.BASIS:
        bits = _require_real(spec, x)
        if not np.all((bits == 0) | (bits == 1)):
            raise MalformedInputError(f"Basis 인코딩 입력은 0/1 비트여야 합니다: {bits.tolist()}")
        return x

    if spec.strategy in (Strategy.AMPLITUDE, Strategy.REPEATED_AMPLITUDE):
        norm = float(np.linalg.norm(x.values))
        if abs(norm - 1.0) > AMPLITUDE_NORM_TOL:
            raise MalformedInputError(f"Amplitude 인코딩 입력은 단위 노름이어야 합니다: ‖x‖={norm:.15g}")
        return x

    _require_real(spec, x)

    if spec.strategy is Strategy.COHERENT:
        deficit = truncation_deficit(x, spec.cutoff)
        if deficit > Config.COHERENT_DEFICIT_TOL:
            raise TruncationError(
                f"cutoff={spec.cutoff} 절단 오차 {deficit:.3e} 가 허용치를 넘습니다 "
                f"(권장 cutoff: {suggest_cutoff(np.max(np.abs(x.values)))})",
                {'deficit': deficit, 'cutoff': spec.cutoff},
            )

    if spec.strategy is Strategy.GENERAL_EVOLUTION and x.dimension != spec.input_dim:
        raise DimensionMismatchError(f"입력 길이 {x.dimension} ≠ N={spec.input_dim}")

    return x


# ---------------------------------------------------------------------------
# 인코딩
# ---------------------------------------------------------------------------

def _coherent_mode(value: float, cutoff: int) -> np.ndarray:
    """e^{-|x|²/2} Σ_k x^k/√(k!) |k⟩, k < cutoff

    k! 은 k ≥ 171 에서 float 범위를 넘으므로 로그 공간에서 계산한다.
    """
    k = np.arange(cutoff)
    if value == 0.0:
        return (k == 0).astype(float)
    log_magnitude = -value ** 2 / 2.0 + k * np.log(abs(value)) - gammaln(k + 1) / 2.0
    return np.exp(log_magnitude) * np.sign(value) ** k


def _kron_all(vectors: List[np.ndarray]) -> np.ndarray:
    # 마지막 인자가 최하위 블록: feature 0 을 최하위에 둔다
    return reduce(np.kron, list(reversed(vectors)))


def general_evolution_state(spec: EncodingSpec, x: PointLike) -> StateVector:
    """W^(N+1) e^{-i x_N G_N} W^(N) ... W^(2) e^{-i x_1 G_1} W^(1) |0⟩"""
    if spec.strategy is not Strategy.GENERAL_EVOLUTION:
        raise UnsupportedStrategyError(f"GeneralEvolution 이 아닌 전략: {spec.strategy.value}")
    x = validate_input(spec, x)
    values = _require_real(spec, x)

    dimension = 2 ** spec.n_qubits
    psi = apply_unitary(spec.interleavers[0], StateVector.basis(0, dimension))
    for i, x_i in enumerate(values):
        eigenvalues, vectors = spec.eigensystems[i]
        v = vectors.entries
        # e^{-i x G} = V e^{-i x Λ} V†
        evolved = v @ (np.exp(-1j * x_i * eigenvalues) * (v.conj().T @ psi.amplitudes))
        psi = apply_unitary(spec.interleavers[i + 1], StateVector(evolved))
    return psi


def encode(spec: EncodingSpec, x: PointLike) -> StateVector:
    """|φ(x)⟩"""
    x = validate_input(spec, x)

    if spec.strategy is Strategy.BASIS:
        bits = _require_real(spec, x).astype(int)
        index = int(sum(bit << k for k, bit in enumerate(bits)))
        return StateVector.basis(index, 2 ** bits.size)

    if spec.strategy is Strategy.AMPLITUDE:
        return StateVector(x.values.astype(complex))

    if spec.strategy is Strategy.REPEATED_AMPLITUDE:
        return tensor_power(StateVector(x.values.astype(complex)), spec.repetitions)

    if spec.strategy is Strategy.ROTATION:
        scale = 1.0 if spec.convention == "gate" else 2.0
        qubits = [pauli_rotation(spec.axis, scale * value).entries[:, 0] for value in _require_real(spec, x)]
        return StateVector(_kron_all(qubits))

    if spec.strategy is Strategy.COHERENT:
        modes = [_coherent_mode(value, spec.cutoff) for value in _require_real(spec, x)]
        return StateVector(_kron_all(modes))

    return general_evolution_state(spec, x)


def encode_density(spec: EncodingSpec, x: PointLike) -> DensityMatrix:
    """ρ(x) = |φ(x)⟩⟨φ(x)|"""
    return encode(spec, x).density()


def vectorize(spec: EncodingSpec, x: PointLike) -> StateVector:
    """φ_v(x) = |φ(x)⟩ ⊗ |φ*(x)⟩ ∈ C^{D²}"""
    psi = encode(spec, x)
    return tensor_product(psi, psi.conj())


def sample_domain(spec: EncodingSpec, count: int, input_dim: int, rng: np.random.Generator) -> List[DataPoint]:
    """입력 영역에서 일반적인(generic) 점들을 추출"""
    if spec.strategy is Strategy.BASIS:
        if 2 ** input_dim <= count:
            return [DataPoint(np.array([(i >> k) & 1 for k in range(input_dim)], dtype=float))
                    for i in range(2 ** input_dim)]
        return [DataPoint(rng.integers(0, 2, size=input_dim).astype(float)) for _ in range(count)]

    if spec.strategy in (Strategy.AMPLITUDE, Strategy.REPEATED_AMPLITUDE):
        points = []
        for _ in range(count):
            z = rng.standard_normal(input_dim) + 1j * rng.standard_normal(input_dim)
            points.append(DataPoint(z / np.linalg.norm(z)))
        return points

    if spec.strategy is Strategy.COHERENT:
        limit = 1.0
        while truncation_deficit(np.full(input_dim, limit), spec.cutoff) > Config.COHERENT_DEFICIT_TOL and limit > 1e-3:
            limit /= 2.0
        return [DataPoint(rng.uniform(-limit, limit, size=input_dim)) for _ in range(count)]

    return [DataPoint(rng.uniform(-np.pi, np.pi, size=input_dim)) for _ in range(count)]
