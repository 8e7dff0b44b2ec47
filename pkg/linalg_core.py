"""
밀집(dense) 복소 선형대수 기반 모듈

상태 벡터, 밀도 행렬, 에르미트 연산자, 유니터리와
텐서곱 / 고유값 분해 / 기댓값 계산을 제공한다.

기저 인덱스 규약: i = Σ_k 2^k q_k (qubit 0 이 최하위 비트).
tensor_product(a, b) 는 첫 번째 인자를 최상위 블록에 둔다.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Tuple, Union

import numpy as np

from errors import DimensionMismatchError, InvariantViolationError, NotHermitianError

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
UNITARY_TOL = 1e-10
IMAG_TOL = 1e-10


def _as_square(entries, name: str) -> np.ndarray:
    matrix = np.array(entries, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise InvariantViolationError(f"{name}: 정방 행렬이 아닙니다 (shape={matrix.shape})")
    matrix.setflags(write=False)
    return matrix


def _hermiticity_error(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T)))


@dataclass(frozen=True)
class StateVector:
    """순수 상태 |ψ⟩ ∈ C^D"""

    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size < 1:
            raise InvariantViolationError("상태 벡터의 차원은 1 이상이어야 합니다.")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantViolationError(
                f"상태 벡터 노름이 1이 아닙니다: {norm:.15g}", {'norm': float(norm)}
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.size)

    def conj(self) -> "StateVector":
        return StateVector(self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        """|ψ⟩⟨ψ|"""
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    @classmethod
    def basis(cls, index: int, dimension: int) -> "StateVector":
        if not 0 <= index < dimension:
            raise InvariantViolationError(f"기저 인덱스 범위 초과: {index} (D={dimension})")
        amplitudes = np.zeros(dimension, dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)


@dataclass(frozen=True)
class DensityMatrix:
    """밀도 행렬 ρ (에르미트, 대각합 1, 양의 준정부호)"""

    entries: np.ndarray

    def __post_init__(self):
        entries = _as_square(self.entries, "DensityMatrix")
        herm_err = _hermiticity_error(entries)
        if herm_err > HERMITIAN_TOL:
            raise InvariantViolationError(f"밀도 행렬이 에르미트가 아닙니다 (오차 {herm_err:.3e})")
        trace = np.trace(entries)
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvariantViolationError(f"밀도 행렬 대각합이 1이 아닙니다: {trace}")
        min_eig = float(np.linalg.eigvalsh(entries)[0])
        if min_eig < -PSD_TOL:
            raise InvariantViolationError(f"밀도 행렬이 양의 준정부호가 아닙니다 (최소 고유값 {min_eig:.3e})")
        object.__setattr__(self, 'entries', entries)

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


@dataclass(frozen=True)
class HermitianOperator:
    """에르미트 연산자 (측정 M, 생성자 G, 파울리 행렬 등)"""

    entries: np.ndarray

    def __post_init__(self):
        entries = _as_square(self.entries, "HermitianOperator")
        herm_err = _hermiticity_error(entries)
        if herm_err > HERMITIAN_TOL:
            raise NotHermitianError(f"에르미트 연산자가 아닙니다 (오차 {herm_err:.3e})")
        object.__setattr__(self, 'entries', entries)

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True)
class Unitary:
    """유니터리 연산자"""

    entries: np.ndarray

    def __post_init__(self):
        entries = _as_square(self.entries, "Unitary")
        identity = np.eye(entries.shape[0])
        err = float(np.max(np.abs(entries.conj().T @ entries - identity)))
        if err > UNITARY_TOL:
            raise InvariantViolationError(f"유니터리가 아닙니다 (U†U - I 최대 오차 {err:.3e})")
        object.__setattr__(self, 'entries', entries)

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    def dagger(self) -> "Unitary":
        return Unitary(self.entries.conj().T)

    def __matmul__(self, other: "Unitary") -> "Unitary":
        if self.dimension != other.dimension:
            raise DimensionMismatchError(f"유니터리 차원 불일치: {self.dimension} vs {other.dimension}")
        return Unitary(self.entries @ other.entries)

    @classmethod
    def identity(cls, dimension: int) -> "Unitary":
        return cls(np.eye(dimension, dtype=complex))


Operand = Union[StateVector, DensityMatrix, HermitianOperator, Unitary, np.ndarray]


def _raw(value: Operand) -> np.ndarray:
    if isinstance(value, StateVector):
        return value.amplitudes
    if isinstance(value, (DensityMatrix, HermitianOperator, Unitary)):
        return value.entries
    return np.asarray(value, dtype=complex)


def tensor_product(a: Operand, b: Operand) -> Operand:
    """텐서곱 a ⊗ b (a 가 최상위 인덱스 블록)

    같은 타입끼리는 같은 타입을 반환하고, 섞인 경우 ndarray 를 반환한다.
    """
    raw_a, raw_b = _raw(a), _raw(b)
    if raw_a.size == 0 or raw_b.size == 0:
        raise DimensionMismatchError("텐서곱 인자의 차원은 양수여야 합니다.")
    if raw_a.ndim != raw_b.ndim:
        raise DimensionMismatchError("상태와 연산자는 텐서곱할 수 없습니다.")

    product = np.kron(raw_a, raw_b)
    if type(a) is type(b) and isinstance(a, (StateVector, DensityMatrix, HermitianOperator, Unitary)):
        return type(a)(product)
    return product


def tensor_power(a: Operand, times: int) -> Operand:
    """a ⊗ a ⊗ ... ⊗ a (times 번)"""
    if times < 1:
        raise InvariantViolationError(f"텐서 거듭제곱 횟수는 1 이상이어야 합니다: {times}")
    return reduce(tensor_product, [a] * times)


def hermitian_eigendecomposition(h: Union[HermitianOperator, np.ndarray]) -> Tuple[np.ndarray, Unitary]:
    """에르미트 연산자의 고유값 분해 h = V diag(λ) V†

    Returns:
        (오름차순 실수 고유값, 고유벡터를 열로 갖는 유니터리 V)
    """
    if not isinstance(h, HermitianOperator):
        h = HermitianOperator(h)
    eigenvalues, eigenvectors = np.linalg.eigh(h.entries)
    order = np.argsort(eigenvalues, kind='stable')
    return np.asarray(eigenvalues[order], dtype=float), Unitary(eigenvectors[:, order])


def expectation(rho: DensityMatrix, m: HermitianOperator) -> float:
    """tr{ρM}"""
    if rho.dimension != m.dimension:
        raise DimensionMismatchError(f"차원 불일치: ρ {rho.dimension} vs M {m.dimension}")
    value = np.trace(rho.entries @ m.entries)
    if abs(value.imag) > IMAG_TOL:
        raise InvariantViolationError(f"tr{{ρM}} 의 허수부가 너무 큽니다: {value.imag:.3e}")
    return float(value.real)


def state_expectation(psi: StateVector, m: HermitianOperator) -> float:
    """⟨ψ|M|ψ⟩ (밀도 행렬을 만들지 않는 경로)"""
    if psi.dimension != m.dimension:
        raise DimensionMismatchError(f"차원 불일치: ψ {psi.dimension} vs M {m.dimension}")
    value = np.vdot(psi.amplitudes, m.entries @ psi.amplitudes)
    if abs(value.imag) > IMAG_TOL:
        raise InvariantViolationError(f"⟨ψ|M|ψ⟩ 의 허수부가 너무 큽니다: {value.imag:.3e}")
    return float(value.real)


def hs_inner_product(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Hilbert-Schmidt 내적 tr{ρ†σ}"""
    if rho.dimension != sigma.dimension:
        raise DimensionMismatchError(f"차원 불일치: {rho.dimension} vs {sigma.dimension}")
    # tr{A†B} = Σ conj(A_ij) B_ij
    value = np.vdot(rho.entries, sigma.entries)
    if abs(value.imag) > IMAG_TOL:
        raise InvariantViolationError(f"HS 내적의 허수부가 너무 큽니다: {value.imag:.3e}")
    return float(value.real)


def apply_unitary(u: Unitary, psi: StateVector) -> StateVector:
    """|ψ′⟩ = U|ψ⟩"""
    if u.dimension != psi.dimension:
        raise DimensionMismatchError(f"차원 불일치: U {u.dimension} vs ψ {psi.dimension}")
    return StateVector(u.entries @ psi.amplitudes)


def evolve_density(u: Unitary, rho: DensityMatrix) -> DensityMatrix:
    """ρ′ = UρU†"""
    if u.dimension != rho.dimension:
        raise DimensionMismatchError(f"차원 불일치: U {u.dimension} vs ρ {rho.dimension}")
    entries = u.entries @ rho.entries @ u.entries.conj().T
    return DensityMatrix(0.5 * (entries + entries.conj().T))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|⟨a|b⟩|²"""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(f"차원 불일치: {a.dimension} vs {b.dimension}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def states_equal(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    """전역 위상을 무시한 상태 비교"""
    return abs(fidelity(a, b) - 1.0) <= tol


# ---------------------------------------------------------------------------
# 게이트 / 연산자 빌더
# ---------------------------------------------------------------------------

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {'X': PAULI_X, 'Y': PAULI_Y, 'Z': PAULI_Z}


def pauli(axis: str) -> HermitianOperator:
    try:
        return HermitianOperator(PAULIS[axis.upper()])
    except KeyError:
        raise InvariantViolationError(f"알 수 없는 파울리 축: {axis!r}") from None


def pauli_rotation(axis: str, angle: float) -> Unitary:
    """R_σ(θ) = e^{-i(θ/2)σ} = cos(θ/2) I - i sin(θ/2) σ"""
    sigma = pauli(axis).entries
    return Unitary(np.cos(angle / 2.0) * IDENTITY_2 - 1j * np.sin(angle / 2.0) * sigma)


def rot(theta1: float, theta2: float, theta3: float) -> Unitary:
    """R(θ1, θ2, θ3) = RZ(θ3) RY(θ2) RZ(θ1) (θ1 이 먼저 적용됨)

    f(x) = tr{ρ(x) R†σ_z R} 가 cos(θ2)cos(x) − sin(θ1)sin(θ2)sin(x) 가 되는 순서.
    """
    return pauli_rotation('Z', theta3) @ pauli_rotation('Y', theta2) @ pauli_rotation('Z', theta1)


def evolution(generator: HermitianOperator, t: float) -> Unitary:
    """e^{-itG} = V e^{-itΛ} V†"""
    eigenvalues, vectors = hermitian_eigendecomposition(generator)
    v = vectors.entries
    return Unitary((v * np.exp(-1j * t * eigenvalues)) @ v.conj().T)


def embed_single_qubit(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """단일 큐빗 연산자를 n 큐빗 공간에 삽입 (qubit 0 = 최하위 비트 = 마지막 텐서 인자)"""
    if not 0 <= qubit < n_qubits:
        raise DimensionMismatchError(f"큐빗 인덱스 범위 초과: {qubit} (n={n_qubits})")
    factors = [op if k == qubit else IDENTITY_2 for k in reversed(range(n_qubits))]
    return reduce(np.kron, factors)


def controlled(op: np.ndarray, control: int, target: int, n_qubits: int) -> np.ndarray:
    """제어 큐빗이 1 일 때 target 에 op 를 적용하는 n 큐빗 연산자"""
    if control == target:
        raise DimensionMismatchError("제어 큐빗과 대상 큐빗이 같습니다.")
    proj0 = np.array([[1, 0], [0, 0]], dtype=complex)
    proj1 = np.array([[0, 0], [0, 1]], dtype=complex)
    return (embed_single_qubit(proj0, control, n_qubits)
            + embed_single_qubit(proj1, control, n_qubits) @ embed_single_qubit(op, target, n_qubits))


def cnot(control: int, target: int, n_qubits: int) -> Unitary:
    return Unitary(controlled(PAULI_X, control, target, n_qubits))


def cz(control: int, target: int, n_qubits: int) -> Unitary:
    return Unitary(controlled(PAULI_Z, control, target, n_qubits))


def random_unitary(dimension: int, rng: np.random.Generator) -> Unitary:
    """Haar 분포 유니터리 (QR 분해 + 위상 보정)"""
    z = (rng.standard_normal((dimension, dimension)) + 1j * rng.standard_normal((dimension, dimension))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return Unitary(q * phases)


def random_hermitian(dimension: int, rng: np.random.Generator) -> HermitianOperator:
    """H = A + A† 형태의 무작위 에르미트 연산자"""
    a = rng.standard_normal((dimension, dimension)) + 1j * rng.standard_normal((dimension, dimension))
    return HermitianOperator(a + a.conj().T)
