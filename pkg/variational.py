"""
변분(variational) 양자 모델

f_θ(x) = tr{ρ(x) W†(θ) O W(θ)}
- 안자츠 W(θ): 매개변수 회전 / 진화 게이트와 고정 얽힘 게이트의 순서 있는 목록
- 매개변수 이동(parameter-shift) 그래디언트, 전체 배치 경사 하강 학습
- 커널 기반 학습과의 비교 (compare)
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import (
    DimensionMismatchError, DivergenceError, InvariantViolationError,
    MalformedInputError, UnsupportedGateError, UnsupportedStrategyError,
)
from feature_maps import EncodingSpec, PointLike, as_point, encode, encode_density, sample_domain
from linalg_core import (
    HermitianOperator, Unitary, cnot, cz, embed_single_qubit, evolution,
    hermitian_eigendecomposition, pauli, pauli_rotation, state_expectation,
)
from training import (
    Dataset, LossKind, LossSpec, box_from_lambda, empirical_risk, fit_kernel_model,
    regularized_risk, svm_objective,
)
from utils import logger, matrix_to_pairs, pairs_to_matrix

SHIFT = np.pi / 2
SHIFT_SPECTRUM_TOL = 1e-10
SPAN_RANK_TOL = 1e-10
FINITE_DIFFERENCE_STEP = 1e-5


class GateKind(str, Enum):
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    EVOLUTION = "EVOLUTION"
    CNOT = "CNOT"
    CZ = "CZ"
    FIXED = "FIXED"


PARAMETERIZED = (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.EVOLUTION)


@dataclass(frozen=True)
class AnsatzGate:
    """안자츠 게이트 하나

    RX/RY/RZ: qubit 에 e^{-i(θ/2)σ}, EVOLUTION: e^{-iθG} (전체 공간),
    CNOT/CZ: qubit 이 제어, target 이 대상, FIXED: 고정 유니터리.
    """

    kind: GateKind
    qubit: int = 0
    param: Optional[int] = None
    target: Optional[int] = None
    generator: Optional[HermitianOperator] = None
    unitary: Optional[Unitary] = None

    def __post_init__(self):
        try:
            kind = GateKind(self.kind)
        except ValueError:
            raise UnsupportedGateError(f"알 수 없는 게이트: {self.kind!r}") from None
        object.__setattr__(self, 'kind', kind)
        if kind in PARAMETERIZED and (self.param is None or self.param < 0):
            raise InvariantViolationError(f"{kind.value} 게이트에는 0 이상의 매개변수 인덱스가 필요합니다.")
        if kind is GateKind.EVOLUTION and self.generator is None:
            raise InvariantViolationError("EVOLUTION 게이트에는 생성자가 필요합니다.")
        if kind in (GateKind.CNOT, GateKind.CZ) and self.target is None:
            raise InvariantViolationError(f"{kind.value} 게이트에는 target 큐빗이 필요합니다.")
        if kind is GateKind.FIXED and self.unitary is None:
            raise InvariantViolationError("FIXED 게이트에는 유니터리가 필요합니다.")

    @property
    def is_parameterized(self) -> bool:
        return self.kind in PARAMETERIZED

    def matrix(self, angle: float, n_qubits: int) -> np.ndarray:
        dimension = 2 ** n_qubits
        if self.kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
            return embed_single_qubit(pauli_rotation(self.kind.value[1], angle).entries, self.qubit, n_qubits)
        if self.kind is GateKind.EVOLUTION:
            if self.generator.dimension != dimension:
                raise DimensionMismatchError(f"EVOLUTION 생성자 차원 {self.generator.dimension} ≠ D={dimension}")
            return evolution(self.generator, angle).entries
        if self.kind is GateKind.CNOT:
            return cnot(self.qubit, self.target, n_qubits).entries
        if self.kind is GateKind.CZ:
            return cz(self.qubit, self.target, n_qubits).entries
        if self.unitary.dimension != dimension:
            raise DimensionMismatchError(f"FIXED 유니터리 차원 {self.unitary.dimension} ≠ D={dimension}")
        return self.unitary.entries

    def check_shift_rule(self) -> None:
        """매개변수 이동 규칙은 생성자 스펙트럼이 {−1/2, +1/2} 일 때만 정확하다"""
        if self.kind is not GateKind.EVOLUTION:
            return
        eigenvalues, _ = hermitian_eigendecomposition(self.generator)
        if np.any(np.abs(np.abs(eigenvalues) - 0.5) > SHIFT_SPECTRUM_TOL):
            raise UnsupportedGateError(
                f"EVOLUTION 생성자의 고유값이 ±1/2 가 아닙니다: {np.round(eigenvalues, 6).tolist()}"
            )

    def to_json(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {'gate': self.kind.value}
        if self.kind in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CNOT, GateKind.CZ):
            payload['qubit'] = self.qubit
        if self.param is not None:
            payload['param'] = self.param
        if self.target is not None:
            payload['target'] = self.target
        if self.generator is not None:
            payload['generator'] = matrix_to_pairs(self.generator.entries)
        if self.unitary is not None:
            payload['unitary'] = matrix_to_pairs(self.unitary.entries)
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "AnsatzGate":
        if 'gate' not in payload:
            raise MalformedInputError(f"게이트 JSON 에 'gate' 키가 없습니다: {payload!r}")
        return cls(
            kind=payload['gate'],
            qubit=int(payload.get('qubit', 0)),
            param=payload.get('param'),
            target=payload.get('target'),
            generator=HermitianOperator(pairs_to_matrix(payload['generator'])) if 'generator' in payload else None,
            unitary=Unitary(pairs_to_matrix(payload['unitary'])) if 'unitary' in payload else None,
        )


Ansatz = Tuple[AnsatzGate, ...]


def reference_ansatz(qubit: int = 0) -> Ansatz:
    """R(θ1, θ2, θ3) = RZ(θ3) RY(θ2) RZ(θ1)"""
    return (
        AnsatzGate(GateKind.RZ, qubit=qubit, param=0),
        AnsatzGate(GateKind.RY, qubit=qubit, param=1),
        AnsatzGate(GateKind.RZ, qubit=qubit, param=2),
    )


def default_observable(n_qubits: int = 1, qubit: int = 0) -> HermitianOperator:
    """지정 큐빗의 σ_z"""
    return HermitianOperator(embed_single_qubit(pauli('Z').entries, qubit, n_qubits))


def parameter_count(ansatz: Sequence[AnsatzGate]) -> int:
    indices = [gate.param for gate in ansatz if gate.is_parameterized]
    return max(indices) + 1 if indices else 0


@dataclass(frozen=True)
class VariationalModel:
    spec: EncodingSpec
    theta: np.ndarray
    observable: HermitianOperator
    ansatz: Ansatz
    trajectory: Tuple[float, ...] = ()
    fit_info: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.spec.is_qubit_encoding:
            raise UnsupportedStrategyError(f"변분 모델은 큐빗 인코딩만 지원합니다: {self.spec.strategy.value}")
        dimension = self.observable.dimension
        n_qubits = int(round(np.log2(dimension)))
        if 2 ** n_qubits != dimension:
            raise DimensionMismatchError(f"관측량 차원 {dimension} 이 2의 거듭제곱이 아닙니다.")
        theta = np.array(self.theta, dtype=float).reshape(-1)
        ansatz = tuple(self.ansatz)
        if theta.size < parameter_count(ansatz):
            raise InvariantViolationError(f"θ 길이 {theta.size} < 안자츠 매개변수 수 {parameter_count(ansatz)}")
        theta.setflags(write=False)
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'ansatz', ansatz)
        object.__setattr__(self, 'trajectory', tuple(float(v) for v in self.trajectory))

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.observable.dimension)))

    def with_theta(self, theta: np.ndarray, trajectory: Sequence[float] = (), fit_info: Optional[Dict[str, Any]] = None) -> "VariationalModel":
        return replace(self, theta=np.asarray(theta, dtype=float), trajectory=tuple(trajectory), fit_info=fit_info or {})

    def to_json(self) -> Dict[str, Any]:
        return {
            'encoding': self.spec.to_json(),
            'theta': self.theta.tolist(),
            'observable': matrix_to_pairs(self.observable.entries),
            'ansatz': [gate.to_json() for gate in self.ansatz],
            'trajectory': list(self.trajectory),
            'fit_info': self.fit_info,
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "VariationalModel":
        return cls(
            spec=EncodingSpec.from_json(payload['encoding']),
            theta=np.asarray(payload['theta'], dtype=float),
            observable=HermitianOperator(pairs_to_matrix(payload['observable'])),
            ansatz=tuple(AnsatzGate.from_json(g) for g in payload['ansatz']),
            trajectory=tuple(payload.get('trajectory', ())),
            fit_info=dict(payload.get('fit_info', {})),
        )


def reference_model(theta: Sequence[float] = (0.0, 0.0, 0.0)) -> VariationalModel:
    """RX 인코딩 + R(θ1,θ2,θ3) + σ_z 로 이루어진 단일 큐빗 모델"""
    return VariationalModel(EncodingSpec.rotation("X"), np.asarray(theta, dtype=float),
                            default_observable(1), reference_ansatz())


# ---------------------------------------------------------------------------
# 평가
# ---------------------------------------------------------------------------

def circuit_unitary(model: VariationalModel, theta: Optional[np.ndarray] = None,
                    offsets: Optional[Dict[int, float]] = None) -> np.ndarray:
    """W(θ) = G_L ... G_1 (offsets: 게이트 위치별 추가 각도)"""
    theta = model.theta if theta is None else theta
    offsets = offsets or {}
    n_qubits = model.n_qubits
    w = np.eye(2 ** n_qubits, dtype=complex)
    for index, gate in enumerate(model.ansatz):
        angle = theta[gate.param] + offsets.get(index, 0.0) if gate.is_parameterized else 0.0
        w = gate.matrix(angle, n_qubits) @ w
    return w


def _measurement_entries(model: VariationalModel, theta: Optional[np.ndarray] = None,
                         offsets: Optional[Dict[int, float]] = None) -> np.ndarray:
    w = circuit_unitary(model, theta, offsets)
    m = w.conj().T @ model.observable.entries @ w
    return 0.5 * (m + m.conj().T)


def measurement_operator(model: VariationalModel) -> HermitianOperator:
    """M(θ) = W†(θ) O W(θ)"""
    return HermitianOperator(_measurement_entries(model))


def _encoded_states(model: VariationalModel, inputs: Sequence[PointLike]) -> np.ndarray:
    states = np.array([encode(model.spec, x).amplitudes for x in inputs])
    if states.shape[1] != model.observable.dimension:
        raise DimensionMismatchError(
            f"인코딩 상태 차원 {states.shape[1]} ≠ 관측량 차원 {model.observable.dimension}"
        )
    return states


def _batch_expectation(states: np.ndarray, m: np.ndarray) -> np.ndarray:
    # f_m = ψ_m† M ψ_m
    return np.real(np.einsum('md,de,me->m', states.conj(), m, states))


def evaluate(model: VariationalModel, x: PointLike) -> float:
    """tr{ρ(x) W†(θ) O W(θ)}"""
    psi = encode(model.spec, x)
    if psi.dimension != model.observable.dimension:
        raise DimensionMismatchError(f"인코딩 상태 차원 {psi.dimension} ≠ 관측량 차원 {model.observable.dimension}")
    return state_expectation(psi, measurement_operator(model))


def evaluate_many(model: VariationalModel, inputs: Sequence[PointLike]) -> np.ndarray:
    """M(θ) 를 한 번만 만들고 입력 전체를 평가"""
    return _batch_expectation(_encoded_states(model, inputs), _measurement_entries(model))


def analytic_reference(theta: Sequence[float], x: float) -> float:
    """cos(θ2)cos(x) − sin(θ1)sin(θ2)sin(x)"""
    theta1, theta2 = float(theta[0]), float(theta[1])
    return float(np.cos(theta2) * np.cos(x) - np.sin(theta1) * np.sin(theta2) * np.sin(x))


# ---------------------------------------------------------------------------
# 그래디언트
# ---------------------------------------------------------------------------

def _check_shift_rules(model: VariationalModel) -> None:
    for gate in model.ansatz:
        gate.check_shift_rule()


def _batch_parameter_shift(model: VariationalModel, states: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """(입력 수, 매개변수 수) 야코비안 ∂f(x_m)/∂θ_k"""
    jacobian = np.zeros((states.shape[0], theta.size))
    for index, gate in enumerate(model.ansatz):
        if not gate.is_parameterized:
            continue
        plus = _batch_expectation(states, _measurement_entries(model, theta, {index: SHIFT}))
        minus = _batch_expectation(states, _measurement_entries(model, theta, {index: -SHIFT}))
        # 같은 매개변수를 공유하는 게이트의 기여는 더해진다
        jacobian[:, gate.param] += 0.5 * (plus - minus)
    return jacobian


def parameter_shift_gradient(model: VariationalModel, x: PointLike) -> np.ndarray:
    """∂f/∂θ_k = Σ_{게이트} [f(+π/2) − f(−π/2)] / 2"""
    _check_shift_rules(model)
    states = _encoded_states(model, [x])
    return _batch_parameter_shift(model, states, model.theta)[0]


def finite_difference_gradient(model: VariationalModel, x: PointLike, step: float = FINITE_DIFFERENCE_STEP) -> np.ndarray:
    """중심 차분 그래디언트"""
    states = _encoded_states(model, [x])
    gradient = np.zeros(model.theta.size)
    for k in range(model.theta.size):
        shifted = model.theta.copy()
        shifted[k] += step
        plus = _batch_expectation(states, _measurement_entries(model, shifted))[0]
        shifted[k] -= 2 * step
        minus = _batch_expectation(states, _measurement_entries(model, shifted))[0]
        gradient[k] = (plus - minus) / (2 * step)
    return gradient


# ---------------------------------------------------------------------------
# 학습
# ---------------------------------------------------------------------------

def _loss_and_gradient(model: VariationalModel, states: np.ndarray, labels: np.ndarray,
                       loss: LossSpec, theta: np.ndarray, with_gradient: bool = True) -> Tuple[float, np.ndarray]:
    predictions = _batch_expectation(states, _measurement_entries(model, theta))
    value = float(np.mean(loss(labels, predictions)))
    if not with_gradient:
        return value, np.zeros(theta.size)
    jacobian = _batch_parameter_shift(model, states, theta)
    if loss.kind is LossKind.SQUARED_ERROR:
        weights = -2.0 * (labels - predictions)
    else:
        weights = np.where(1.0 - labels * predictions > 0, -labels, 0.0)
    return value, weights @ jacobian / labels.size


def train(model: VariationalModel, data: Dataset, loss: LossSpec, lam: float, lr: float, epochs: int, seed: int) -> VariationalModel:
    """전체 배치 경사 하강

    θ 는 seed 로 [0, 2π) 에서 균등하게 초기화한다.
    tr{M(θ)²} = tr{O²} 는 θ 에 무관하므로 λ 항은 최적화에서 빠진다.
    trajectory[e] 는 e 번 갱신한 뒤의 경험적 위험이다.
    """
    if epochs < 1:
        raise MalformedInputError(f"epochs 는 1 이상이어야 합니다: {epochs}")
    if not lr > 0:
        raise MalformedInputError(f"학습률은 양수여야 합니다: {lr}")
    if lam < 0:
        raise MalformedInputError(f"λ 는 0 이상이어야 합니다: {lam}")
    _check_shift_rules(model)

    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=parameter_count(model.ansatz))
    states = _encoded_states(model, data.inputs)
    labels = data.labels

    trajectory: List[float] = []
    for epoch in range(epochs):
        value, gradient = _loss_and_gradient(model, states, labels, loss, theta)
        if not np.isfinite(value) or not np.all(np.isfinite(gradient)):
            raise DivergenceError(f"epoch {epoch} 에서 손실이 유한하지 않습니다: {value}", epoch=epoch)
        trajectory.append(value)
        theta = theta - lr * gradient

    final, _ = _loss_and_gradient(model, states, labels, loss, theta, with_gradient=False)
    if not np.isfinite(final) or not np.all(np.isfinite(theta)):
        raise DivergenceError(f"epoch {epochs} 에서 손실이 유한하지 않습니다: {final}", epoch=epochs)
    trajectory.append(final)

    info = {
        'seed': int(seed),
        'lr': float(lr),
        'epochs': int(epochs),
        'loss': loss.kind.value,
        'circuit_evals': variational_circuit_evals(epochs, data.size, theta.size),
    }
    logger.debug(f"변분 학습 완료 (seed={seed}): 위험 {trajectory[0]:.6g} → {final:.6g}")
    return model.with_theta(theta, trajectory, info)


def train_with_restarts(model: VariationalModel, data: Dataset, loss: LossSpec, lam: float, lr: float,
                        epochs: int, seeds: Sequence[int], workers: Optional[int] = None) -> List[VariationalModel]:
    """시드별 독립 학습 (시드 순서대로 반환)"""
    workers = Config.VARIATIONAL_WORKERS if workers is None else workers
    if workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda s: train(model, data, loss, lam, lr, epochs, s), seeds))
    return [train(model, data, loss, lam, lr, epochs, s) for s in seeds]


def variational_circuit_evals(epochs: int, size: int, n_params: int) -> int:
    """epochs · M · (1 + 2|θ|)"""
    return int(epochs) * int(size) * (1 + 2 * int(n_params))


def kernel_circuit_evals(size: int) -> int:
    """M(M+1)/2"""
    return int(size) * (int(size) + 1) // 2


# ---------------------------------------------------------------------------
# RKHS 노름
# ---------------------------------------------------------------------------

def _real_vector(matrix: np.ndarray) -> np.ndarray:
    # 에르미트 행렬 사이의 tr{AB} = Re(A)·Re(B) + Im(A)·Im(B)
    return np.concatenate([matrix.real.reshape(-1), matrix.imag.reshape(-1)])


def rkhs_norm_squared(spec: EncodingSpec, m: HermitianOperator, inputs: Sequence[PointLike], seed: int = 0) -> float:
    """f(x) = tr{ρ(x)M} 의 RKHS 노름 제곱 = ‖P_span M‖²_F

    span 은 입력들과 입력 영역의 무작위 표본 (2D²+2 개) 에 대한 ρ(x) 의 실수 선형 생성 공간.
    """
    points = [as_point(x) for x in inputs]
    if not points:
        raise MalformedInputError("RKHS 노름 계산에는 최소 한 개의 입력이 필요합니다.")
    input_dim = points[0].dimension
    dimension = m.dimension
    rng = np.random.default_rng(seed)
    points += sample_domain(spec, 2 * dimension ** 2 + 2, input_dim, rng)

    rows = np.array([_real_vector(encode_density(spec, x).entries) for x in points])
    if rows.shape[1] != 2 * dimension ** 2:
        raise DimensionMismatchError(f"인코딩 상태 차원이 측정 연산자 차원 {dimension} 과 다릅니다.")
    _, singular_values, basis = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.count_nonzero(singular_values > SPAN_RANK_TOL * singular_values[0]))
    projection = basis[:rank] @ _real_vector(m.entries)
    return float(projection @ projection)


# ---------------------------------------------------------------------------
# 비교
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrainingParams:
    lr: float = 0.1
    epochs: int = 100
    restarts: int = Config.VARIATIONAL_RESTARTS
    seed: int = 0
    c_box: Optional[float] = None
    svm_gap_tol: float = 1e-11

    def __post_init__(self):
        if self.epochs < 1:
            raise MalformedInputError(f"epochs 는 1 이상이어야 합니다: {self.epochs}")
        if not self.lr > 0:
            raise MalformedInputError(f"학습률은 양수여야 합니다: {self.lr}")
        if self.restarts < 1:
            raise MalformedInputError(f"restarts 는 1 이상이어야 합니다: {self.restarts}")

    @property
    def seeds(self) -> List[int]:
        return [self.seed + r for r in range(self.restarts)]


@dataclass(frozen=True)
class ComparisonReport:
    objective: str
    loss: str
    lam: float
    c_box: Optional[float]
    kernel_risk: float
    kernel_seconds: float
    kernel_circuit_evals: int
    variational_risk: float
    variational_seconds: float
    variational_circuit_evals: int
    best_seed: int
    trajectory: Tuple[float, ...]
    seeds: Tuple[int, ...]
    restart_risks: Tuple[float, ...]

    @property
    def kernel_dominates(self) -> bool:
        return self.kernel_risk <= self.variational_risk + 1e-9

    def to_dict(self, record_timing: bool = True) -> Dict[str, Any]:
        return {
            'objective': self.objective,
            'loss': self.loss,
            'lambda': self.lam,
            'c_box': self.c_box,
            'kernel': {
                'risk': self.kernel_risk,
                'seconds': self.kernel_seconds if record_timing else None,
                'circuit_evals': self.kernel_circuit_evals,
            },
            'variational': {
                'risk': self.variational_risk,
                'seconds': self.variational_seconds if record_timing else None,
                'circuit_evals': self.variational_circuit_evals,
                'best_seed': self.best_seed,
                'trajectory': list(self.trajectory),
                'restarts': len(self.seeds),
                'seeds': list(self.seeds),
                'restart_risks': list(self.restart_risks),
            },
        }


def _variational_objective(model: VariationalModel, data: Dataset, loss: LossSpec, lam: float,
                           c_box: Optional[float], seed: int) -> float:
    predictions = evaluate_many(model, data.inputs)
    risk = empirical_risk(predictions, data, loss)
    if loss.kind is LossKind.HINGE:
        return risk + rkhs_norm_squared(model.spec, measurement_operator(model), data.inputs, seed) / (2.0 * c_box * data.size)
    if lam == 0:
        return risk
    return lam * rkhs_norm_squared(model.spec, measurement_operator(model), data.inputs, seed) + risk


def compare(spec: EncodingSpec, ansatz: VariationalModel, data: Dataset, loss: LossSpec, lam: float,
            params: Optional[TrainingParams] = None) -> ComparisonReport:
    """커널 학습 vs 변분 학습 (R 회 재시작 중 최선)

    제곱 손실: 양쪽 모두 λ‖f‖²_H + 경험적 위험.
    힌지 손실: 양쪽 모두 (1/M)Σ hinge + ‖f‖²_H / (2·C·M).
    """
    params = params or TrainingParams()
    c_box = box_from_lambda(lam, data.size, params.c_box) if loss.kind is LossKind.HINGE else None

    started = time.perf_counter()
    kernel_model = fit_kernel_model(spec, data, loss, lam, params.c_box, gap_tol=params.svm_gap_tol)
    if loss.kind is LossKind.HINGE:
        kernel_risk = svm_objective(kernel_model, data, c_box)
    else:
        kernel_risk = regularized_risk(kernel_model, data, loss, lam)
    kernel_seconds = time.perf_counter() - started

    started = time.perf_counter()
    model = replace(ansatz, spec=spec)
    runs = train_with_restarts(model, data, loss, lam, params.lr, params.epochs, params.seeds)
    risks = [_variational_objective(run, data, loss, lam, c_box, params.seed) for run in runs]
    best = int(np.argmin(risks))
    variational_seconds = time.perf_counter() - started

    report = ComparisonReport(
        objective='svm-objective' if loss.kind is LossKind.HINGE else 'regularized-risk',
        loss=loss.kind.value,
        lam=float(lam),
        c_box=c_box,
        kernel_risk=float(kernel_risk),
        kernel_seconds=kernel_seconds,
        kernel_circuit_evals=kernel_circuit_evals(data.size),
        variational_risk=float(risks[best]),
        variational_seconds=variational_seconds,
        variational_circuit_evals=variational_circuit_evals(params.epochs, data.size, parameter_count(model.ansatz)),
        best_seed=params.seeds[best],
        trajectory=runs[best].trajectory,
        seeds=tuple(params.seeds),
        restart_risks=tuple(float(r) for r in risks),
    )
    logger.info(f"비교 완료: 커널 {report.kernel_risk:.6g} vs 변분 {report.variational_risk:.6g} "
                f"(best seed {report.best_seed})")
    return report
