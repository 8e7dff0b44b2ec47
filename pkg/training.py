"""
커널 기반 학습 (볼록 최적화)

표현자 정리 모델 f(x) = Σ_m α_m κ(x^m, x) 에 대해
- 커널 릿지 회귀 (제곱 오차, 닫힌 형태)
- 편향 없는 힌지 손실 SVM 쌍대 문제 (0 ≤ β ≤ C, 순환 좌표 상승법)
을 풀고, 정규화된 경험적 위험을 계산한다.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from config import Config
from errors import ConvergenceError, InvariantViolationError, MalformedInputError
from feature_maps import DataPoint, EncodingSpec, PointLike, as_point, encode, vectorize
from kernels import cross_gram, gram
from linalg_core import HermitianOperator, hermitian_eigendecomposition
from utils import logger

REGULARIZER_TOL = 1e-9


class LossKind(str, Enum):
    SQUARED_ERROR = "SquaredError"
    HINGE = "Hinge"


@dataclass(frozen=True)
class LossSpec:
    kind: LossKind

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', LossKind(self.kind))
        except ValueError:
            raise MalformedInputError(f"알 수 없는 손실 함수: {self.kind!r}") from None

    @classmethod
    def squared_error(cls) -> "LossSpec":
        return cls(LossKind.SQUARED_ERROR)

    @classmethod
    def hinge(cls) -> "LossSpec":
        return cls(LossKind.HINGE)

    def __call__(self, labels: np.ndarray, predictions: np.ndarray) -> np.ndarray:
        """샘플별 손실 L(y, f(x))"""
        labels = np.asarray(labels, dtype=float)
        predictions = np.asarray(predictions, dtype=float)
        if self.kind is LossKind.SQUARED_ERROR:
            return (labels - predictions) ** 2
        return np.maximum(0.0, 1.0 - labels * predictions)


@dataclass(frozen=True)
class Dataset:
    """학습 데이터 {(x^m, y^m)}"""

    inputs: Tuple[DataPoint, ...]
    labels: np.ndarray

    def __post_init__(self):
        inputs = tuple(as_point(x) for x in self.inputs)
        labels = np.array(self.labels, dtype=float).reshape(-1)
        if len(inputs) < 1:
            raise MalformedInputError("데이터셋이 비어 있습니다.")
        if len(inputs) != labels.size:
            raise MalformedInputError(f"입력 개수 {len(inputs)} ≠ 레이블 개수 {labels.size}")
        dimensions = {x.dimension for x in inputs}
        if len(dimensions) != 1:
            raise MalformedInputError(f"입력 차원이 일정하지 않습니다: {sorted(dimensions)}")
        if not np.all(np.isfinite(labels)):
            raise MalformedInputError("레이블에 유한하지 않은 값이 있습니다.")
        labels.setflags(write=False)
        object.__setattr__(self, 'inputs', inputs)
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def of(cls, inputs: Sequence[PointLike], labels: Sequence[float]) -> "Dataset":
        return cls(tuple(as_point(x) for x in inputs), np.asarray(labels, dtype=float))

    @property
    def size(self) -> int:
        return len(self.inputs)

    @property
    def input_dim(self) -> int:
        return self.inputs[0].dimension

    def is_binary(self) -> bool:
        return bool(np.all(np.isin(self.labels, (-1.0, 1.0))))


@dataclass(frozen=True)
class KernelModel:
    """f(x) = Σ_m α_m κ(x^m, x)"""

    spec: EncodingSpec
    support_inputs: Tuple[DataPoint, ...]
    alphas: np.ndarray
    lam: float = 0.0
    loss: Optional[LossKind] = None
    fit_info: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        support = tuple(as_point(x) for x in self.support_inputs)
        alphas = np.array(self.alphas, dtype=float).reshape(-1)
        if len(support) != alphas.size:
            raise InvariantViolationError(f"서포트 입력 {len(support)}개 ≠ α {alphas.size}개")
        if self.lam < 0:
            raise InvariantViolationError(f"λ 는 0 이상이어야 합니다: {self.lam}")
        alphas.setflags(write=False)
        object.__setattr__(self, 'support_inputs', support)
        object.__setattr__(self, 'alphas', alphas)
        if self.loss is not None:
            object.__setattr__(self, 'loss', LossKind(self.loss))

    def to_json(self) -> Dict[str, Any]:
        return {
            'encoding': self.spec.to_json(),
            'support_inputs': [x.to_json() for x in self.support_inputs],
            'alphas': self.alphas.tolist(),
            'lambda': float(self.lam),
            'loss': self.loss.value if self.loss is not None else None,
            'fit_info': self.fit_info,
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "KernelModel":
        return cls(
            spec=EncodingSpec.from_json(payload['encoding']),
            support_inputs=tuple(DataPoint.from_json(x) for x in payload['support_inputs']),
            alphas=np.asarray(payload['alphas'], dtype=float),
            lam=float(payload.get('lambda', 0.0)),
            loss=payload.get('loss'),
            fit_info=dict(payload.get('fit_info', {})),
        )


# ---------------------------------------------------------------------------
# 예측
# ---------------------------------------------------------------------------

def predict_many(model: KernelModel, inputs: Sequence[PointLike]) -> np.ndarray:
    if not model.support_inputs:
        return np.zeros(len(inputs))
    return cross_gram(model.spec, inputs, model.support_inputs) @ model.alphas


def predict(model: KernelModel, x: PointLike) -> float:
    """Σ_m α_m κ(x^m, x)"""
    return float(predict_many(model, [x])[0])


# ---------------------------------------------------------------------------
# 커널 릿지 회귀
# ---------------------------------------------------------------------------

def _pseudo_inverse_solve(k: np.ndarray, y: np.ndarray, cutoff: float) -> Tuple[np.ndarray, int]:
    """α = K⁺y (고유값 λ_k ≤ cutoff·λ_max 는 0 으로 취급)"""
    eigenvalues, vectors = hermitian_eigendecomposition(0.5 * (k + k.T))
    v = vectors.entries
    threshold = cutoff * max(float(eigenvalues[-1]), 0.0)
    keep = eigenvalues > threshold
    inverse = np.zeros_like(eigenvalues)
    inverse[keep] = 1.0 / eigenvalues[keep]
    alphas = v @ (inverse * (v.conj().T @ y))
    return np.real(alphas), int(np.count_nonzero(keep))


def fit_krr(spec: EncodingSpec, data: Dataset, lam: float) -> KernelModel:
    """(K + λ·M·I) α = y  (λ = 0 이면 α = K⁺y)"""
    if lam < 0:
        raise MalformedInputError(f"λ 는 0 이상이어야 합니다: {lam}")
    k = gram(spec, data.inputs).values
    size = data.size
    y = data.labels

    if lam > 0:
        alphas = scipy.linalg.solve(k + lam * size * np.eye(size), y, assume_a='pos')
        info: Dict[str, Any] = {'solver': 'cholesky', 'rank': size}
    else:
        alphas, rank = _pseudo_inverse_solve(k, y, Config.PINV_CUTOFF)
        info = {'solver': 'pseudo-inverse', 'rank': rank}

    logger.info(f"KRR 학습 완료: M={size}, λ={lam}, 방법={info['solver']}, rank={info['rank']}")
    return KernelModel(spec, data.inputs, alphas, lam, LossKind.SQUARED_ERROR, info)


# ---------------------------------------------------------------------------
# SVM (편향 없는 쌍대 문제)
# ---------------------------------------------------------------------------

def svm_primal_dual(k: np.ndarray, labels: np.ndarray, beta: np.ndarray, c_box: float) -> Dict[str, float]:
    """P(α) = ½αᵀKα + C Σ hinge, D(β) = Σβ − ½βᵀQβ, α = β∘y"""
    k = np.asarray(k, dtype=float)
    labels = np.asarray(labels, dtype=float)
    beta = np.asarray(beta, dtype=float)
    alphas = beta * labels
    decision = k @ alphas
    quadratic = float(alphas @ decision)
    primal = 0.5 * quadratic + c_box * float(np.sum(np.maximum(0.0, 1.0 - labels * decision)))
    dual = float(np.sum(beta)) - 0.5 * quadratic
    return {'primal': primal, 'dual': dual, 'gap': primal - dual}


def fit_svm(
    spec: EncodingSpec,
    data: Dataset,
    c_box: float,
    max_passes: Optional[int] = None,
    gap_tol: Optional[float] = None,
    step_tol: Optional[float] = None,
) -> KernelModel:
    """max Σβ − ½ΣΣ β_m β_m′ y^m y^m′ K_mm′  s.t. 0 ≤ β ≤ C

    좌표마다 1차원 최대화 후 상자 제약으로 자른다.
    쌍대 간극 ≤ gap_tol 이고 한 패스의 최대 이동량 ≤ step_tol 이면 종료.
    """
    solver = Config.get_solver_config()
    max_passes = solver['max_passes'] if max_passes is None else max_passes
    gap_tol = solver['gap_tol'] if gap_tol is None else gap_tol
    step_tol = solver['step_tol'] if step_tol is None else step_tol

    if not c_box > 0:
        raise MalformedInputError(f"c_box 는 양수여야 합니다: {c_box}")
    if not data.is_binary():
        raise MalformedInputError("SVM 레이블은 -1 또는 +1 이어야 합니다.")

    k = gram(spec, data.inputs).values
    y = data.labels
    q = np.outer(y, y) * k
    diagonal = np.diag(q)
    beta = np.zeros(data.size)
    trajectory: List[float] = []
    status = svm_primal_dual(k, y, beta, c_box)

    for passes in range(1, max_passes + 1):
        q_beta = q @ beta
        max_step = 0.0
        for m in range(data.size):
            gradient = 1.0 - q_beta[m]
            updated = min(c_box, max(0.0, beta[m] + gradient / diagonal[m]))
            delta = updated - beta[m]
            if delta != 0.0:
                q_beta += delta * q[:, m]
                beta[m] = updated
                max_step = max(max_step, abs(delta))

        status = svm_primal_dual(k, y, beta, c_box)
        trajectory.append(status['dual'])
        if passes % 1000 == 0:
            logger.debug(f"SVM 패스 {passes}: dual={status['dual']:.12g}, gap={status['gap']:.3e}")

        if status['gap'] <= gap_tol and max_step <= step_tol:
            info = {
                'solver': 'coordinate-ascent',
                'passes': passes,
                'gap': status['gap'],
                'primal': status['primal'],
                'dual': status['dual'],
                'dual_trajectory': trajectory,
                'beta': beta.tolist(),
                'support': (beta > 0).tolist(),
                'at_bound': (beta >= c_box).tolist(),
                'c_box': float(c_box),
            }
            logger.info(f"SVM 학습 완료: M={data.size}, C={c_box}, 패스={passes}, gap={status['gap']:.3e}, "
                        f"서포트 벡터 {int(np.count_nonzero(beta > 0))}개")
            return KernelModel(spec, data.inputs, beta * y, 0.0, LossKind.HINGE, info)

    raise ConvergenceError(
        f"SVM 쌍대 문제가 {max_passes} 패스 안에 수렴하지 않았습니다 (gap={status['gap']:.3e})",
        gap=float(status['gap']),
        passes=max_passes,
    )


def box_from_lambda(lam: float, size: int, c_box: Optional[float] = None) -> float:
    """λ > 0 이면 C = 1/(2λM), 아니면 주어진 C (기본 1)"""
    if lam > 0:
        return 1.0 / (2.0 * lam * size)
    return 1.0 if c_box is None else float(c_box)


def fit_kernel_model(
    spec: EncodingSpec, data: Dataset, loss: LossSpec, lam: float, c_box: Optional[float] = None,
    gap_tol: Optional[float] = None,
) -> KernelModel:
    """손실 함수에 맞는 커널 학습기 선택"""
    if loss.kind is LossKind.SQUARED_ERROR:
        return fit_krr(spec, data, lam)
    model = fit_svm(spec, data, box_from_lambda(lam, data.size, c_box), gap_tol=gap_tol)
    return KernelModel(model.spec, model.support_inputs, model.alphas, lam, LossKind.HINGE, model.fit_info)


# ---------------------------------------------------------------------------
# 위험 / 목적 함수
# ---------------------------------------------------------------------------

def regularizer_norm(model: KernelModel) -> float:
    """‖f‖² = αᵀKα"""
    if not np.any(model.alphas):
        return 0.0
    k = gram(model.spec, model.support_inputs).values
    value = float(model.alphas @ k @ model.alphas)
    if value < -REGULARIZER_TOL:
        raise InvariantViolationError(f"αᵀKα 가 음수입니다: {value:.3e}")
    return max(value, 0.0)


def empirical_risk(predictions: np.ndarray, data: Dataset, loss: LossSpec) -> float:
    return float(np.mean(loss(data.labels, predictions)))


def regularized_risk(model: KernelModel, data: Dataset, loss: LossSpec, lam: float) -> float:
    """λ·‖f‖² + (1/M) Σ_m L(y^m, f(x^m))"""
    risk = empirical_risk(predict_many(model, data.inputs), data, loss)
    if lam == 0:
        return risk
    return lam * regularizer_norm(model) + risk


def svm_objective(model: KernelModel, data: Dataset, c_box: float) -> float:
    """(1/M) Σ hinge + ‖f‖²/(2·C·M) (상자 제약 SVM 목적 함수를 M·C 로 나눈 형태)"""
    risk = empirical_risk(predict_many(model, data.inputs), data, LossSpec.hinge())
    return risk + regularizer_norm(model) / (2.0 * c_box * data.size)


def objective(k: np.ndarray, labels: np.ndarray, alphas: np.ndarray, loss: LossSpec, lam: float) -> float:
    """J(α) = (1/M) Σ L(y, Kα) + λ αᵀKα (미리 계산한 Gram 행렬 위에서)"""
    k = np.asarray(k, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    decision = k @ alphas
    return float(np.mean(loss(labels, decision)) + lam * alphas @ decision)


# ---------------------------------------------------------------------------
# 최적 측정 연산자 / 특징 공간 표현
# ---------------------------------------------------------------------------

def optimal_measurement(model: KernelModel) -> HermitianOperator:
    """M_opt = Σ_m α_m ρ(x^m)"""
    states = [encode(model.spec, x).amplitudes for x in model.support_inputs]
    dimension = states[0].size
    entries = np.zeros((dimension, dimension), dtype=complex)
    for alpha, psi in zip(model.alphas, states):
        entries += alpha * np.outer(psi, psi.conj())
    return HermitianOperator(0.5 * (entries + entries.conj().T))


def feature_space_weights(model: KernelModel) -> np.ndarray:
    """w = Σ_m α_m φ_v(x^m) ∈ C^{D²}"""
    return np.sum([alpha * vectorize(model.spec, x).amplitudes
                   for alpha, x in zip(model.alphas, model.support_inputs)], axis=0)


def linear_predict(spec: EncodingSpec, weights: np.ndarray, x: PointLike) -> float:
    """Re⟨φ_v(x), w⟩"""
    return float(np.real(np.vdot(vectorize(spec, x).amplitudes, weights)))
