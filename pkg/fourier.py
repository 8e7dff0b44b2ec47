"""
양자 커널의 Fourier 표현

GeneralEvolution 인코딩의 커널을
    κ(x, x′) = Σ_{s,t ∈ Ω} c_st e^{−i s·x} e^{i t·x′}
로 전개한다. Ω 는 생성자 고유값 차이 벡터의 집합이다.

계수 계산 방식:
    1. 각 생성자를 대각화하고 V, V† 를 인터리버에 흡수한다 (absorb_eigenbases).
    2. 고유값 경로 ω = (λ_{j1}, ..., λ_{jN}) 별 최종 상태 성분 u(ω) 를 구한다 (path_amplitudes).
    3. Q[ω, ω′] = ⟨u(ω′)|u(ω)⟩ 이면 c_st = Σ_{ω1−ω3=s, ω2−ω4=t} Q[ω1,ω2] conj(Q[ω3,ω4]).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import (
    DimensionMismatchError, EnumerationLimitError, InvariantViolationError,
    NumericalResidueError, UnsupportedStrategyError,
)
from feature_maps import EncodingSpec, PointLike, Strategy, as_point
from linalg_core import HermitianOperator, StateVector, Unitary
from utils import complex_to_pair, logger, pair_to_complex

FREQUENCY_DECIMALS = 9
CONJUGATE_SYMMETRY_TOL = 1e-10
SERIES_IMAG_TOL = 1e-9
INTEGER_TOL = 1e-9

Frequency = Tuple[float, ...]


def _round_frequency(values: Sequence[float]) -> Frequency:
    # +0.0 로 -0.0 을 정규화
    return tuple(float(v) + 0.0 for v in np.round(np.asarray(values, dtype=float), FREQUENCY_DECIMALS))


@dataclass(frozen=True)
class FrequencySpectrum:
    """주파수 집합 Ω 와 계수 c_st"""

    frequencies: Tuple[Frequency, ...]
    coefficients: Dict[Tuple[Frequency, Frequency], complex]
    input_dim: int

    def __post_init__(self):
        frequencies = tuple(sorted({_round_frequency(s) for s in self.frequencies}))
        for s in frequencies:
            if len(s) != self.input_dim:
                raise DimensionMismatchError(f"주파수 벡터 길이 {len(s)} ≠ N={self.input_dim}")
        known = set(frequencies)
        for s in frequencies:
            if _round_frequency(-np.asarray(s)) not in known:
                raise InvariantViolationError(f"Ω 가 부호 반전에 닫혀 있지 않습니다: {s}")

        coefficients = {
            (_round_frequency(s), _round_frequency(t)): complex(c) for (s, t), c in self.coefficients.items()
        }
        for (s, t), c in coefficients.items():
            if s not in known or t not in known:
                raise InvariantViolationError(f"계수의 주파수가 Ω 에 없습니다: s={s}, t={t}")
            mirror = coefficients.get((_round_frequency(-np.asarray(s)), _round_frequency(-np.asarray(t))), 0.0)
            if abs(c - np.conj(mirror)) > CONJUGATE_SYMMETRY_TOL:
                raise InvariantViolationError(
                    f"켤레 대칭 c_st = conj(c_(-s,-t)) 위반: s={s}, t={t}, 차이 {abs(c - np.conj(mirror)):.3e}"
                )

        object.__setattr__(self, 'frequencies', frequencies)
        object.__setattr__(self, 'coefficients', coefficients)

    def coefficient(self, s: Sequence[float], t: Sequence[float]) -> complex:
        return self.coefficients.get((_round_frequency(s), _round_frequency(t)), 0j)

    def sorted_items(self) -> List[Tuple[Frequency, Frequency, complex]]:
        return [(s, t, self.coefficients[(s, t)]) for s, t in sorted(self.coefficients)]

    def to_json(self) -> Dict[str, Any]:
        return {
            'input_dim': self.input_dim,
            'frequencies': [list(s) for s in self.frequencies],
            'coefficients': [
                {'s': list(s), 't': list(t), 'c': complex_to_pair(c)} for s, t, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "FrequencySpectrum":
        return cls(
            frequencies=tuple(tuple(s) for s in payload['frequencies']),
            coefficients={
                (tuple(entry['s']), tuple(entry['t'])): pair_to_complex(entry['c'])
                for entry in payload['coefficients']
            },
            input_dim=int(payload['input_dim']),
        )


# ---------------------------------------------------------------------------


def _require_general_evolution(spec: EncodingSpec) -> None:
    if spec.strategy is not Strategy.GENERAL_EVOLUTION:
        raise UnsupportedStrategyError(
            f"Fourier 분석은 GeneralEvolution 인코딩에만 적용됩니다: {spec.strategy.value}"
        )


def _check_enumeration(spec: EncodingSpec, cap: Optional[int]) -> None:
    cap = Config.FOURIER_ENUMERATION_CAP if cap is None else cap
    # 특성별 (j, k) 고유값 쌍 수의 곱
    size = 1
    for g in spec.generators:
        size *= g.dimension ** 2
        if size > cap:
            raise EnumerationLimitError(
                f"열거 크기가 상한 {cap} 을 넘습니다 (d^2N > {cap})",
                {'cap': cap, 'dimensions': [g.dimension for g in spec.generators]},
            )


def _differences(eigenvalues: np.ndarray) -> List[float]:
    # path_amplitudes 와 같은 순서로 반올림: 고유값 먼저, 차이는 다시
    rounded = _round_frequency(eigenvalues)
    return sorted({_round_frequency([a - b])[0] for a in rounded for b in rounded})


def frequency_set(spec: EncodingSpec, cap: Optional[int] = None) -> List[Frequency]:
    """Ω = {(λ_{j1}−λ_{k1}, ..., λ_{jN}−λ_{kN})} (사전식 정렬)"""
    _require_general_evolution(spec)
    _check_enumeration(spec, cap)
    per_feature = [_differences(eigenvalues) for eigenvalues, _ in spec.eigensystems]
    grids = np.meshgrid(*per_feature, indexing='ij')
    vectors = np.stack([g.reshape(-1) for g in grids], axis=1)
    return sorted({_round_frequency(v) for v in vectors})


def absorb_eigenbases(spec: EncodingSpec) -> EncodingSpec:
    """생성자를 대각 행렬 Λ_i 로 바꾸고 V_i, V_i† 를 인터리버에 흡수한 동등한 인코딩

    W̃^(1) = V_1† W^(1), W̃^(i) = V_i† W^(i) V_{i−1}, W̃^(N+1) = W^(N+1) V_N
    """
    _require_general_evolution(spec)
    eigensystems = spec.eigensystems
    n = spec.input_dim

    interleavers = [eigensystems[0][1].dagger() @ spec.interleavers[0]]
    for i in range(1, n):
        interleavers.append(eigensystems[i][1].dagger() @ spec.interleavers[i] @ eigensystems[i - 1][1])
    interleavers.append(spec.interleavers[n] @ eigensystems[n - 1][1])

    generators = [HermitianOperator(np.diag(eigenvalues).astype(complex)) for eigenvalues, _ in eigensystems]
    return EncodingSpec.general_evolution(spec.n_qubits, n, generators, interleavers)


def path_amplitudes(spec: EncodingSpec) -> Tuple[List[Frequency], np.ndarray]:
    """주파수 경로별 최종 상태 성분

    Returns:
        (경로 주파수 ω 목록, u(ω) 를 행으로 갖는 (P, D) 복소 배열)
        |φ(x)⟩ = W^(N+1) Σ_ω e^{−iω·x} u(ω) 이며 마지막 인터리버는 적용하지 않는다.
    """
    _require_general_evolution(spec)
    absorbed = absorb_eigenbases(spec)
    dimension = 2 ** spec.n_qubits
    initial = absorbed.interleavers[0].entries @ StateVector.basis(0, dimension).amplitudes

    paths: Dict[Frequency, np.ndarray] = {(): initial}
    for i in range(spec.input_dim):
        eigenvalues = np.real(np.diag(absorbed.generators[i].entries))
        if i > 0:
            w = absorbed.interleavers[i].entries
            paths = {omega: w @ vector for omega, vector in paths.items()}
        split: Dict[Frequency, np.ndarray] = {}
        for omega, vector in paths.items():
            for k, lam in enumerate(eigenvalues):
                if vector[k] == 0:
                    continue
                key = omega + _round_frequency([lam])
                component = split.setdefault(key, np.zeros(dimension, dtype=complex))
                component[k] += vector[k]
        paths = split

    omegas = sorted(paths)
    return omegas, np.array([paths[omega] for omega in omegas])


def _difference_index(omegas: List[Frequency]) -> Tuple[List[Frequency], np.ndarray]:
    """S[a][c] = index of (ω_a − ω_c)"""
    vectors = np.array(omegas, dtype=float)
    keys: Dict[Frequency, int] = {}
    index = np.zeros((len(omegas), len(omegas)), dtype=np.int64)
    for a in range(len(omegas)):
        for c in range(len(omegas)):
            key = _round_frequency(vectors[a] - vectors[c])
            index[a, c] = keys.setdefault(key, len(keys))
    return list(keys), index


def coefficients(spec: EncodingSpec, cap: Optional[int] = None, workers: Optional[int] = None) -> FrequencySpectrum:
    """c_st 계산 → FrequencySpectrum"""
    _require_general_evolution(spec)
    _check_enumeration(spec, cap)
    workers = Config.FOURIER_WORKERS if workers is None else workers

    omegas, u = path_amplitudes(spec)
    # Q[a, b] = ⟨u_b|u_a⟩
    q = u @ u.conj().T
    q_conj = q.conj()
    differences, s_index = _difference_index(omegas)
    flat_index = s_index.reshape(-1)
    n_diff = len(differences)

    def row(s: int) -> Dict[Tuple[Frequency, Frequency], complex]:
        a_idx, c_idx = np.nonzero(s_index == s)
        # R_s[b, d] = Σ_{(a,c): ω_a−ω_c=s} Q[a,b] conj(Q[c,d])
        r = q[a_idx, :].T @ q_conj[c_idx, :]
        flat = r.reshape(-1)
        dense = (np.bincount(flat_index, weights=flat.real, minlength=n_diff)
                 + 1j * np.bincount(flat_index, weights=flat.imag, minlength=n_diff))
        # 정확히 0 인 계수는 저장하지 않는다 (coefficient() 가 0 을 돌려준다)
        return {(differences[s], differences[t]): complex(dense[t]) for t in np.flatnonzero(dense)}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(row, range(n_diff)))
    else:
        rows = [row(s) for s in range(n_diff)]

    values: Dict[Tuple[Frequency, Frequency], complex] = {}
    for entries in rows:
        values.update(entries)
    logger.debug(f"Fourier 계수 계산 완료: 경로 {len(omegas)}개, 차이 주파수 {n_diff}개")
    return FrequencySpectrum(
        frequencies=tuple(frequency_set(spec, cap)),
        coefficients=values,
        input_dim=spec.input_dim,
    )


def series_value(spectrum: FrequencySpectrum, x: PointLike, x2: PointLike) -> complex:
    """허수부를 버리기 전의 급수 값"""
    x, x2 = as_point(x), as_point(x2)
    if x.dimension != spectrum.input_dim or x2.dimension != spectrum.input_dim:
        raise DimensionMismatchError(
            f"입력 차원 ({x.dimension}, {x2.dimension}) ≠ 스펙트럼 차원 {spectrum.input_dim}"
        )
    items = spectrum.sorted_items()
    if not items:
        return 0j
    s = np.array([item[0] for item in items], dtype=float)
    t = np.array([item[1] for item in items], dtype=float)
    c = np.array([item[2] for item in items], dtype=complex)
    return complex(np.sum(c * np.exp(-1j * (s @ x.values.real)) * np.exp(1j * (t @ x2.values.real))))


def evaluate_series(spectrum: FrequencySpectrum, x: PointLike, x2: PointLike) -> float:
    """Σ_{s,t} c_st e^{−i s·x} e^{i t·x′}"""
    value = series_value(spectrum, x, x2)
    if abs(value.imag) > SERIES_IMAG_TOL:
        raise NumericalResidueError(
            f"Fourier 급수 값의 허수부 잔차가 큽니다: {value.imag:.3e}", {'imag': float(value.imag)}
        )
    return float(value.real)


def is_translation_invariant(spectrum: FrequencySpectrum, tol: float = 1e-10) -> bool:
    """s ≠ t 인 모든 계수의 크기가 tol 이하인지 (κ 가 x − x′ 에만 의존)"""
    return all(abs(c) <= tol for (s, t), c in spectrum.coefficients.items() if s != t)


def integer_spectrum_check(spectrum: FrequencySpectrum) -> bool:
    """모든 주파수 성분이 정수인지 (2π 주기 Fourier 급수)"""
    if not spectrum.frequencies:
        return True
    values = np.array(spectrum.frequencies, dtype=float)
    return bool(np.all(np.abs(values - np.round(values)) <= INTEGER_TOL))
