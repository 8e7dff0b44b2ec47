#!/usr/bin/env python3
"""
🎯 양자 커널 실험 도구 (qkern)

JSON 실험 설정 파일 하나를 받아 태스크를 실행하고
결과를 CSV/JSON 으로 저장합니다.

사용법:
    python main.py configs/gram_rotation.json
    python main.py configs/fourier_rx.json --output-dir results/fourier --verbose

종료 코드: 0 성공, 1 사용법 오류(설정/데이터셋), 2 계산 오류
"""

import argparse
import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import Config
from dataset_loader import load_dataset
from errors import ConfigError, QuantumKernelError
from feature_maps import DataPoint, EncodingSpec, Strategy
from fourier import coefficients, integer_spectrum_check, is_translation_invariant, series_value
from kernels import GRAM_PSD_TOL, cross_gram, gram, kernel, min_eigenvalue, sample_gram
from linalg_core import HermitianOperator
from training import (
    Dataset, LossKind, LossSpec, box_from_lambda, empirical_risk, fit_kernel_model,
    predict_many, regularized_risk, regularizer_norm, svm_objective,
)
from utils import ensure_directory_exists, logger, pairs_to_matrix, set_log_level, write_csv, write_json
from variational import (
    AnsatzGate, TrainingParams, VariationalModel, compare, default_observable,
    evaluate_many, parameter_count, reference_ansatz, train,
)

TASKS = ('kernel-matrix', 'fourier', 'train-kernel', 'train-variational', 'compare', 'landscape')
DATASET_TASKS = ('train-kernel', 'train-variational', 'compare')
LANDSCAPE_SNAP = 1e-12


@dataclass(frozen=True)
class ExperimentConfig:
    """JSON 실험 설정"""

    name: str
    task: str
    encoding: EncodingSpec
    dataset_path: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    inputs: Tuple[DataPoint, ...] = ()

    def get(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)

    @property
    def loss(self) -> LossSpec:
        return LossSpec(self.get('loss', LossKind.SQUARED_ERROR.value))

    @property
    def lam(self) -> float:
        return float(self.get('lambda', 0.0))

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        if not os.path.isfile(path):
            raise ConfigError(f"설정 파일이 없습니다: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                payload = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"설정 파일 JSON 파싱 실패: {e}", {'line': e.lineno, 'column': e.colno}) from None
        name = os.path.splitext(os.path.basename(path))[0]
        return cls.from_dict(payload, name, os.path.dirname(os.path.abspath(path)))

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], name: str = "experiment", base_dir: str = ".") -> "ExperimentConfig":
        if not isinstance(payload, dict):
            raise ConfigError("설정 파일 최상위는 JSON 객체여야 합니다.")
        task = payload.get('task')
        if task not in TASKS:
            raise ConfigError(f"알 수 없는 태스크: {task!r} (가능한 값: {', '.join(TASKS)})", {'key': 'task'})
        if 'encoding' not in payload:
            raise ConfigError("'encoding' 항목이 없습니다.", {'key': 'encoding'})
        try:
            encoding = EncodingSpec.from_json(payload['encoding'])
        except QuantumKernelError as e:
            raise ConfigError(f"인코딩 설정 오류: {e.message}", {'key': 'encoding', **e.details}) from None
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"인코딩 설정 오류: {e}", {'key': 'encoding'}) from None

        dataset_path = payload.get('dataset')
        if dataset_path is not None and not os.path.isabs(dataset_path):
            dataset_path = os.path.normpath(os.path.join(base_dir, dataset_path))

        try:
            inputs = tuple(DataPoint.from_json(x) for x in payload.get('inputs', []))
        except (QuantumKernelError, TypeError, ValueError) as e:
            raise ConfigError(f"'inputs' 항목이 올바르지 않습니다: {e}", {'key': 'inputs'}) from None

        params = {k: v for k, v in payload.items() if k not in ('task', 'encoding', 'dataset', 'inputs')}
        config = cls(name=name, task=task, encoding=encoding, dataset_path=dataset_path, params=params, inputs=inputs)
        config.validate()
        return config

    def validate(self) -> None:
        """태스크별 필수 항목과 수치 범위 검사"""
        if self.task in DATASET_TASKS and not self.dataset_path:
            raise ConfigError(f"{self.task} 태스크에는 'dataset' 이 필요합니다.", {'key': 'dataset'})
        if self.task == 'kernel-matrix' and not self.dataset_path and not self.inputs:
            raise ConfigError("kernel-matrix 태스크에는 'dataset' 또는 'inputs' 가 필요합니다.", {'key': 'dataset'})
        if self.task == 'fourier' and self.encoding.strategy is not Strategy.GENERAL_EVOLUTION:
            raise ConfigError("fourier 태스크는 GeneralEvolution 인코딩에만 사용할 수 있습니다.", {'key': 'encoding'})
        if self.task == 'landscape':
            if 'reference' not in self.params:
                raise ConfigError("landscape 태스크에는 'reference' 가 필요합니다.", {'key': 'reference'})
            grid = self.get('grid')
            if not isinstance(grid, dict) or 'ranges' not in grid or 'points' not in grid:
                raise ConfigError("landscape 태스크에는 'grid': {'ranges', 'points'} 가 필요합니다.", {'key': 'grid'})
            self._validate_grid(grid)

        def check(key: str, ok: Callable[[Any], bool], rule: str) -> None:
            if key in self.params:
                value = self.params[key]
                try:
                    valid = ok(value)
                except TypeError:
                    valid = False
                if not valid:
                    raise ConfigError(f"'{key}' 값이 올바르지 않습니다 ({rule}): {value!r}", {'key': key})

        def is_int(value: Any) -> bool:
            return isinstance(value, int) and not isinstance(value, bool)

        def is_number(value: Any) -> bool:
            return isinstance(value, (int, float)) and not isinstance(value, bool) and np.isfinite(value)

        check('lambda', lambda v: is_number(v) and v >= 0, "lambda ≥ 0")
        check('c_box', lambda v: is_number(v) and v > 0, "c_box > 0")
        check('lr', lambda v: is_number(v) and v > 0, "lr > 0")
        check('epochs', lambda v: is_int(v) and v >= 1, "epochs ≥ 1")
        check('shots', lambda v: is_int(v) and v >= 1, "shots ≥ 1")
        check('restarts', lambda v: is_int(v) and v >= 1, "restarts ≥ 1")
        check('pairs', lambda v: is_int(v) and v >= 1, "pairs ≥ 1")
        check('seed', lambda v: is_int(v) and v >= 0, "seed ≥ 0")
        check('record_timing', lambda v: isinstance(v, bool), "true/false")
        check('loss', lambda v: v in (LossKind.SQUARED_ERROR.value, LossKind.HINGE.value), "SquaredError 또는 Hinge")

    @staticmethod
    def _validate_grid(grid: Dict[str, Any]) -> None:
        """landscape 격자: 유한한 lo < hi 구간, 축마다 1 이상의 점 개수"""
        ranges = grid['ranges']
        if not isinstance(ranges, list) or not ranges:
            raise ConfigError("grid.ranges 는 비어 있지 않은 [lo, hi] 목록이어야 합니다.", {'key': 'grid'})
        for axis, bounds in enumerate(ranges):
            if (not isinstance(bounds, list) or len(bounds) != 2
                    or not all(isinstance(b, (int, float)) and not isinstance(b, bool) and np.isfinite(b) for b in bounds)
                    or not bounds[0] < bounds[1]):
                raise ConfigError(f"grid.ranges[{axis}] 는 유한한 [lo, hi] (lo < hi) 여야 합니다: {bounds!r}",
                                  {'key': 'grid', 'axis': axis})

        points = grid['points']
        counts = points if isinstance(points, list) else [points] * len(ranges)
        if len(counts) != len(ranges):
            raise ConfigError(f"grid.points 개수 {len(counts)} ≠ grid.ranges 개수 {len(ranges)}", {'key': 'grid'})
        for axis, count in enumerate(counts):
            if not isinstance(count, int) or isinstance(count, bool) or count < 1:
                raise ConfigError(f"grid.points[{axis}] 는 1 이상의 정수여야 합니다: {count!r}",
                                  {'key': 'grid', 'axis': axis})


class QuantumKernelExperiment:
    """태스크 실행기"""

    def __init__(self, config: ExperimentConfig, output_dir: str):
        logger.info(f"🎯 실험 초기화: {config.name} (task={config.task})")
        self.config = config
        self.output_dir = output_dir
        ensure_directory_exists(output_dir)
        self._handlers: Dict[str, Callable[[], List[str]]] = {
            'kernel-matrix': self._run_kernel_matrix,
            'fourier': self._run_fourier,
            'train-kernel': self._run_train_kernel,
            'train-variational': self._run_train_variational,
            'compare': self._run_compare,
            'landscape': self._run_landscape,
        }

    def run(self) -> List[str]:
        """태스크 실행 후 생성된 파일 경로 목록 반환"""
        logger.info(f"🚀 {self.config.task} 태스크 시작 → {self.output_dir}")
        logger.info("=" * 60)
        artifacts = self._handlers[self.config.task]()
        logger.info("=" * 60)
        logger.info(f"🎉 {self.config.task} 태스크 완료! 산출물 {len(artifacts)}개")
        for path in artifacts:
            logger.info(f"   - {path}")
        return artifacts

    def _path(self, filename: str) -> str:
        return os.path.join(self.output_dir, filename)

    def _load_dataset(self) -> Dataset:
        logger.info("📊 STEP 1: 데이터셋 로드")
        data = load_dataset(self.config.dataset_path)
        logger.info(f"✅ {data.size}개 샘플, 입력 차원 {data.input_dim}")
        logger.info("=" * 60)
        return data

    def _variational_template(self, data: Dataset) -> VariationalModel:
        """설정의 ansatz / observable (기본: R(θ1,θ2,θ3), 큐빗 0 의 σ_z)"""
        spec = self.config.encoding
        dimension = spec.state_dimension(data.input_dim)
        n_qubits = int(round(np.log2(dimension)))
        if 2 ** n_qubits != dimension:
            raise ConfigError(f"변분 모델에는 큐빗 인코딩이 필요합니다 (상태 차원 {dimension})", {'key': 'encoding'})
        try:
            ansatz = tuple(AnsatzGate.from_json(g) for g in self.config.get('ansatz', [])) or reference_ansatz()
            observable = (HermitianOperator(pairs_to_matrix(self.config.get('observable')))
                          if 'observable' in self.config.params else default_observable(n_qubits))
        except QuantumKernelError as e:
            raise ConfigError(f"ansatz/observable 설정 오류: {e.message}", {'key': 'ansatz'}) from None
        theta = np.zeros(parameter_count(ansatz))
        return VariationalModel(spec, theta, observable, ansatz)

    # ------------------------------------------------------------------

    def _run_kernel_matrix(self) -> List[str]:
        spec = self.config.encoding
        if self.config.dataset_path:
            inputs: Sequence[DataPoint] = self._load_dataset().inputs
        else:
            inputs = self.config.inputs
            logger.info(f"📊 STEP 1: 설정 파일의 입력 {len(inputs)}개 사용")
            logger.info("=" * 60)

        logger.info("🧮 STEP 2: Gram 행렬 계산")
        k = gram(spec, inputs)
        min_eig = min_eigenvalue(k)
        logger.info(f"✅ {k.size}x{k.size} Gram 행렬, 최소 고유값 {min_eig:.3e}")
        artifacts = [k.to_csv(self._path('gram.csv'))]

        report: Dict[str, Any] = {
            'task': self.config.task,
            'size': k.size,
            'ids': k.labels(),
            'values': k.values.tolist(),
            'min_eigenvalue': min_eig,
            'psd': min_eig >= -GRAM_PSD_TOL,
        }

        if 'shots' in self.config.params:
            logger.info("=" * 60)
            logger.info("🎲 STEP 3: 샷 기반 Gram 행렬 추정")
            shots, seed = int(self.config.get('shots')), int(self.config.get('seed', 0))
            sampled = sample_gram(spec, inputs, shots, seed)
            df = pd.DataFrame(sampled, columns=k.labels())
            df.insert(0, 'id', k.labels())
            artifacts.append(write_csv(self._path('sampled_gram.csv'), df))
            report.update({'shots': shots, 'seed': seed,
                           'max_sampling_error': float(np.max(np.abs(sampled - k.values)))})
            logger.info(f"✅ shots={shots}, 최대 오차 {report['max_sampling_error']:.3e}")

        artifacts.append(write_json(self._path('kernel-matrix.json'), report))
        return artifacts

    def _run_fourier(self) -> List[str]:
        spec = self.config.encoding
        logger.info("📈 STEP 1: 주파수 집합과 Fourier 계수 계산")
        spectrum = coefficients(spec)
        logger.info(f"✅ |Ω|={len(spectrum.frequencies)}, 계수 {len(spectrum.coefficients)}개")
        artifacts = [write_json(self._path('spectrum.json'), spectrum.to_json())]
        logger.info("=" * 60)

        logger.info("🔍 STEP 2: 급수 vs 시뮬레이션 비교")
        pairs, seed = int(self.config.get('pairs', 100)), int(self.config.get('seed', 0))
        rng = np.random.default_rng(seed)
        samples = rng.uniform(-np.pi, np.pi, size=(pairs, 2, spec.input_dim))
        errors, residues = [], []
        for x, x2 in samples:
            value = series_value(spectrum, x, x2)
            errors.append(abs(value.real - kernel(spec, x, x2)))
            residues.append(abs(value.imag))
        report = {
            'task': self.config.task,
            'input_dim': spectrum.input_dim,
            'frequency_count': len(spectrum.frequencies),
            'coefficient_count': len(spectrum.coefficients),
            'frequencies': [list(s) for s in spectrum.frequencies],
            'pairs': pairs,
            'seed': seed,
            'max_series_error': float(max(errors)),
            'max_imag_residue': float(max(residues)),
            'translation_invariant': is_translation_invariant(spectrum),
            'integer_spectrum': integer_spectrum_check(spectrum),
        }
        logger.info(f"✅ 최대 급수 오차 {report['max_series_error']:.3e}, 허수 잔차 {report['max_imag_residue']:.3e}")
        artifacts.append(write_json(self._path('fourier.json'), report))
        return artifacts

    def _run_train_kernel(self) -> List[str]:
        data = self._load_dataset()
        spec, loss, lam = self.config.encoding, self.config.loss, self.config.lam

        logger.info(f"🧠 STEP 2: 커널 모델 학습 (loss={loss.kind.value}, λ={lam})")
        model = fit_kernel_model(spec, data, loss, lam, self.config.get('c_box'))
        artifacts = [write_json(self._path('model.json'), model.to_json())]
        logger.info("=" * 60)

        logger.info("📏 STEP 3: 정규화된 위험 계산")
        predictions = predict_many(model, data.inputs)
        report: Dict[str, Any] = {
            'task': self.config.task,
            'loss': loss.kind.value,
            'lambda': lam,
            'size': data.size,
            'empirical_risk': empirical_risk(predictions, data, loss),
            'regularizer_norm': regularizer_norm(model),
            'regularized_risk': regularized_risk(model, data, loss, lam),
            'solver': model.fit_info.get('solver'),
        }
        if loss.kind is LossKind.HINGE:
            c_box = box_from_lambda(lam, data.size, self.config.get('c_box'))
            report.update({
                'c_box': c_box,
                'svm_objective': svm_objective(model, data, c_box),
                'duality_gap': model.fit_info['gap'],
                'passes': model.fit_info['passes'],
                'support_vectors': int(sum(model.fit_info['support'])),
            })
        logger.info(f"✅ 정규화된 위험 {report['regularized_risk']:.6g}")
        artifacts.append(write_json(self._path('train-kernel.json'), report))
        return artifacts

    def _run_train_variational(self) -> List[str]:
        data = self._load_dataset()
        loss, lam = self.config.loss, self.config.lam
        lr, epochs, seed = float(self.config.get('lr', 0.1)), int(self.config.get('epochs', 100)), int(self.config.get('seed', 0))

        logger.info(f"🧠 STEP 2: 변분 모델 학습 (lr={lr}, epochs={epochs}, seed={seed})")
        model = train(self._variational_template(data), data, loss, lam, lr, epochs, seed)
        artifacts = [write_json(self._path('model.json'), model.to_json())]
        logger.info("=" * 60)

        logger.info("📏 STEP 3: 학습 결과 정리")
        predictions = evaluate_many(model, data.inputs)
        report = {
            'task': self.config.task,
            'loss': loss.kind.value,
            'lambda': lam,
            'lr': lr,
            'epochs': epochs,
            'seed': seed,
            'size': data.size,
            'n_params': int(model.theta.size),
            'initial_risk': model.trajectory[0],
            'final_risk': empirical_risk(predictions, data, loss),
            'circuit_evals': model.fit_info['circuit_evals'],
        }
        logger.info(f"✅ 경험적 위험 {report['initial_risk']:.6g} → {report['final_risk']:.6g}")
        artifacts.append(write_json(self._path('train-variational.json'), report))
        return artifacts

    def _run_compare(self) -> List[str]:
        data = self._load_dataset()
        params = TrainingParams(
            lr=float(self.config.get('lr', 0.1)),
            epochs=int(self.config.get('epochs', 100)),
            restarts=int(self.config.get('restarts', Config.VARIATIONAL_RESTARTS)),
            seed=int(self.config.get('seed', 0)),
            c_box=self.config.get('c_box'),
        )

        logger.info(f"⚖️ STEP 2: 커널 학습 vs 변분 학습 비교 (재시작 {params.restarts}회)")
        report = compare(self.config.encoding, self._variational_template(data), data,
                         self.config.loss, self.config.lam, params)
        payload = report.to_dict(record_timing=bool(self.config.get('record_timing', False)))
        payload.update({'task': self.config.task, 'kernel_dominates': report.kernel_dominates})
        logger.info(f"✅ 커널 {report.kernel_risk:.6g} / 변분 {report.variational_risk:.6g}")
        return [write_json(self._path('compare.json'), payload)]

    def _run_landscape(self) -> List[str]:
        spec = self.config.encoding
        try:
            reference = DataPoint.from_json(self.config.get('reference'))
        except (QuantumKernelError, TypeError, ValueError) as e:
            raise ConfigError(f"'reference' 가 올바르지 않습니다: {e}", {'key': 'reference'}) from None
        grid = self.config.get('grid')
        ranges = [(float(lo), float(hi)) for lo, hi in grid['ranges']]
        if len(ranges) != reference.dimension:
            raise ConfigError(f"grid.ranges 개수 {len(ranges)} ≠ reference 차원 {reference.dimension}", {'key': 'grid'})
        counts = grid['points'] if isinstance(grid['points'], list) else [grid['points']] * len(ranges)
        normalize = bool(grid.get('normalize', False))

        logger.info("🗺️ STEP 1: 격자 생성")
        # 주기 격자: lo 포함, hi 제외
        axes = []
        for (lo, hi), count in zip(ranges, counts):
            mesh = np.linspace(lo, hi, int(count), endpoint=False)
            axes.append(np.where(np.abs(mesh) < LANDSCAPE_SNAP, 0.0, mesh))
        points = [np.array(p) for p in itertools.product(*axes)]
        if normalize:
            points = [p / np.linalg.norm(p) for p in points if np.linalg.norm(p) > 0]
        if not points:
            raise ConfigError("정규화할 수 있는 격자점이 없습니다 (모든 점이 원점).", {'key': 'grid'})
        logger.info(f"✅ 격자점 {len(points)}개")
        logger.info("=" * 60)

        logger.info("🧮 STEP 2: κ(x̃, x) 계산")
        values = cross_gram(spec, [reference], points)[0]
        columns: Dict[str, Any] = {f"x_{k + 1}": [p[k] for p in points] for k in range(len(ranges))}
        columns['kappa'] = values
        artifacts = [write_csv(self._path('landscape.csv'), pd.DataFrame(columns))]

        report = {
            'task': self.config.task,
            'reference': reference.to_json(),
            'ranges': [list(r) for r in ranges],
            'points_per_axis': [int(c) for c in counts],
            'normalize': normalize,
            'rows': len(points),
            'min_kappa': float(np.min(values)),
            'max_kappa': float(np.max(values)),
        }
        logger.info(f"✅ κ 범위 [{report['min_kappa']:.6g}, {report['max_kappa']:.6g}]")
        artifacts.append(write_json(self._path('landscape.json'), report))
        return artifacts


def _error_payload(error: QuantumKernelError, task: Optional[str]) -> Dict[str, Any]:
    payload = error.to_dict()
    payload['task'] = task
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qkern',
        description='양자 커널 실험 도구',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
사용 예시:
  qkern configs/gram_rotation.json                       # 결과는 results/gram_rotation/
  qkern configs/fourier_rx.json --output-dir out/fourier  # 출력 디렉토리 지정
  qkern configs/compare_squared.json --verbose            # DEBUG 로그
        """
    )
    parser.add_argument('config', type=str, help='실험 설정 JSON 파일')
    parser.add_argument('--output-dir', '-o', type=str, default=None,
                        help=f'산출물 디렉토리 (기본값: {Config.OUTPUT_DIR}/<설정 파일 이름>)')
    parser.add_argument('--verbose', '-v', action='store_true', help='DEBUG 로그 출력')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """메인 실행 함수 (종료 코드 반환)"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1

    if args.verbose:
        set_log_level('DEBUG')

    # 설정 유효성 검사
    config_status = Config.validate_config()
    if not config_status['is_valid']:
        logger.error("❌ 환경 설정 오류:")
        for error in config_status['errors']:
            logger.error(f"   - {error}")
        return 1

    name = os.path.splitext(os.path.basename(args.config))[0]
    output_dir = args.output_dir or os.path.join(Config.OUTPUT_DIR, name)
    task = None

    try:
        config = ExperimentConfig.from_file(args.config)
        task = config.task
        QuantumKernelExperiment(config, output_dir).run()
        return 0

    except QuantumKernelError as e:
        logger.error(f"❌ {e.code}: {e.message}")
        ensure_directory_exists(output_dir)
        write_json(os.path.join(output_dir, 'error.json'), _error_payload(e, task))
        return e.exit_status
    except KeyboardInterrupt:
        logger.info("👋 사용자에 의해 중단되었습니다.")
        return 1
    except Exception as e:
        logger.error(f"❌ 예상치 못한 오류가 발생했습니다: {e}")
        ensure_directory_exists(output_dir)
        payload = {'error': 'internal_error', 'message': str(e), 'details': {'type': type(e).__name__}, 'task': task}
        write_json(os.path.join(output_dir, 'error.json'), payload)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
