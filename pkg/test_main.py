"""qkern CLI / 실험 설정 / 데이터셋 로더 테스트"""

import glob
import importlib
import json
import logging
import os

import numpy as np
import pandas as pd
import pytest
from jsonschema import Draft202012Validator

import main
import utils
from check_determinism import check_determinism
from config import Config
from conftest import ROOT
from dataset_loader import load_dataset, save_dataset
from errors import ConfigError, ConvergenceError, DatasetError
from main import ExperimentConfig
from reproduce_all import reproduce_configs
from training import Dataset, fit_svm
from utils import dumps_json, format_float

CONFIGS = sorted(glob.glob(os.path.join(ROOT, 'configs', '*.json')))

REPORT_SCHEMAS = {
    'kernel-matrix.json': 'kernel-matrix',
    'spectrum.json': 'spectrum',
    'fourier.json': 'fourier',
    'train-kernel.json': 'train-kernel',
    'train-variational.json': 'train-variational',
    'compare.json': 'compare',
    'landscape.json': 'landscape',
    'error.json': 'error',
}

ROTATION = {"strategy": "Rotation", "params": {"axis": "X", "convention": "gate"}}


def _config_name(path):
    return os.path.splitext(os.path.basename(path))[0]


def _read_json(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _validate(schema_dir, schema_name, payload):
    schema = _read_json(os.path.join(schema_dir, f"{schema_name}.schema.json"))
    Draft202012Validator.check_schema(schema)
    errors = sorted(Draft202012Validator(schema).iter_errors(payload), key=str)
    assert not errors, [e.message for e in errors]


def _write_config(directory, payload, name='experiment.json'):
    path = os.path.join(str(directory), name)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f)
    return path


def _write_text(directory, name, text):
    path = os.path.join(str(directory), name)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    return path


def _significant_digits(text):
    digits = text.lstrip('-').split('e')[0].replace('.', '')
    return len(digits) if set(digits) == {'0'} else len(digits.lstrip('0'))


@pytest.fixture(scope='module')
def results(tmp_path_factory):
    """설정 파일 전체를 한 번씩 실행 (이름 → (종료 코드, 산출물 디렉토리))"""
    root = tmp_path_factory.mktemp('results')
    outcomes = {}
    for path in CONFIGS:
        output_dir = str(root / _config_name(path))
        outcomes[_config_name(path)] = (main.main([path, '--output-dir', output_dir]), output_dir)
    return outcomes


class TestShippedConfigs:

    def test_json_floats_have_seventeen_digits(self, results):
        literals = []
        for _, output_dir in results.values():
            for name in sorted(os.listdir(output_dir)):
                if name.endswith('.json'):
                    with open(os.path.join(output_dir, name), 'r', encoding='utf-8') as f:
                        json.load(f, parse_float=lambda text: literals.append(text) or float(text))
        assert literals
        for text in literals:
            assert _significant_digits(text) == 17, text

    @pytest.mark.parametrize("config_path", CONFIGS, ids=_config_name)
    def test_runs_and_matches_schemas(self, results, schema_dir, config_path):
        status, output_dir = results[_config_name(config_path)]
        assert status == 0
        produced = sorted(os.listdir(output_dir))
        assert 'error.json' not in produced
        for name in produced:
            if name == 'model.json':
                task = _read_json(config_path)['task']
                schema = 'kernel-model' if task == 'train-kernel' else 'variational-model'
                _validate(schema_dir, schema, _read_json(os.path.join(output_dir, name)))
            elif name in REPORT_SCHEMAS:
                _validate(schema_dir, REPORT_SCHEMAS[name], _read_json(os.path.join(output_dir, name)))

    def test_kernel_matrix(self, results):
        _, output_dir = results['gram_rotation']
        report = _read_json(os.path.join(output_dir, 'kernel-matrix.json'))
        expected = [[1, 0.5, 0], [0.5, 1, 0.5], [0, 0.5, 1]]
        np.testing.assert_allclose(report['values'], expected, atol=1e-12)
        assert report['psd'] is True
        assert report['shots'] == 1000
        df = pd.read_csv(os.path.join(output_dir, 'gram.csv'))
        assert list(df.columns) == ['id', 'x0', 'x1', 'x2']
        sampled = pd.read_csv(os.path.join(output_dir, 'sampled_gram.csv'))
        assert sampled[['x0', 'x1', 'x2']].to_numpy().diagonal().tolist() == [1.0, 1.0, 1.0]

    @pytest.mark.parametrize("name", ['fourier_rx', 'fourier_two_qubit'])
    def test_fourier_series_error(self, results, name):
        _, output_dir = results[name]
        report = _read_json(os.path.join(output_dir, 'fourier.json'))
        assert report['max_series_error'] <= 1e-8
        assert report['max_imag_residue'] <= 1e-9
        assert report['integer_spectrum'] is True

    def test_fourier_rx_spectrum(self, results):
        _, output_dir = results['fourier_rx']
        report = _read_json(os.path.join(output_dir, 'fourier.json'))
        assert report['frequencies'] == [[-1.0], [0.0], [1.0]]
        assert report['translation_invariant'] is True

    def test_train_kernel_two_point(self, results):
        _, output_dir = results['krr_two_point']
        report = _read_json(os.path.join(output_dir, 'train-kernel.json'))
        assert report['regularized_risk'] == pytest.approx(0.0, abs=1e-20)
        assert report['regularizer_norm'] == pytest.approx(2.0, abs=1e-10)
        model = _read_json(os.path.join(output_dir, 'model.json'))
        np.testing.assert_allclose(model['alphas'], [1.0, -1.0], atol=1e-12)

    def test_svm_two_point(self, results):
        _, output_dir = results['svm_two_point']
        report = _read_json(os.path.join(output_dir, 'train-kernel.json'))
        assert report['c_box'] == 10.0
        assert report['duality_gap'] <= 1e-8
        assert report['support_vectors'] == 2
        assert report['empirical_risk'] == pytest.approx(0.0, abs=1e-6)

    def test_train_variational(self, results):
        _, output_dir = results['variational_reference']
        report = _read_json(os.path.join(output_dir, 'train-variational.json'))
        assert report['n_params'] == 3
        assert report['final_risk'] <= report['initial_risk']
        model = _read_json(os.path.join(output_dir, 'model.json'))
        assert len(model['trajectory']) == report['epochs'] + 1

    @pytest.mark.parametrize("name", ['compare_squared', 'compare_hinge'])
    def test_compare(self, results, name):
        _, output_dir = results[name]
        report = _read_json(os.path.join(output_dir, 'compare.json'))
        assert report['kernel_dominates'] is True
        assert report['kernel']['seconds'] is None
        assert report['kernel']['circuit_evals'] == 12 * 13 // 2
        assert report['variational']['circuit_evals'] == 50 * 12 * 7
        assert len(report['variational']['restart_risks']) == 10

    @pytest.mark.parametrize("name", [
        'landscape_rotation', 'landscape_coherent', 'landscape_amplitude', 'landscape_repeated_amplitude',
    ])
    def test_landscape_peak_at_reference(self, results, name):
        _, output_dir = results[name]
        df = pd.read_csv(os.path.join(output_dir, 'landscape.csv'))
        assert df['kappa'].max() == pytest.approx(1.0, abs=1e-10)
        assert df['kappa'].min() >= -1e-12

    def test_landscape_rotation_origin(self, results):
        _, output_dir = results['landscape_rotation']
        df = pd.read_csv(os.path.join(output_dir, 'landscape.csv'))
        assert list(df.columns) == ['x_1', 'x_2', 'kappa']
        assert len(df) == 50 * 50
        origin = df[(df['x_1'] == 0.0) & (df['x_2'] == 0.0)]
        assert len(origin) == 1
        assert origin['kappa'].iloc[0] == pytest.approx(1.0, abs=1e-12)

    def test_landscape_basis_is_delta(self, results):
        _, output_dir = results['landscape_basis']
        df = pd.read_csv(os.path.join(output_dir, 'landscape.csv'))
        assert len(df) == 4
        for _, row in df.iterrows():
            expected = 1.0 if (row['x_1'], row['x_2']) == (0.0, 0.0) else 0.0
            assert row['kappa'] == pytest.approx(expected, abs=1e-12)

    def test_landscape_normalized_points(self, results):
        _, output_dir = results['landscape_amplitude']
        df = pd.read_csv(os.path.join(output_dir, 'landscape.csv'))
        norms = np.hypot(df['x_1'], df['x_2'])
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)
        report = _read_json(os.path.join(output_dir, 'landscape.json'))
        assert report['rows'] == len(df) == 50 * 50 - 1


class TestDeterminism:

    @pytest.mark.parametrize("name", ['gram_rotation', 'fourier_two_qubit', 'compare_hinge'])
    def test_artifacts_are_identical(self, name):
        assert check_determinism(os.path.join(ROOT, 'configs', f"{name}.json")) == []

    def test_reproduce_configs(self, tmp_path):
        failed = reproduce_configs([os.path.join(ROOT, 'configs', 'krr_two_point.json')], str(tmp_path))
        assert failed == []
        assert os.path.isfile(tmp_path / 'krr_two_point' / 'train-kernel.json')


class TestExitCodes:

    def test_help(self):
        assert main.main(['--help']) == 0

    def test_missing_argument(self):
        assert main.main([]) == 1

    def test_missing_config_file(self, tmp_path, schema_dir):
        output_dir = str(tmp_path / 'out')
        assert main.main([str(tmp_path / 'nope.json'), '--output-dir', output_dir]) == 1
        error = _read_json(os.path.join(output_dir, 'error.json'))
        _validate(schema_dir, 'error', error)
        assert error['error'] == 'config_error'
        assert error['task'] is None

    def test_missing_dataset(self, tmp_path, schema_dir):
        config = _write_config(tmp_path, {
            'task': 'train-kernel', 'encoding': ROTATION, 'dataset': 'missing.csv',
        })
        output_dir = str(tmp_path / 'out')
        assert main.main([config, '--output-dir', output_dir]) == 1
        error = _read_json(os.path.join(output_dir, 'error.json'))
        _validate(schema_dir, 'error', error)
        assert error['error'] == 'dataset_error'
        assert error['task'] == 'train-kernel'

    def test_computation_error(self, tmp_path, schema_dir):
        config = _write_config(tmp_path, {
            'task': 'kernel-matrix',
            'encoding': {'strategy': 'Coherent', 'params': {'cutoff': 3}},
            'inputs': [[2.0], [0.0]],
        })
        output_dir = str(tmp_path / 'out')
        assert main.main([config, '--output-dir', output_dir]) == 2
        error = _read_json(os.path.join(output_dir, 'error.json'))
        _validate(schema_dir, 'error', error)
        assert error['error'] == 'truncation_error'

    def test_non_binary_svm_labels(self, tmp_path):
        _write_text(tmp_path, 'data.csv', "x_1,y\n0.0,1.0\n1.0,0.5\n")
        config = _write_config(tmp_path, {
            'task': 'train-kernel', 'encoding': ROTATION, 'dataset': 'data.csv', 'loss': 'Hinge',
        })
        output_dir = str(tmp_path / 'out')
        assert main.main([config, '--output-dir', output_dir]) == 2
        assert _read_json(os.path.join(output_dir, 'error.json'))['error'] == 'malformed_input'

    def test_fourier_without_general_evolution(self, tmp_path):
        config = _write_config(tmp_path, {'task': 'fourier', 'encoding': ROTATION})
        output_dir = str(tmp_path / 'out')
        assert main.main([config, '--output-dir', output_dir]) == 1

    def test_empty_landscape_grid_is_usage_error(self, tmp_path, schema_dir):
        config = _write_config(tmp_path, {
            'task': 'landscape', 'encoding': ROTATION, 'reference': [0.0],
            'grid': {'ranges': [[-1.0, 1.0]], 'points': 0},
        })
        output_dir = str(tmp_path / 'out')
        assert main.main([config, '--output-dir', output_dir]) == 1
        error = _read_json(os.path.join(output_dir, 'error.json'))
        _validate(schema_dir, 'error', error)
        assert error['error'] == 'config_error'


class TestExperimentConfig:

    def test_dataset_is_relative_to_config(self, config_dir):
        config = ExperimentConfig.from_file(os.path.join(config_dir, 'krr_two_point.json'))
        assert config.dataset_path == os.path.join(ROOT, 'data', 'two_point.csv')
        assert config.lam == 0.0
        assert config.loss.kind.value == 'SquaredError'

    def test_unknown_task(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'task': 'plot', 'encoding': ROTATION})

    def test_missing_encoding(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'task': 'kernel-matrix', 'inputs': [[0.0]]})

    def test_bad_encoding_is_config_error(self):
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.from_dict({'task': 'kernel-matrix', 'encoding': {'strategy': 'Squeezed'}, 'inputs': [[0.0]]})
        assert excinfo.value.details['key'] == 'encoding'

    def test_invalid_json(self, tmp_path):
        path = _write_text(tmp_path, 'broken.json', '{"task": ')
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(path)

    @pytest.mark.parametrize("key, value", [
        ('lambda', -0.5), ('c_box', 0), ('lr', 0.0), ('epochs', 0), ('epochs', 1.5),
        ('shots', 0), ('restarts', 0), ('seed', 'x'), ('seed', -1), ('record_timing', 'yes'), ('loss', 'Logistic'),
    ])
    def test_out_of_range_values(self, key, value):
        payload = {'task': 'train-kernel', 'encoding': ROTATION, 'dataset': 'data.csv', key: value}
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.from_dict(payload)
        assert excinfo.value.details['key'] == key

    def test_kernel_matrix_needs_inputs(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'task': 'kernel-matrix', 'encoding': ROTATION})

    def test_landscape_needs_grid(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'task': 'landscape', 'encoding': ROTATION, 'reference': [0.0]})

    @pytest.mark.parametrize("grid", [
        {'ranges': [[-1.0, 1.0]], 'points': 0},
        {'ranges': [[-1.0, 1.0], [-1.0, 1.0]], 'points': [10]},
        {'ranges': [[-1.0, 1.0]], 'points': [2.5]},
        {'ranges': [[1.0, -1.0]], 'points': 10},
        {'ranges': [], 'points': 10},
    ])
    def test_invalid_landscape_grid(self, grid):
        payload = {'task': 'landscape', 'encoding': ROTATION, 'reference': [0.0], 'grid': grid}
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.from_dict(payload)
        assert excinfo.value.details['key'] == 'grid'


class TestDatasetLoader:

    def test_loads_two_point(self):
        data = load_dataset(os.path.join(ROOT, 'data', 'two_point.csv'))
        assert data.size == 2
        assert data.labels.tolist() == [1.0, -1.0]

    def test_ragged_row(self, tmp_path):
        path = _write_text(tmp_path, 'ragged.csv', "x_1,y\n0.0,1.0\n0.5,1.0,3.0\n")
        with pytest.raises(DatasetError) as excinfo:
            load_dataset(path)
        assert excinfo.value.details['row'] == 3

    def test_short_row(self, tmp_path):
        path = _write_text(tmp_path, 'short.csv', "x_1,x_2,y\n0.0,1.0,1.0\n0.5,1.0\n")
        with pytest.raises(DatasetError):
            load_dataset(path)

    def test_no_rows(self, tmp_path):
        path = _write_text(tmp_path, 'empty.csv', "x_1,y\n")
        with pytest.raises(DatasetError) as excinfo:
            load_dataset(path)
        assert 'no rows' in excinfo.value.message

    def test_missing_label_column(self, tmp_path):
        path = _write_text(tmp_path, 'nolabel.csv', "x_1,x_2\n0.0,1.0\n")
        with pytest.raises(DatasetError) as excinfo:
            load_dataset(path)
        assert excinfo.value.details['column'] == 'y'

    def test_non_numeric_cell(self, tmp_path):
        path = _write_text(tmp_path, 'text.csv', "x_1,y\n0.0,1.0\nabc,1.0\n")
        with pytest.raises(DatasetError) as excinfo:
            load_dataset(path)
        assert excinfo.value.details == {'row': 3, 'column': 'x_1'}

    def test_complex_inputs_survive_save(self, tmp_path):
        data = Dataset.of([[0.6j, 0.8], [1.0, 0.0]], [1.0, -1.0])
        path = save_dataset(str(tmp_path / 'complex.csv'), data)
        restored = load_dataset(path)
        np.testing.assert_allclose([x.values for x in restored.inputs], [x.values for x in data.inputs])


class TestEnvironmentConfig:

    def test_defaults_are_valid(self):
        status = Config.validate_config()
        assert status['is_valid'], status['errors']

    def test_invalid_value_is_reported(self, monkeypatch):
        monkeypatch.setattr(Config, 'SVM_MAX_PASSES', 0)
        status = Config.validate_config()
        assert 'SVM_MAX_PASSES' in status['invalid_keys']
        assert main.main([os.path.join(ROOT, 'configs', 'krr_two_point.json')]) == 1

    def test_svm_limits_come_from_environment(self, monkeypatch, rx, two_point):
        monkeypatch.setattr(Config, 'SVM_MAX_PASSES', 1)
        assert Config.get_solver_config()['max_passes'] == 1
        with pytest.raises(ConvergenceError) as excinfo:
            fit_svm(rx, two_point, c_box=10.0)
        assert excinfo.value.passes == 1


class TestJsonFormat:

    @pytest.mark.parametrize("value, text", [
        (0.1, '0.10000000000000001'),
        (1.0, '1.0000000000000000'),
        (0.5, '0.50000000000000000'),
        (0.0, '0.0000000000000000'),
        (-2.0 ** -20, '-9.5367431640625000e-07'),
        (1e16, '10000000000000000'),
    ])
    def test_format_float(self, value, text):
        assert format_float(value) == text
        assert _significant_digits(text) == 17

    def test_round_trip_is_exact(self, rng):
        values = list(rng.standard_normal(200) * 10.0 ** rng.integers(-30, 30, size=200))
        restored = json.loads(dumps_json({'values': values}))['values']
        assert restored == values

    def test_layout(self):
        text = dumps_json({'b': [1, 0.25], 'a': {'flag': True, 'none': None}})
        assert text == (
            '{\n  "a": {\n    "flag": true,\n    "none": null\n  },\n'
            '  "b": [\n    1,\n    0.25000000000000000\n  ]\n}\n'
        )

    @pytest.mark.parametrize("value", [float('nan'), float('inf')])
    def test_non_finite_rejected(self, value):
        with pytest.raises(ValueError):
            dumps_json({'v': value})


class TestLogging:

    @pytest.mark.parametrize("module_name", [
        'dataset_loader', 'fourier', 'kernels', 'main', 'training', 'variational',
    ])
    def test_modules_share_one_logger(self, module_name):
        assert importlib.import_module(module_name).logger is utils.logger

    def test_verbose_switches_shared_level(self):
        utils.set_log_level('DEBUG')
        try:
            assert utils.logger.isEnabledFor(logging.DEBUG)
        finally:
            utils.set_log_level(Config.LOG_LEVEL)
