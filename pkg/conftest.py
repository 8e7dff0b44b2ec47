"""공용 pytest 픽스처"""

import os

import numpy as np
import pytest

from feature_maps import EncodingSpec
from linalg_core import HermitianOperator, PAULI_X, random_unitary
from training import Dataset

ROOT = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rx():
    """단일 큐빗 RX 회전 인코딩 e^{-i(x/2)σ_x}"""
    return EncodingSpec.rotation("X")


@pytest.fixture
def rx_evolution():
    """G = σ_x/2, W = I 인 GeneralEvolution (RX 와 동일한 회로)"""
    return EncodingSpec.general_evolution(1, 1, HermitianOperator(0.5 * PAULI_X))


@pytest.fixture
def two_qubit_evolution():
    """N=2, 큐빗마다 σ_z/2 생성자, 고정된 시드의 무작위 인터리버"""
    rng = np.random.default_rng(7)
    g0 = HermitianOperator(np.diag([0.5, -0.5, 0.5, -0.5]).astype(complex))
    g1 = HermitianOperator(np.diag([0.5, 0.5, -0.5, -0.5]).astype(complex))
    interleavers = [random_unitary(4, rng) for _ in range(3)]
    return EncodingSpec.general_evolution(2, 2, [g0, g1], interleavers)


@pytest.fixture
def two_point():
    """{(0, +1), (π, −1)}"""
    return Dataset.of([[0.0], [np.pi]], [1.0, -1.0])


@pytest.fixture
def schema_dir():
    return os.path.join(ROOT, 'schemas')


@pytest.fixture
def config_dir():
    return os.path.join(ROOT, 'configs')
