"""linalg_core 테스트"""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from errors import DimensionMismatchError, InvariantViolationError, NotHermitianError
from feature_maps import encode_density
from linalg_core import (
    PAULI_X, PAULI_Z, DensityMatrix, HermitianOperator, StateVector, Unitary,
    apply_unitary, cnot, embed_single_qubit, evolve_density, expectation, fidelity,
    hermitian_eigendecomposition, hs_inner_product, pauli, pauli_rotation, random_hermitian,
    random_unitary, rot, states_equal, tensor_power, tensor_product,
)

SQRT_HALF = 1.0 / np.sqrt(2.0)


class TestTypes:

    def test_state_vector_requires_unit_norm(self):
        with pytest.raises(InvariantViolationError):
            StateVector([1.0, 1.0])

    def test_state_vector_rejects_empty(self):
        with pytest.raises(InvariantViolationError):
            StateVector([])

    def test_density_matrix_checks(self):
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.eye(2))  # 대각합 2
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.diag([1.5, -0.5]))  # 음의 고유값
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_hermitian_and_unitary_checks(self):
        with pytest.raises(NotHermitianError):
            HermitianOperator(np.array([[0, 1], [0, 0]]))
        with pytest.raises(InvariantViolationError):
            Unitary(np.array([[1, 1], [0, 1]]))

    def test_pure_density_purity(self):
        psi = StateVector([SQRT_HALF, 1j * SQRT_HALF])
        assert psi.density().purity() == pytest.approx(1.0, abs=1e-12)


class TestTensorProduct:

    def test_zero_zero(self):
        zero = StateVector.basis(0, 2)
        assert_array_equal(tensor_product(zero, zero).amplitudes, StateVector.basis(0, 4).amplitudes)

    def test_first_factor_is_most_significant(self):
        z_i = tensor_product(HermitianOperator(PAULI_Z), HermitianOperator(np.eye(2)))
        assert_array_equal(np.diag(z_i.entries).real, [1, 1, -1, -1])

    def test_plus_times_one(self):
        plus = StateVector([SQRT_HALF, SQRT_HALF])
        one = StateVector.basis(1, 2)
        assert_allclose(tensor_product(plus, one).amplitudes, [0, SQRT_HALF, 0, SQRT_HALF], atol=1e-15)

    def test_associativity_is_exact_on_dyadic_entries(self, rng):
        # 2^-k 배수 원소의 곱은 반올림 없이 정확하다
        def dyadic():
            a = (rng.integers(-8, 9, size=(2, 2)) + 1j * rng.integers(-8, 9, size=(2, 2))) / 4.0
            return HermitianOperator(a + a.conj().T)
        a, b, c = dyadic(), dyadic(), dyadic()
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        assert_array_equal(left.entries, right.entries)

    def test_index_placement(self):
        # (A⊗B⊗C)[i, j] = A[i2, j2]·B[i1, j1]·C[i0, j0], i = 4·i2 + 2·i1 + i0
        a, b, c = (np.arange(4).reshape(2, 2) + 1 + 10 * k for k in range(3))
        product = tensor_product(tensor_product(a, b), c)
        for i in range(8):
            for j in range(8):
                expected = a[i >> 2, j >> 2] * b[(i >> 1) & 1, (j >> 1) & 1] * c[i & 1, j & 1]
                assert product[i, j] == expected

    def test_associativity(self, rng):
        a, b, c = (random_hermitian(2, rng) for _ in range(3))
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        assert_allclose(left.entries, right.entries, rtol=0, atol=1e-13)

    def test_mixed_state_and_operator_rejected(self):
        with pytest.raises(DimensionMismatchError):
            tensor_product(StateVector.basis(0, 2), HermitianOperator(PAULI_Z))

    def test_tensor_power_dimension(self):
        assert tensor_power(StateVector.basis(1, 2), 3).dimension == 8


class TestEigendecomposition:

    def test_pauli_x_spectrum(self):
        eigenvalues, _ = hermitian_eigendecomposition(pauli('X'))
        assert_allclose(eigenvalues, [-1.0, 1.0], atol=1e-15)

    def test_half_pauli_x_spectrum(self):
        eigenvalues, _ = hermitian_eigendecomposition(HermitianOperator(0.5 * PAULI_X))
        assert_allclose(eigenvalues, [-0.5, 0.5], atol=1e-15)

    @pytest.mark.parametrize("dimension", [2, 8, 16, 64])
    def test_round_trip(self, rng, dimension):
        h = random_hermitian(dimension, rng)
        eigenvalues, v = hermitian_eigendecomposition(h)
        assert np.all(np.diff(eigenvalues) >= 0)
        rebuilt = v.entries @ np.diag(eigenvalues) @ v.entries.conj().T
        assert np.max(np.abs(rebuilt - h.entries)) <= 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(NotHermitianError):
            hermitian_eigendecomposition(np.array([[1, 2], [0, 1]], dtype=complex))


class TestExpectationAndInnerProduct:

    def test_expectation_examples(self, rx):
        z = pauli('Z')
        assert expectation(StateVector.basis(0, 2).density(), z) == pytest.approx(1.0)
        plus = StateVector([SQRT_HALF, SQRT_HALF])
        assert expectation(plus.density(), z) == pytest.approx(0.0, abs=1e-15)
        assert expectation(encode_density(rx, [np.pi / 3]), z) == pytest.approx(0.5, abs=1e-12)

    def test_expectation_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            expectation(StateVector.basis(0, 4).density(), pauli('Z'))

    def test_hs_inner_product_examples(self, rx):
        zero = StateVector.basis(0, 2).density()
        one = StateVector.basis(1, 2).density()
        assert hs_inner_product(zero, zero) == pytest.approx(1.0)
        assert hs_inner_product(zero, one) == pytest.approx(0.0)
        value = hs_inner_product(encode_density(rx, [0.0]), encode_density(rx, [np.pi / 2]))
        assert value == pytest.approx(0.5, abs=1e-12)

    def test_hs_inner_product_symmetric(self, rng):
        for _ in range(20):
            a = apply_unitary(random_unitary(4, rng), StateVector.basis(0, 4)).density()
            b = apply_unitary(random_unitary(4, rng), StateVector.basis(0, 4)).density()
            assert abs(hs_inner_product(a, b) - hs_inner_product(b, a)) <= 1e-12
            assert -1e-10 <= hs_inner_product(a, b) <= 1 + 1e-10


class TestUnitaries:

    def test_identity_is_noop(self, rng):
        psi = apply_unitary(random_unitary(4, rng), StateVector.basis(2, 4))
        assert_allclose(apply_unitary(Unitary.identity(4), psi).amplitudes, psi.amplitudes)

    def test_rx_pi_on_zero(self):
        out = apply_unitary(pauli_rotation('X', np.pi), StateVector.basis(0, 2))
        assert_allclose(out.amplitudes, [0, -1j], atol=1e-15)

    def test_rot_with_zero_theta2(self):
        theta1, theta3 = 0.7, -1.3
        out = apply_unitary(rot(theta1, 0.0, theta3), StateVector.basis(0, 2))
        assert_allclose(out.amplitudes, [np.exp(1j * (-theta1 - theta3) / 2), 0], atol=1e-15)

    def test_norm_preserved(self, rng):
        psi = apply_unitary(random_unitary(8, rng), StateVector.basis(0, 8))
        out = apply_unitary(random_unitary(8, rng), psi)
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) <= 1e-12

    def test_evolve_density_matches_state_evolution(self, rng):
        u = random_unitary(4, rng)
        psi = apply_unitary(random_unitary(4, rng), StateVector.basis(0, 4))
        rho = evolve_density(u, psi.density())
        assert_allclose(rho.entries, apply_unitary(u, psi).density().entries, atol=1e-12)

    def test_states_equal_ignores_global_phase(self):
        psi = StateVector([SQRT_HALF, SQRT_HALF])
        assert states_equal(psi, StateVector(np.exp(0.4j) * psi.amplitudes))
        assert fidelity(psi, StateVector.basis(0, 2)) == pytest.approx(0.5)

    def test_qubit_zero_is_least_significant(self):
        x0 = embed_single_qubit(PAULI_X, 0, 2)
        assert_array_equal(x0 @ StateVector.basis(0, 4).amplitudes, StateVector.basis(1, 4).amplitudes)

    def test_cnot_flips_target_when_control_set(self):
        out = apply_unitary(cnot(0, 1, 2), StateVector.basis(1, 4))
        assert_array_equal(out.amplitudes, StateVector.basis(3, 4).amplitudes)
