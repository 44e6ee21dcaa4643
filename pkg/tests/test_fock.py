import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from catsim import (
    FockSpace,
    basis_state,
    check_density_matrix,
    displacement,
    hermitian_eigensystem,
    ladder_operators,
    matrix_exponential,
    partial_trace,
    partial_transpose,
    projector,
    tensor_product,
)

RNG = np.random.default_rng(20240811)


def random_density(n, rng=RNG):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def random_hermitian(n, rng=RNG):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


class TestFockSpace:
    def test_rejects_tiny_truncation(self):
        with pytest.raises(ValueError):
            FockSpace(1)
        with pytest.raises(ValueError):
            FockSpace(4, 1)

    def test_bipartite_dims(self):
        s = FockSpace(3, 5)
        assert s.dim == 15
        assert s.dims == (3, 5)
        assert s.bipartite

    def test_basis_ordering_is_mode_a_major(self):
        # |i_a=1, i_b=2> sits at index 1 * n_b + 2
        s = FockSpace(3, 4)
        ket_a = basis_state(3, 1)
        ket_b = basis_state(4, 2)
        joint = np.kron(ket_a, ket_b)
        assert joint[1 * 4 + 2] == 1.0
        assert basis_state(s, 6)[6] == 1.0


class TestLadderOperators:
    def test_annihilation_elements(self):
        a, adag, _, _ = ladder_operators(3)
        ket1 = basis_state(3, 1)
        ket2 = basis_state(3, 2)
        assert_allclose(a @ ket1, basis_state(3, 0), atol=1e-15)
        assert_allclose(a @ ket2, np.sqrt(2) * ket1, atol=1e-15)
        assert_allclose(adag, a.conj().T)

    def test_number_and_parity_diagonals(self):
        _, _, num, par = ladder_operators(4)
        assert_allclose(np.diag(num).real, [0, 1, 2, 3])
        assert_allclose(np.diag(par).real, [1, -1, 1, -1])

    def test_rejects_small_space(self):
        with pytest.raises(ValueError):
            ladder_operators(1)

    def test_commutator_is_identity_inside_truncation(self):
        n = 9
        a, adag, _, _ = ladder_operators(n)
        comm = a @ adag - adag @ a
        assert_allclose(comm[: n - 1, : n - 1], np.eye(n - 1), atol=1e-13)
        # the defect is confined to the last basis state
        assert comm[n - 1, n - 1].real == pytest.approx(1 - n)

    def test_parity_anticommutes_with_annihilation(self):
        a, _, _, par = ladder_operators(8)
        assert_allclose(par @ a, -a @ par, atol=0)


class TestDisplacement:
    def test_zero_is_identity(self):
        assert_allclose(displacement(0.0, 12), np.eye(12), atol=0)

    def test_coherent_photon_number(self):
        n = 30
        _, _, num, _ = ladder_operators(n)
        psi = displacement(1.0, n) @ basis_state(n, 0)
        assert (psi.conj() @ num @ psi).real == pytest.approx(1.0, abs=1e-8)

    def test_vacuum_overlap_matches_series_oracle(self):
        # independent oracle: <0|D(1)|0> = sum_k (-1)^k / (k! 2^k) ... computed
        # as the truncated exponential series exp(-|a|^2/2) by direct summation
        series = sum((-0.5) ** k / math.factorial(k) for k in range(40))
        d = displacement(1.0, 40)
        assert d[0, 0].real == pytest.approx(series, abs=1e-12)
        assert d[0, 0].real == pytest.approx(0.6065306597126334, abs=1e-12)

    def test_matches_exponential_oracle_inside_safe_block(self):
        # expm of the truncated generator is exact away from the edge; the
        # closed form holds everywhere, so they must agree well inside.
        n = 30
        a, adag, _, _ = ladder_operators(n)
        for alpha in (0.5, 1.0 + 0.5j, -1.2j):
            d_closed = displacement(alpha, n)
            d_expm = matrix_exponential(alpha * adag - np.conj(alpha) * a)
            block = 12
            assert_allclose(
                d_closed[:block, :block], d_expm[:block, :block], atol=1e-10
            )

    def test_unitary_on_interior_block(self):
        # D^dag D = I holds on an interior block; the block size is set by the
        # spread 2|alpha| sqrt(n) of displaced edge states, measured here, not
        # by |alpha|^2 alone.
        for alpha, n, block in ((0.5, 25, 12), (2.0, 40, 9)):
            d = displacement(alpha, n)
            defect = np.abs(d.conj().T @ d - np.eye(n))
            assert defect[:block, :block].max() < 1e-8

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            displacement(np.inf, 10)
        with pytest.raises(ValueError):
            displacement(np.nan + 0j, 10)

    def test_truncation_warning(self):
        with pytest.warns(UserWarning):
            displacement(4.0, 16)


class TestTensorProduct:
    def test_dims(self):
        assert tensor_product(np.eye(3), np.eye(4)).shape == (12, 12)

    def test_annihilation_acts_on_first_factor(self):
        a, _, _, _ = ladder_operators(3)
        eye = np.eye(3, dtype=complex)
        op = tensor_product(a, eye)
        ket = np.kron(basis_state(3, 1), basis_state(3, 0))
        expected = np.kron(basis_state(3, 0), basis_state(3, 0))
        assert_allclose(op @ ket, expected, atol=1e-15)

    def test_trace_factorizes(self):
        m1 = random_hermitian(3)
        m2 = random_hermitian(4)
        assert np.trace(tensor_product(m1, m2)) == pytest.approx(
            np.trace(m1) * np.trace(m2)
        )

    def test_associative_with_fixed_ordering(self):
        m1, m2, m3 = (random_hermitian(k) for k in (2, 3, 2))
        left = tensor_product(tensor_product(m1, m2), m3)
        right = tensor_product(m1, tensor_product(m2, m3))
        assert_allclose(left, right, atol=1e-14)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            tensor_product(np.ones((2, 3)), np.eye(2))


class TestHermitianEigensystem:
    def test_sorted_diagonal(self):
        w, _ = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0]).astype(complex))
        assert_allclose(w, [1, 2, 3])

    def test_pauli_x(self):
        w, _ = hermitian_eigensystem(np.array([[0, 1], [1, 0]], dtype=complex))
        assert_allclose(w, [-1, 1])

    def test_orthonormal_and_reconstructs(self):
        m = random_hermitian(8)
        w, v = hermitian_eigensystem(m)
        assert_allclose(v.conj().T @ v, np.eye(8), atol=1e-12)
        assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-10 * np.abs(m).max())

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))


class TestMatrixExponential:
    def test_zero(self):
        assert_allclose(matrix_exponential(np.zeros((3, 3))), np.eye(3))

    def test_nilpotent_closed_form(self):
        m = np.array([[0, 1], [0, 0]], dtype=complex)
        assert_allclose(matrix_exponential(m), np.array([[1, 1], [0, 1]]), atol=1e-15)

    def test_diagonal_phases(self):
        d = np.array([0.3, -1.2, 2.0])
        m = matrix_exponential(1j * 0.7 * np.diag(d))
        assert_allclose(np.diag(m), np.exp(1j * 0.7 * d), rtol=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            matrix_exponential(np.array([[np.inf, 0], [0, 0]]))


class TestPartialTrace:
    def test_recovers_product_factors(self):
        rho_a = random_density(3)
        rho_b = random_density(4)
        joint = tensor_product(rho_a, rho_b)
        assert_allclose(partial_trace(joint, (3, 4), keep="a"), rho_a, atol=1e-13)
        assert_allclose(partial_trace(joint, (3, 4), keep="b"), rho_b, atol=1e-13)

    def test_bell_state_reduces_to_maximally_mixed(self):
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / np.sqrt(2)
        rho_a = partial_trace(projector(bell), (2, 2), keep="a")
        assert_allclose(rho_a, np.eye(2) / 2, atol=1e-14)

    def test_trace_preserved(self):
        joint = random_density(12)
        assert np.trace(partial_trace(joint, (3, 4), keep="b")).real == pytest.approx(1.0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(10) / 10, (3, 4), keep="a")


class TestPartialTranspose:
    def test_product_state_stays_psd(self):
        joint = tensor_product(random_density(3), random_density(3))
        pt = partial_transpose(joint, (3, 3))
        assert np.linalg.eigvalsh(pt).min() > -1e-12

    def test_bell_state_min_eigenvalue(self):
        # oracle: explicit 4x4 matrix of the partially transposed Bell state
        bell_pt = 0.5 * np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
        )
        oracle_min = np.linalg.eigvalsh(bell_pt).min()
        assert oracle_min == pytest.approx(-0.5, abs=1e-12)

        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / np.sqrt(2)
        pt = partial_transpose(projector(bell), (2, 2))
        assert_allclose(pt, bell_pt, atol=1e-15)
        assert np.linalg.eigvalsh(pt).min() == pytest.approx(-0.5, abs=1e-12)

    def test_involution(self):
        rho = random_density(12)
        pt2 = partial_transpose(partial_transpose(rho, (3, 4)), (3, 4))
        assert_allclose(pt2, rho, atol=0)

    def test_hermitian_and_unit_trace(self):
        rho = random_density(12)
        pt = partial_transpose(rho, (4, 3), moved="a")
        assert_allclose(pt, pt.conj().T, atol=1e-14)
        assert np.trace(pt).real == pytest.approx(1.0)


class TestDensityMatrixContract:
    def test_accepts_valid(self):
        check_density_matrix(random_density(6))

    def test_rejects_nonhermitian(self):
        rho = random_density(4)
        rho[0, 1] += 1e-6
        with pytest.raises(ValueError):
            check_density_matrix(rho)

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError):
            check_density_matrix(np.eye(4, dtype=complex))

    def test_rejects_negative(self):
        rho = np.diag([1.1, -0.1]).astype(complex)
        with pytest.raises(ValueError):
            check_density_matrix(rho)
