import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_hermitian, random_unitary
from wassqec import qsim
from wassqec.qsim import DensityMatrix, DimensionError, KrausChannel, UnitaryGate

seeds = st.integers(0, 2**32 - 1)


def basis(index, dim):
    m = np.zeros((dim, dim))
    m[index, index] = 1
    return m


class TestPureState:
    def test_three_qubit_zero(self):
        assert np.array_equal(qsim.pure_state([0, 0, 0]).matrix, basis(0, 8))

    def test_single_one(self):
        assert np.array_equal(qsim.pure_state([1]).matrix, np.diag([0, 1]))

    def test_index_one_of_four(self):
        assert np.array_equal(qsim.pure_state([0, 1]).matrix, basis(1, 4))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            qsim.pure_state([0, 1], num_qubits=3)

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            qsim.pure_state([0, 2])


class TestDensityMatrix:
    def test_valid_and_read_only(self):
        rho = qsim.pure_state([1, 0])
        assert rho.is_valid() and rho.num_qubits == 2
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1

    def test_flags_bad_states(self):
        assert not DensityMatrix(np.diag([0.6, 0.6])).is_valid()
        assert not DensityMatrix(np.diag([1.5, -0.5])).is_valid()
        assert not DensityMatrix(np.array([[0.5, 0.1], [0.2, 0.5]])).is_valid()

    def test_shape_checked(self):
        with pytest.raises(DimensionError):
            DensityMatrix(np.eye(3) / 3)


class TestApplyUnitary:
    def test_identity_gate(self):
        rho = DensityMatrix(random_density(np.random.default_rng(0), 2))
        out = qsim.apply_unitary(rho, UnitaryGate((1,), np.eye(2)))
        assert np.allclose(out.matrix, rho.matrix, atol=1e-14)

    def test_pi_half_x_rotation_flips(self):
        u = np.cos(np.pi / 2) * np.eye(2) - 1j * np.sin(np.pi / 2) * qsim.PAULI["x"]
        out = qsim.apply_unitary(qsim.pure_state([0]), UnitaryGate((0,), u))
        assert np.allclose(out.matrix, np.diag([0, 1]), atol=1e-15)

    def test_controlled_flip(self):
        cnot = np.eye(4)[[0, 1, 3, 2]]
        out = qsim.apply_unitary(qsim.pure_state([1, 0]), UnitaryGate((0, 1), cnot))
        assert np.array_equal(out.matrix, qsim.pure_state([1, 1]).matrix)

    def test_reversed_control_order(self):
        cnot = np.eye(4)[[0, 1, 3, 2]]
        out = qsim.apply_unitary(qsim.pure_state([0, 1]), UnitaryGate((1, 0), cnot))
        assert np.array_equal(out.matrix, qsim.pure_state([1, 1]).matrix)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            qsim.apply_unitary(qsim.pure_state([0, 0]), UnitaryGate((2,), np.eye(2)))

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            UnitaryGate((0,), np.diag([1, 2]))

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_spectrum_preserved(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(random_density(rng, 3))
        qubits = tuple(rng.permutation(3)[:2].tolist())
        out = qsim.apply_unitary(rho, UnitaryGate(qubits, random_unitary(rng, 4)))
        assert np.allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_local_matches_embedded(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(random_density(rng, 3))
        u = random_unitary(rng, 4)
        qubits = tuple(rng.permutation(3)[:2].tolist())
        local = qsim.apply_unitary(rho, UnitaryGate(qubits, u))
        full = qsim.apply_unitary(rho, qsim.embed(u, qubits, 3))
        assert np.allclose(local.matrix, full.matrix, atol=1e-12)


class TestApplyChannel:
    def test_single_identity_kraus(self):
        rho = DensityMatrix(random_density(np.random.default_rng(1), 2))
        out = qsim.apply_channel(rho, KrausChannel((np.eye(4),)))
        assert np.allclose(out.matrix, rho.matrix)

    def test_certain_bit_flip(self):
        ch = KrausChannel((0 * np.eye(2), qsim.PAULI["x"]))
        assert np.allclose(qsim.apply_channel(qsim.pure_state([0]), ch).matrix, np.diag([0, 1]))

    def test_half_bit_flip(self):
        # sum_k K rho K†: 0.5 |0><0| + 0.5 X|0><0|X
        ch = KrausChannel((np.sqrt(0.5) * np.eye(2), np.sqrt(0.5) * qsim.PAULI["x"]))
        assert np.allclose(qsim.apply_channel(qsim.pure_state([0]), ch).matrix, np.diag([0.5, 0.5]), atol=1e-15)

    def test_completeness_checked_at_construction(self):
        with pytest.raises(ValueError):
            KrausChannel((0.9 * np.eye(2),))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            qsim.apply_channel(qsim.pure_state([0]), KrausChannel((np.eye(4),)))

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.floats(0, 1))
    def test_output_is_a_state(self, seed, p):
        rng = np.random.default_rng(seed)
        u = random_unitary(rng, 4)
        ch = KrausChannel((np.sqrt(1 - p) * np.eye(4), np.sqrt(p) * u))
        out = qsim.apply_channel(DensityMatrix(random_density(rng, 2)), ch)
        assert out.is_valid()


class TestAncillaAndTrace:
    def test_extend_single(self):
        out = qsim.extend_with_ancilla(DensityMatrix(np.diag([1.0, 0.0])), 1)
        assert np.array_equal(out.matrix, basis(0, 4))

    def test_extend_keeps_trace_and_inverts(self):
        rho = DensityMatrix(random_density(np.random.default_rng(2), 2))
        ext = qsim.extend_with_ancilla(rho, 2)
        assert abs(np.trace(ext.matrix) - 1) < 1e-12
        assert np.allclose(qsim.partial_trace(ext, [0, 1]).matrix, rho.matrix, atol=1e-15)

    def test_extend_needs_qubits(self):
        with pytest.raises(ValueError):
            qsim.extend_with_ancilla(qsim.pure_state([0]), 0)

    def test_product_state(self):
        rho_q = random_density(np.random.default_rng(3), 1)
        rho = DensityMatrix(np.kron(rho_q, np.diag([1.0, 0.0])))
        assert np.allclose(qsim.partial_trace(rho, [0]).matrix, rho_q)

    def test_bell_state(self):
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        rho = DensityMatrix(np.outer(psi, psi))
        assert np.allclose(qsim.partial_trace(rho, [1]).matrix, np.eye(2) / 2)

    def test_keep_must_be_nonempty(self):
        with pytest.raises(ValueError):
            qsim.partial_trace(qsim.pure_state([0, 0]), [])

    def test_keep_out_of_range(self):
        with pytest.raises(IndexError):
            qsim.partial_trace(qsim.pure_state([0, 0]), [2])

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.sampled_from([3, 4]))
    def test_duality_with_identity_extension(self, seed, n):
        rng = np.random.default_rng(seed)
        keep = sorted(rng.choice(n, size=rng.integers(1, n), replace=False).tolist())
        rho = DensityMatrix(random_density(rng, n))
        h = random_hermitian(rng, 2 ** len(keep))
        lifted = qsim.embed(h, keep, n)
        lhs = np.trace(qsim.partial_trace(rho, keep).matrix @ h)
        rhs = np.trace(rho.matrix @ lifted)
        assert abs(lhs - rhs) < 1e-10

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_gates_on_kept_qubits_commute_with_trace(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(random_density(rng, 4))
        u1, u2 = random_unitary(rng, 2), random_unitary(rng, 4)
        stepwise = qsim.apply_unitary(qsim.apply_unitary(rho, UnitaryGate((0,), u1)), UnitaryGate((2, 0), u2))
        composed = qsim.embed(u2, (2, 0), 4) @ qsim.embed(u1, (0,), 4)
        direct = qsim.apply_unitary(rho, composed)
        traced_first = qsim.apply_unitary(qsim.partial_trace(rho, [0, 2]), qsim.embed(u2, (1, 0), 2) @ qsim.embed(u1, (0,), 2))
        assert np.allclose(qsim.partial_trace(stepwise, [0, 2]).matrix, traced_first.matrix, atol=1e-10)
        assert np.allclose(stepwise.matrix, direct.matrix, atol=1e-10)


class TestExpectation:
    wass = np.array([0, 1, 1, 2, 1, 2, 2, 3], dtype=float)

    def test_wass_examples(self):
        assert qsim.expectation(qsim.pure_state([0, 0, 0]), self.wass) == 0
        assert qsim.expectation(qsim.pure_state([0, 1, 1]), self.wass) == 2

    def test_fid_examples(self):
        fid = np.ones(8)
        fid[0] = 0
        assert qsim.expectation(qsim.pure_state([0, 0, 0]), fid) == 0
        for b in range(1, 8):
            bits = [(b >> (2 - i)) & 1 for i in range(3)]
            assert qsim.expectation(qsim.pure_state(bits), fid) == 1

    def test_matrix_and_diagonal_agree(self):
        rho = DensityMatrix(random_density(np.random.default_rng(4), 3))
        assert abs(qsim.expectation(rho, self.wass) - qsim.expectation(rho, np.diag(self.wass))) < 1e-14

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            qsim.expectation(qsim.pure_state([0, 0]), self.wass)

    def test_non_hermitian_rejected(self):
        rho = DensityMatrix(np.array([[0.5, 0.5], [0.5, 0.5]]))
        with pytest.raises(ValueError):
            qsim.expectation(rho, np.array([[0, 1j], [0, 0]]))
