"""Fast pipeline cost and exact gradient.

Every state in the pipeline has low rank: a pure input, at most ``n + 1``
Kraus branches after the noise, and ``2**r`` ancilla outcomes after the trace
over B.  The evaluator therefore stores each averaged density matrix as
``rho = F F†`` with a thin column matrix ``F`` and pushes gates through ``F``.
Gradients come from one reverse (adjoint) sweep.  For a rotation
``exp(-i theta G)`` with ``G**2 = 1`` the derivative it produces equals the
pi/4 shift difference term for term, so the result is the same number
``grad_alpha``/``grad_beta`` assemble from 2 and 4 pipeline calls.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .ansatz import ParametricCircuit, two_design_states
from .cost import CostHamiltonian, PipelineSpec
from .noise import build_noise_channel
from .qsim import PAULI


@njit(cache=True)
def _local(sigma, theta, sign):
    """``exp(-i sign theta sigma)`` on the target and its phase ``exp(-i sign theta)`` where the control is off."""
    c, s = np.cos(theta), np.sin(theta)
    u = np.empty((2, 2), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            u[a, b] = -1j * sign * s * sigma[a, b]
        u[a, a] += c
    return u, c - 1j * sign * s


@njit(cache=True, fastmath=True)
def _apply(cols, u, phase, target, control, polarity, n):
    """In place ``cols <- U cols``; ``control < 0`` means an uncontrolled rotation."""
    dim, m = cols.shape
    st = 1 << (n - 1 - target)
    sc = 1 << (n - 1 - control) if control >= 0 else 0
    for i in range(dim):
        if i & st:
            continue
        j = i + st
        if control >= 0 and ((i & sc) != 0) != polarity:
            for c in range(m):
                cols[i, c] *= phase
                cols[j, c] *= phase
        else:
            for c in range(m):
                a = cols[i, c]
                b = cols[j, c]
                cols[i, c] = u[0, 0] * a + u[0, 1] * b
                cols[j, c] = u[1, 0] * a + u[1, 1] * b


@njit(cache=True, fastmath=True)
def _imag_overlap(lam, cols, sigma, target, control, polarity, n):
    """``Im sum_c <lam_c| G |cols_c>`` for the generator ``G`` of one rotation."""
    dim, m = cols.shape
    st = 1 << (n - 1 - target)
    sc = 1 << (n - 1 - control) if control >= 0 else 0
    acc = 0j
    for i in range(dim):
        if i & st:
            continue
        j = i + st
        if control >= 0 and ((i & sc) != 0) != polarity:
            for c in range(m):
                acc += np.conj(lam[i, c]) * cols[i, c] + np.conj(lam[j, c]) * cols[j, c]
        else:
            for c in range(m):
                a = cols[i, c]
                b = cols[j, c]
                acc += np.conj(lam[i, c]) * (sigma[0, 0] * a + sigma[0, 1] * b)
                acc += np.conj(lam[j, c]) * (sigma[1, 0] * a + sigma[1, 1] * b)
    return acc.imag


@njit(cache=True)
def _forward(cols, sigmas, targets, controls, polarities, slots, angles, sign, n):
    for g in range(sigmas.shape[0]):
        u, phase = _local(sigmas[g], angles[slots[g]], sign)
        _apply(cols, u, phase, targets[g], controls[g], polarities[g], n)


@njit(cache=True)
def _backward(cols, lam, sigmas, targets, controls, polarities, slots, angles, sign, n, grad):
    """Walk the gates in reverse, undoing them on ``cols`` and ``lam`` and adding each gate's derivative."""
    for g in range(sigmas.shape[0] - 1, -1, -1):
        t, c, pol = targets[g], controls[g], polarities[g]
        grad[slots[g]] += 2.0 * sign * _imag_overlap(lam, cols, sigmas[g], t, c, pol, n)
        u, phase = _local(sigmas[g], angles[slots[g]], -sign)
        # the inverse of exp(-i theta sigma) for Hermitian sigma flips the sign of theta
        _apply(cols, u, phase, t, c, pol, n)
        _apply(lam, u, phase, t, c, pol, n)


class _GateTable:
    """A circuit flattened into arrays the compiled sweeps can read."""

    def __init__(self, circ: ParametricCircuit, reverse: bool = False):
        gates = circ.gates[::-1] if reverse else circ.gates
        if any(len(g.controls) > 1 for g in gates):
            raise ValueError("the fast evaluator handles rotations with at most one control")
        self.n = circ.num_qubits
        self.sigmas = np.array([PAULI[g.axis] for g in gates], dtype=complex).reshape(-1, 2, 2)
        self.targets = np.array([g.target for g in gates], dtype=np.int64)
        self.controls = np.array([g.controls[0] if g.controls else -1 for g in gates], dtype=np.int64)
        self.polarities = np.array([g.polarity[0] if g.controls else 0 for g in gates], dtype=np.bool_)
        self.slots = np.array([g.slot for g in gates], dtype=np.int64)
        # V† runs the gates backwards with exp(+i theta G)
        self.sign = -1.0 if reverse else 1.0

    def _table(self):
        return self.sigmas, self.targets, self.controls, self.polarities, self.slots

    def forward(self, cols, angles):
        _forward(cols, *self._table(), angles, self.sign, self.n)

    def backward(self, cols, lam, angles, grad):
        _backward(cols, lam, *self._table(), angles, self.sign, self.n, grad)


class Evaluator:
    """Cost, averaged output state and gradient for one pipeline and one cost observable."""

    def __init__(self, spec: PipelineSpec, hamiltonian: CostHamiltonian):
        if hamiltonian.n != spec.layout.n:
            raise ValueError("cost observable must act on the QA register")
        self.spec = spec
        self.hamiltonian = hamiltonian
        self.n = spec.layout.n
        self.r = spec.layout.r
        self.sweeps = 0
        self.encoder = _GateTable(spec.V)
        self.decoder = _GateTable(spec.V, reverse=True)
        self.recovery = _GateTable(spec.W)
        self.kraus = np.array(build_noise_channel(spec.noise).operators)

        dim = 2 ** self.n
        inputs = two_design_states()
        self.m = len(inputs)
        self.inputs = np.array([np.kron(u, np.eye(dim // 2)) for u in inputs])
        self.start = np.ascontiguousarray(self.inputs[:, :, 0].T)
        h = np.diag(hamiltonian.diagonal).astype(complex)
        self.final_obs = np.array([u @ h @ u.conj().T for u in self.inputs])

    def _angles(self, alpha, beta, alpha_dagger):
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        alpha_dagger = alpha if alpha_dagger is None else np.asarray(alpha_dagger, dtype=float)
        for name, a, want in (
            ("alpha", alpha, self.spec.V.param_count),
            ("beta", beta, self.spec.W.param_count),
            ("alpha_dagger", alpha_dagger, self.spec.V.param_count),
        ):
            if a.shape != (want,):
                raise ValueError(f"{name} needs {want} angles, got shape {a.shape}")
        return alpha, beta, alpha_dagger

    def _run(self, alpha, beta, alpha_dagger):
        """Forward pass; columns are indexed (input j, Kraus branch k[, ancilla outcome b])."""
        dim, dim_b = 2 ** self.n, 2 ** self.r
        encoded = self.start.copy()
        self.encoder.forward(encoded, alpha)
        branches = np.einsum("kab,bj->ajk", self.kraus, encoded).reshape(dim, -1)
        extended = np.zeros((dim, dim_b, branches.shape[1]), dtype=complex)
        extended[:, 0, :] = branches
        recovered = extended.reshape(dim * dim_b, -1)
        self.recovery.forward(recovered, beta)
        decoded = np.ascontiguousarray(recovered.reshape(dim, dim_b, -1).transpose(0, 2, 1).reshape(dim, -1))
        self.decoder.forward(decoded, alpha_dagger)
        return encoded, recovered, decoded

    def _input_frame(self, decoded):
        """Columns grouped per input ``j`` and rotated back by ``U_j†``, shape (inputs, dim, columns)."""
        dim = 2 ** self.n
        per_input = decoded.shape[1] // self.m
        blocks = decoded.reshape(dim, self.m, per_input).transpose(1, 0, 2)
        return self.inputs.conj().transpose(0, 2, 1) @ blocks

    def output_state(self, alpha, beta, alpha_dagger=None) -> np.ndarray:
        """The input-averaged state on QA, as a plain matrix."""
        f = self._input_frame(self._run(*self._angles(alpha, beta, alpha_dagger))[2])
        return np.einsum("jac,jbc->ab", f, f.conj()) / self.m

    def value(self, alpha, beta, alpha_dagger=None) -> float:
        f = self._input_frame(self._run(*self._angles(alpha, beta, alpha_dagger))[2])
        populations = np.einsum("jac,jac->a", f, f.conj()).real / self.m
        return float(populations @ self.hamiltonian.diagonal)

    def fidelity(self, alpha, beta) -> float:
        return float(self.output_state(alpha, beta)[0, 0].real)

    def value_and_grad(self, alpha, beta):
        """Cost and its exact gradient with respect to ``alpha`` and ``beta``."""
        alpha, beta, _ = self._angles(alpha, beta, None)
        encoded, recovered, decoded = self._run(alpha, beta, alpha)
        dim, dim_b, m = 2 ** self.n, 2 ** self.r, self.m
        per_input = decoded.shape[1] // m
        grad_a = np.zeros(self.spec.V.param_count)
        grad_b = np.zeros(self.spec.W.param_count)

        lam = np.empty_like(decoded)
        for j in range(m):
            block = slice(j * per_input, (j + 1) * per_input)
            lam[:, block] = self.final_obs[j] @ decoded[:, block]
        lam /= m
        cost = float(np.real(np.vdot(decoded, lam)))

        # the cost is quadratic in the columns, so dC = 2 Re <lam|dF> at every stage
        self.decoder.backward(decoded, lam, alpha, grad_a)
        lam = np.ascontiguousarray(lam.reshape(dim, -1, dim_b).transpose(0, 2, 1).reshape(dim * dim_b, -1))
        self.recovery.backward(recovered, lam, beta, grad_b)
        lam = lam.reshape(dim, dim_b, -1)[:, 0, :].reshape(dim, m, len(self.kraus))
        lam = np.ascontiguousarray(np.einsum("kba,bjk->aj", self.kraus.conj(), lam))
        self.encoder.backward(encoded, lam, alpha, grad_a)
        self.sweeps += 1
        return cost, grad_a, grad_b
