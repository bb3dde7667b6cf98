"""Dense density-matrix simulation of small qubit registers.

Qubit 0 is the most significant bit of the computational-basis index.
Registers stay tiny (at most a handful of qubits), so every operator is a
plain dense complex matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_FLOOR = -1e-10
UNITARY_ATOL = 1e-12

PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionError(ValueError):
    """Operands do not live on compatible registers."""


@dataclass(frozen=True)
class QubitLayout:
    """Sizes of the protected register Q, its code partner A and the recovery register B."""

    k: int = 1
    n_minus_k: int = 2
    r: int = 2

    def __post_init__(self):
        if self.k < 1 or self.n_minus_k < 0 or self.r < 0:
            raise ValueError(f"invalid layout {self}")

    @property
    def n(self) -> int:
        return self.k + self.n_minus_k

    @property
    def total(self) -> int:
        return self.n + self.r


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = m.shape[0]
        if m.ndim != 2 or m.shape[1] != dim or dim & (dim - 1) or dim == 0:
            raise DimensionError(f"density matrix must be 2^m x 2^m, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def is_valid(self) -> bool:
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            return False
        if abs(np.trace(m) - 1) > TRACE_ATOL:
            return False
        return bool(np.min(np.linalg.eigvalsh(m)) >= PSD_FLOOR)

    def fidelity_with_basis(self, index: int = 0) -> float:
        return float(self.matrix[index, index].real)


@dataclass(frozen=True, eq=False)
class UnitaryGate:
    """A fixed local unitary.

    ``qubits`` lists controls first and then the target(s); ``matrix`` acts on
    those qubits in that order (most significant first).
    """

    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2 ** len(self.qubits),) * 2:
            raise DimensionError(f"matrix {m.shape} does not match qubits {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.qubits}")
        if np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) > UNITARY_ATOL:
            raise ValueError("gate matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise DimensionError("Kraus operators must share one square shape")
        completeness = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(completeness - np.eye(dim))) > 1e-12:
            raise ValueError("Kraus operators violate completeness")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def pure_state(bits: Sequence[int], num_qubits: int | None = None) -> DensityMatrix:
    """Projector onto the computational basis state labelled by ``bits``."""
    bits = list(bits)
    if num_qubits is not None and len(bits) != num_qubits:
        raise DimensionError(f"expected {num_qubits} bits, got {len(bits)}")
    if not bits or any(b not in (0, 1) for b in bits):
        raise ValueError(f"bitstring must be a nonempty 0/1 sequence, got {bits}")
    index = int("".join(map(str, bits)), 2)
    m = np.zeros((2 ** len(bits),) * 2, dtype=complex)
    m[index, index] = 1.0
    return DensityMatrix(m)


def embed(matrix: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """Full-register operator acting as ``matrix`` on ``qubits`` and identity elsewhere."""
    qubits = tuple(qubits)
    if any(q < 0 or q >= num_qubits for q in qubits):
        raise IndexError(f"qubits {qubits} outside register of {num_qubits}")
    rest = [q for q in range(num_qubits) if q not in qubits]
    full = np.kron(matrix, np.eye(2 ** len(rest)))
    # full is ordered (qubits..., rest...); permute both sides into natural order
    perm = np.argsort(list(qubits) + rest)
    t = full.reshape((2,) * (2 * num_qubits))
    t = t.transpose(list(perm) + [num_qubits + p for p in perm])
    return t.reshape(2 ** num_qubits, 2 ** num_qubits)


def apply_local(ops: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """Left-multiply a stack of operators (``..., d, d``) by a local unitary."""
    qubits = tuple(qubits)
    k = len(qubits)
    lead = ops.shape[:-2]
    t = ops.reshape(lead + (2,) * num_qubits + (ops.shape[-1],))
    axes = [len(lead) + q for q in qubits]
    t = np.moveaxis(t, axes, range(len(lead), len(lead) + k))
    shape = t.shape
    t = matrix @ t.reshape(lead + (2 ** k, -1))
    t = np.moveaxis(t.reshape(shape), range(len(lead), len(lead) + k), axes)
    return t.reshape(ops.shape)


def conjugate_local(ops: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """``U X U†`` for a stack of square operators and a local unitary ``U``."""
    left = apply_local(ops, matrix, qubits, num_qubits)
    right = apply_local(np.swapaxes(left, -1, -2).conj(), matrix, qubits, num_qubits)
    return np.swapaxes(right, -1, -2).conj()


def apply_unitary(rho: DensityMatrix, gate: UnitaryGate | np.ndarray) -> DensityMatrix:
    """Return ``U rho U†``; a bare array is taken as a full-register unitary."""
    if isinstance(gate, UnitaryGate):
        if any(q < 0 or q >= rho.num_qubits for q in gate.qubits):
            raise IndexError(f"gate qubits {gate.qubits} outside {rho.num_qubits}-qubit register")
        out = conjugate_local(rho.matrix, gate.matrix, gate.qubits, rho.num_qubits)
    else:
        u = np.asarray(gate)
        if u.shape != rho.matrix.shape:
            raise DimensionError(f"unitary {u.shape} vs state {rho.matrix.shape}")
        out = u @ rho.matrix @ u.conj().T
    return DensityMatrix(out)


def apply_channel(rho: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    if channel.dim != rho.dim:
        raise DimensionError(f"channel on dim {channel.dim}, state dim {rho.dim}")
    m = rho.matrix
    return DensityMatrix(sum(k @ m @ k.conj().T for k in channel.operators))


def extend_with_ancilla(rho: DensityMatrix, m: int) -> DensityMatrix:
    """Append ``m`` fresh qubits in ``|0...0>`` after the existing ones."""
    if m < 1:
        raise ValueError("need at least one ancilla qubit")
    fresh = np.zeros((2 ** m, 2 ** m), dtype=complex)
    fresh[0, 0] = 1.0
    return DensityMatrix(np.kron(rho.matrix, fresh))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on ``keep`` (returned in ascending qubit order)."""
    keep = sorted(set(keep))
    n = rho.num_qubits
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"keep {keep} outside {n}-qubit register")
    drop = [q for q in range(n) if q not in keep]
    t = rho.matrix.reshape((2,) * (2 * n))
    t = t.transpose(keep + drop + [n + q for q in keep] + [n + q for q in drop])
    dk, dd = 2 ** len(keep), 2 ** len(drop)
    t = t.reshape(dk, dd, dk, dd)
    return DensityMatrix(np.einsum("ajbj->ab", t))


def expectation(rho: DensityMatrix, observable) -> float:
    """``Tr[rho H]`` for a square matrix, a diagonal vector, or anything with ``.diagonal``."""
    obs = observable if isinstance(observable, (np.ndarray, list, tuple)) else getattr(observable, "diagonal", observable)
    obs = np.asarray(obs)
    if obs.ndim == 1:
        if obs.shape[0] != rho.dim:
            raise DimensionError(f"observable dim {obs.shape[0]} vs state dim {rho.dim}")
        value = np.dot(np.diag(rho.matrix), obs)
    else:
        if obs.shape != rho.matrix.shape:
            raise DimensionError(f"observable {obs.shape} vs state {rho.matrix.shape}")
        value = np.trace(rho.matrix @ obs)
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)
