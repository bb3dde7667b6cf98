"""Input-averaged QEC pipeline state, cost observables and do-nothing baselines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qsim
from .ansatz import DEFAULT_LAYERS, ParametricCircuit, build_ansatz, instantiate, two_design_states
from .noise import NoiseSpec, build_noise_channel
from .qsim import DensityMatrix, QubitLayout

COST_KINDS = ("fid", "wass", "full")


def hamming_weights(n: int) -> np.ndarray:
    return np.array([bin(b).count("1") for b in range(2 ** n)], dtype=float)


@dataclass(frozen=True, eq=False)
class CostHamiltonian:
    """Diagonal observable on QA with ``|0...0>`` as its unique zero-energy state."""

    kind: str
    n: int
    weights: tuple[float, ...] | None = None
    diagonal: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ValueError(f"cost kind must be one of {COST_KINDS}, got {self.kind!r}")
        n = self.n
        if self.kind == "fid":
            diag = np.ones(2 ** n)
            diag[0] = 0.0
        elif self.kind == "wass":
            diag = hamming_weights(n)
        else:
            w = self.weights
            if w is None:
                w = tuple(1.0 + ell / n for ell in range(n))
                object.__setattr__(self, "weights", w)
            if len(w) != n or min(w) <= 0:
                raise ValueError(f"need {n} positive weights, got {w}")
            bits = (np.arange(2 ** n)[:, None] >> (n - 1 - np.arange(n))) & 1
            diag = bits @ np.asarray(w, dtype=float)
        diag.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal).astype(complex)


@dataclass(frozen=True)
class PipelineSpec:
    layout: QubitLayout
    V: ParametricCircuit
    W: ParametricCircuit
    noise: NoiseSpec

    def __post_init__(self):
        if self.V.num_qubits != self.layout.n:
            raise qsim.DimensionError(f"V acts on {self.V.num_qubits} qubits, QA has {self.layout.n}")
        if self.W.num_qubits != self.layout.total:
            raise qsim.DimensionError(f"W acts on {self.W.num_qubits} qubits, QAB has {self.layout.total}")
        if self.noise.n != self.layout.n:
            raise qsim.DimensionError(f"noise on {self.noise.n} qubits, QA has {self.layout.n}")
        if self.layout.k != 1:
            raise ValueError("the six-element input design covers a single protected qubit only")

    @property
    def two_design(self) -> tuple[np.ndarray, ...]:
        return two_design_states()

    @classmethod
    def default(cls, noise: NoiseSpec | None = None, layers=DEFAULT_LAYERS, layout: QubitLayout | None = None):
        layout = layout or QubitLayout()
        noise = noise or NoiseSpec(n=layout.n)
        v, w = build_ansatz(layout, layers)
        return cls(layout, v, w, noise)


def pipeline_state(
    layout: QubitLayout,
    v_unitary: np.ndarray,
    w_unitary: np.ndarray,
    noise: NoiseSpec,
    v_dagger_unitary: np.ndarray | None = None,
) -> DensityMatrix:
    """Average over the six inputs of ``U† V† R(Phi(V U |0><0| U† V†)) V U``.

    ``v_dagger_unitary`` lets the decoder differ from ``V†`` (split-parameter evaluations).
    """
    n, r = layout.n, layout.r
    decoder = v_unitary.conj().T if v_dagger_unitary is None else v_dagger_unitary
    channel = build_noise_channel(noise)
    start = qsim.pure_state([0] * n)
    total = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for u in two_design_states():
        u_q = qsim.UnitaryGate((0,), u)
        rho = qsim.apply_unitary(start, u_q)
        rho = qsim.apply_unitary(rho, v_unitary)
        rho = qsim.apply_channel(rho, channel)
        if r:
            rho = qsim.extend_with_ancilla(rho, r)
            rho = qsim.apply_unitary(rho, w_unitary)
            rho = qsim.partial_trace(rho, range(n))
        else:
            rho = qsim.apply_unitary(rho, w_unitary)
        rho = qsim.apply_unitary(rho, decoder)
        rho = qsim.apply_unitary(rho, qsim.UnitaryGate((0,), u.conj().T))
        total += rho.matrix
    return DensityMatrix(total / len(two_design_states()))


def averaged_output_state(
    spec: PipelineSpec,
    alpha: Sequence[float],
    beta: Sequence[float],
    alpha_dagger: Sequence[float] | None = None,
) -> DensityMatrix:
    v = instantiate(spec.V, alpha)
    w = instantiate(spec.W, beta)
    v_dag = None if alpha_dagger is None else instantiate(spec.V, alpha_dagger).conj().T
    return pipeline_state(spec.layout, v, w, spec.noise, v_dag)


def cost_value(spec: PipelineSpec, alpha, beta, hamiltonian: CostHamiltonian, alpha_dagger=None) -> float:
    rho = averaged_output_state(spec, alpha, beta, alpha_dagger)
    return qsim.expectation(rho, hamiltonian)


def average_fidelity(spec: PipelineSpec, alpha, beta) -> float:
    return averaged_output_state(spec, alpha, beta).fidelity_with_basis(0)


def _do_nothing_state(noise: NoiseSpec, r: int = 2) -> DensityMatrix:
    layout = QubitLayout(1, noise.n - 1, r)
    dim_qa, dim_all = 2 ** noise.n, 2 ** layout.total
    return pipeline_state(layout, np.eye(dim_qa), np.eye(dim_all), noise)


def baseline_f0(noise: NoiseSpec) -> float:
    """Fidelity on QA with encoder and recovery both the identity."""
    return _do_nothing_state(noise).fidelity_with_basis(0)


def baseline_f0_strong(noise: NoiseSpec) -> float:
    """Same do-nothing pipeline, but only Q is compared with |0>."""
    return qsim.partial_trace(_do_nothing_state(noise), [0]).fidelity_with_basis(0)


def pauli_zero_overlap(noise: NoiseSpec) -> float:
    """``|<0|sigma|0>|**2`` for the noise Pauli."""
    return float(abs(noise.pauli[0, 0]) ** 2)


def baseline_f0_closed_form(noise: NoiseSpec) -> float:
    # the six-state design gives E|<psi|sigma|psi>|^2 = 1/3 for every Pauli
    p, n = noise.p, noise.n
    return (1 - p) + (p / n) * (1 / 3 + (n - 1) * pauli_zero_overlap(noise))


def baseline_f0_strong_closed_form(noise: NoiseSpec) -> float:
    p, n = noise.p, noise.n
    return (1 - p) + (p / n) * (1 / 3 + (n - 1))


def footnote_residual(noise: NoiseSpec) -> float:
    """``F0 - (F0_strong - (n-1)/n p (1 - |<0|sigma|0>|^2))``, zero for this noise family."""
    n, p = noise.n, noise.p
    return baseline_f0(noise) - (baseline_f0_strong(noise) - (n - 1) / n * p * (1 - pauli_zero_overlap(noise)))
