"""Layered parametric circuits for the encoder and the recovery unitary.

Every parameterized gate is ``exp(-i theta G)`` with ``G`` an involution:
either a single-qubit Pauli, or a controlled Pauli ``P_c (x) sigma + (1 - P_c) (x) 1``
where ``P_c`` projects the controls onto their activation pattern.  Because
``G**2 = 1`` the two-point shift rule with offsets of pi/4 is exact for each
gate, and ``theta = pi/2`` gives the plain controlled flip up to a global
phase of ``-i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from ._exact_angles import BIT_FLIP_BETA, PHASE_FLIP_BETA
from .qsim import PAULI, QubitLayout, embed

AXES = ("x", "y", "z")
LOCAL_TRIPLE = ("z", "y", "z")
# searches with 2-5 recovery layers never reached the exact recovery; six hold it
DEFAULT_LAYERS = (2, 6)


@dataclass(frozen=True)
class Rotation:
    target: int
    axis: str
    slot: int
    controls: tuple[int, ...] = ()
    polarity: tuple[int, ...] = ()

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"generator axis must be one of {AXES}, got {self.axis!r}")
        if len(self.polarity) != len(self.controls):
            raise ValueError("one polarity per control qubit")
        if self.target in self.controls:
            raise ValueError("target cannot also be a control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def generator(self) -> np.ndarray:
        sigma = PAULI[self.axis]
        if not self.controls:
            return sigma
        dim_c = 2 ** len(self.controls)
        active = int("".join(map(str, self.polarity)), 2)
        proj = np.zeros((dim_c, dim_c))
        proj[active, active] = 1.0
        return np.kron(proj, sigma) + np.kron(np.eye(dim_c) - proj, PAULI["i"])

    def matrix(self, theta: float) -> np.ndarray:
        """Local matrix on ``self.qubits`` (controls first)."""
        gen = self.generator()
        return np.cos(theta) * np.eye(gen.shape[0]) - 1j * np.sin(theta) * gen

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "axis": self.axis,
            "slot": self.slot,
            "controls": list(self.controls),
            "polarity": list(self.polarity),
        }


@dataclass(frozen=True)
class ParametricCircuit:
    num_qubits: int
    gates: tuple[Rotation, ...]
    param_count: int
    layers: int = 0
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        used = {g.slot for g in self.gates}
        if used != set(range(self.param_count)):
            raise ValueError("every parameter slot must be bound to at least one gate")
        for g in self.gates:
            if any(q < 0 or q >= self.num_qubits for q in g.qubits):
                raise IndexError(f"gate {g} leaves the {self.num_qubits}-qubit register")

    def slot_gates(self, slot: int) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.slot == slot]

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "num_qubits": self.num_qubits,
            "param_count": self.param_count,
            "layers": self.layers,
            "gates": [g.to_dict() for g in self.gates],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ParametricCircuit":
        doc = json.loads(text)
        gates = tuple(
            Rotation(d["target"], d["axis"], d["slot"], tuple(d["controls"]), tuple(d["polarity"]))
            for d in doc["gates"]
        )
        return cls(doc["num_qubits"], gates, doc["param_count"], doc.get("layers", 0), doc.get("name", ""))


def layered_circuit(num_qubits: int, layers: int, ring_axis: str = "x", name: str = "") -> ParametricCircuit:
    """Z-Y-Z on every qubit, then a ring of controlled rotations i -> i+1.

    Controls activate on |1> in even layers and on |0> in odd layers.
    """
    if layers < 1:
        raise ValueError("need at least one layer")
    gates = []
    slot = 0
    for layer in range(layers):
        for q in range(num_qubits):
            for axis in LOCAL_TRIPLE:
                gates.append(Rotation(q, axis, slot))
                slot += 1
        if num_qubits > 1:
            polarity = 1 if layer % 2 == 0 else 0
            for q in range(num_qubits):
                gates.append(Rotation((q + 1) % num_qubits, ring_axis, slot, (q,), (polarity,)))
                slot += 1
    return ParametricCircuit(num_qubits, tuple(gates), slot, layers, name)


def build_ansatz(
    layout: QubitLayout,
    layers: int | tuple[int, int] = DEFAULT_LAYERS,
    ring_axis: str = "x",
) -> tuple[ParametricCircuit, ParametricCircuit]:
    """Encoder ``V`` on QA and recovery ``W`` on QAB."""
    v_layers, w_layers = (layers, layers) if isinstance(layers, int) else layers
    v = layered_circuit(layout.n, v_layers, ring_axis, name="V")
    w = layered_circuit(layout.total, w_layers, ring_axis, name="W")
    return v, w


def exact_code_params(noise_kind: str, layout: QubitLayout | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Angles for the default ansatz that reproduce the repetition code.

    ``alpha`` turns the first encoder ring into ``CNOT(1->2) CNOT(0->1)`` (theta = pi/2
    gives each flip up to a phase ``-i``); for phase flips the second layer's local
    triples become Hadamards, ``H ~ Ry(pi/4) Rz(pi/2)``.  ``beta`` is stored.
    """
    layout = layout or QubitLayout()
    if (layout.k, layout.n_minus_k, layout.r) != (1, 2, 2):
        raise ValueError(f"exact code angles exist for the (1, 2, 2) layout only, got {layout}")
    if noise_kind == "bit_flip":
        beta = BIT_FLIP_BETA
    elif noise_kind == "phase_flip":
        beta = PHASE_FLIP_BETA
    else:
        raise ValueError(f"no exact code for noise kind {noise_kind!r}")
    v, w = build_ansatz(layout, DEFAULT_LAYERS)
    alpha = np.zeros(v.param_count)
    per_layer = 4 * layout.n
    ring = 3 * layout.n
    alpha[ring] = alpha[ring + 1] = np.pi / 2
    if noise_kind == "phase_flip":
        for q in range(layout.n):
            z_first = per_layer + 3 * q
            alpha[z_first] = np.pi / 2
            alpha[z_first + 1] = np.pi / 4
    beta = np.array(beta)
    assert beta.shape == (w.param_count,)
    return alpha, beta


def gate_unitaries(circ: ParametricCircuit, angles: Sequence[float]) -> list[tuple[tuple[int, ...], np.ndarray]]:
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (circ.param_count,):
        raise ValueError(f"{circ.name or 'circuit'} expects {circ.param_count} angles, got {angles.shape}")
    return [(g.qubits, g.matrix(angles[g.slot])) for g in circ.gates]


def instantiate(circ: ParametricCircuit, angles: Sequence[float]) -> np.ndarray:
    """Full-register unitary, gates applied in list order."""
    dim = 2 ** circ.num_qubits
    u = np.eye(dim, dtype=complex)
    for qubits, m in gate_unitaries(circ, angles):
        u = embed(m, qubits, circ.num_qubits) @ u
    return u


def two_design_states() -> tuple[np.ndarray, ...]:
    """The six single-qubit gates whose images of |0> form the octahedron states."""
    x, y = PAULI["x"], PAULI["y"]
    c = np.cos(np.pi / 4)

    def rot(sign, sigma):
        return c * np.eye(2) + sign * 1j * c * sigma

    return (np.eye(2, dtype=complex), x.copy(), rot(+1, x), rot(-1, x), rot(+1, y), rot(-1, y))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(a[idx]) < atol:
        return False
    phase = a[idx] / b[idx]
    return bool(abs(abs(phase) - 1) < atol and np.allclose(a, phase * b, atol=atol))


def cnot(control: int, target: int, num_qubits: int, polarity: int = 1) -> np.ndarray:
    return multi_controlled_x((control,), (polarity,), target, num_qubits)


def multi_controlled_x(controls, polarity, target, num_qubits) -> np.ndarray:
    dim_c = 2 ** len(controls)
    active = int("".join(map(str, polarity)), 2)
    local = np.eye(2 * dim_c, dtype=complex)
    local[2 * active : 2 * active + 2, 2 * active : 2 * active + 2] = PAULI["x"]
    return embed(local, tuple(controls) + (target,), num_qubits)


def hadamards(qubits, num_qubits) -> np.ndarray:
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    return reduce(lambda acc, q: embed(h, [q], num_qubits) @ acc, qubits, np.eye(2 ** num_qubits, dtype=complex))


def repetition_encoder(noise_kind: str = "bit_flip") -> np.ndarray:
    """Chain encoder ``CNOT(1->2) CNOT(0->1)``; Hadamards on all three qubits afterwards for phase flips."""
    u = cnot(1, 2, 3) @ cnot(0, 1, 3)
    if noise_kind == "phase_flip":
        u = hadamards(range(3), 3) @ u
    elif noise_kind != "bit_flip":
        raise ValueError(f"no exact code for noise kind {noise_kind!r}")
    return u


def repetition_recovery(noise_kind: str = "bit_flip") -> np.ndarray:
    """Syndrome copy into B followed by syndrome-conditioned flips, for the chain encoder.

    In the chain code the codewords are |000> and |111>; B0 <- q0 xor q1 and
    B1 <- q1 xor q2, then X on q0 when B = 10, on q1 when B = 11, on q2 when B = 01.
    """
    n = 5
    u = np.eye(32, dtype=complex)
    for c, t in ((0, 3), (1, 3), (1, 4), (2, 4)):
        u = cnot(c, t, n) @ u
    for pattern, target in (((1, 0), 0), ((1, 1), 1), ((0, 1), 2)):
        u = multi_controlled_x((3, 4), pattern, target, n) @ u
    if noise_kind == "phase_flip":
        h = hadamards(range(3), n)
        u = h @ u @ h
    elif noise_kind != "bit_flip":
        raise ValueError(f"no exact code for noise kind {noise_kind!r}")
    return u
