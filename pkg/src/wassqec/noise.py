"""Single-qubit Pauli noise spread uniformly over the code register."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qsim import PAULI, KrausChannel, embed

NOISE_AXIS = {"bit_flip": "x", "phase_flip": "z", "y_flip": "y"}


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "phase_flip"
    p: float = 0.8
    n: int = 3

    def __post_init__(self):
        if self.kind not in NOISE_AXIS:
            raise ValueError(f"unknown noise kind {self.kind!r}; choose from {sorted(NOISE_AXIS)}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise probability must lie in [0, 1], got {self.p}")
        if self.n < 1:
            raise ValueError("noise needs at least one qubit")

    @property
    def pauli(self) -> np.ndarray:
        return PAULI[NOISE_AXIS[self.kind]]


def build_noise_channel(spec: NoiseSpec) -> KrausChannel:
    """No error with probability 1-p, otherwise the Pauli hits one of the n qubits uniformly."""
    dim = 2 ** spec.n
    ops = [np.sqrt(1 - spec.p) * np.eye(dim, dtype=complex)]
    for q in range(spec.n):
        ops.append(np.sqrt(spec.p / spec.n) * embed(spec.pauli, [q], spec.n))
    return KrausChannel(tuple(ops))
