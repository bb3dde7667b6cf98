"""Parameter-shift gradients and momentum gradient descent over (alpha, beta)."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from .ansatz import ParametricCircuit
from .cost import CostHamiltonian, PipelineSpec, cost_value
from .engine import Evaluator

SHIFT = np.pi / 4


@dataclass(frozen=True)
class OptimizerConfig:
    learning_rate: float = 0.05
    momentum: float = 0.9
    max_iters: int = 2000
    convergence_window: int = 10
    cost_tolerance: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0 <= self.momentum < 1:
            raise ValueError(f"momentum must lie in [0, 1), got {self.momentum}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.convergence_window < 1:
            raise ValueError(f"convergence_window must be at least 1, got {self.convergence_window}")
        if not self.cost_tolerance > 0:
            raise ValueError(f"cost_tolerance must be positive, got {self.cost_tolerance}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class RunRecord:
    seed: int
    cost_kind: str
    cost_history: list[float]
    final_alpha: np.ndarray
    final_beta: np.ndarray
    final_fidelity: float
    iterations: int
    converged: bool
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    @property
    def final_cost(self) -> float:
        return self.cost_history[-1]

    @property
    def best_history(self) -> np.ndarray:
        return np.minimum.accumulate(self.cost_history)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "cost_kind": self.cost_kind,
            "iterations": self.iterations,
            "converged": self.converged,
            "final_fidelity": self.final_fidelity,
            "final_cost": self.final_cost,
            "cost_history": list(self.cost_history),
            "final_alpha": self.final_alpha.tolist(),
            "final_beta": self.final_beta.tolist(),
            "config": asdict(self.config),
        }


class CountingCost:
    """Reference pipeline cost that counts how often it is evaluated."""

    def __init__(self, spec: PipelineSpec, hamiltonian: CostHamiltonian):
        self.spec = spec
        self.hamiltonian = hamiltonian
        self.calls = 0

    def __call__(self, spec: PipelineSpec, alpha, beta, alpha_dagger=None) -> float:
        self.calls += 1
        return cost_value(spec, alpha, beta, self.hamiltonian, alpha_dagger)


CostFn = Callable[..., float]


def _isolate(circ: ParametricCircuit, angles: np.ndarray, j: int, gate: int):
    """Circuit and angles in which ``gate`` alone reads the returned slot index.

    A slot shared by several gates is split: ``gate`` is rebound to a new last slot.
    """
    if len(circ.slot_gates(j)) == 1:
        return circ, angles, j
    gates = list(circ.gates)
    gates[gate] = replace(gates[gate], slot=circ.param_count)
    split = replace(circ, gates=tuple(gates), param_count=circ.param_count + 1)
    return split, np.append(angles, angles[j]), circ.param_count


def _shifted(angles: np.ndarray, slot: int, delta: float) -> np.ndarray:
    out = angles.copy()
    out[slot] += delta
    return out


def _check_slot(circ: ParametricCircuit, j: int) -> list[int]:
    if not 0 <= j < circ.param_count:
        raise IndexError(f"slot {j} out of range for {circ.param_count} parameters")
    return circ.slot_gates(j)


def _reference(hamiltonian, evaluate):
    if evaluate is None:
        return lambda s, a, b, ad=None: cost_value(s, a, b, hamiltonian, ad)
    return evaluate


def grad_beta(spec: PipelineSpec, alpha, beta, hamiltonian: CostHamiltonian, j: int, evaluate: CostFn | None = None) -> float:
    """``C(beta_j + pi/4) - C(beta_j - pi/4)``, summed over every gate bound to slot ``j``."""
    evaluate = _reference(hamiltonian, evaluate)
    beta = np.asarray(beta, dtype=float)
    total = 0.0
    for gate in _check_slot(spec.W, j):
        w, b, slot = _isolate(spec.W, beta, j, gate)
        shifted = spec if w is spec.W else replace(spec, W=w)
        total += evaluate(shifted, alpha, _shifted(b, slot, SHIFT)) - evaluate(shifted, alpha, _shifted(b, slot, -SHIFT))
    return total


def grad_alpha(spec: PipelineSpec, alpha, beta, hamiltonian: CostHamiltonian, j: int, evaluate: CostFn | None = None) -> float:
    """Four-term rule: shift the copy of ``alpha_j`` in V, then the copy in V†."""
    evaluate = _reference(hamiltonian, evaluate)
    alpha = np.asarray(alpha, dtype=float)
    total = 0.0
    for gate in _check_slot(spec.V, j):
        v, a, slot = _isolate(spec.V, alpha, j, gate)
        shifted = spec if v is spec.V else replace(spec, V=v)
        up, down = _shifted(a, slot, SHIFT), _shifted(a, slot, -SHIFT)
        total += evaluate(shifted, up, beta, a) - evaluate(shifted, down, beta, a)
        total += evaluate(shifted, a, beta, up) - evaluate(shifted, a, beta, down)
    return total


def random_angles(spec: PipelineSpec, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(0.0, 2 * np.pi, spec.V.param_count)
    beta = rng.uniform(0.0, 2 * np.pi, spec.W.param_count)
    return alpha, beta


def descend(
    spec: PipelineSpec,
    hamiltonian: CostHamiltonian,
    config: OptimizerConfig,
    init: tuple[np.ndarray, np.ndarray] | None = None,
    evaluator: Evaluator | None = None,
) -> RunRecord:
    """Momentum descent ``v <- mu v - eta grad C``, ``theta <- theta + v``.

    Stops once the best cost seen has improved by less than ``cost_tolerance``
    over the last ``convergence_window`` iterations, or after ``max_iters``.
    """
    ev = evaluator or Evaluator(spec, hamiltonian)
    if ev.spec is not spec or ev.hamiltonian is not hamiltonian:
        raise ValueError("evaluator was built for a different pipeline or cost")
    alpha, beta = random_angles(spec, config.seed) if init is None else init
    theta = np.concatenate([np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)])
    split = spec.V.param_count

    velocity = np.zeros_like(theta)
    cost, ga, gb = ev.value_and_grad(theta[:split], theta[split:])
    history = [cost]
    best = [cost]
    converged = False
    window = config.convergence_window
    for it in range(1, config.max_iters + 1):
        velocity = config.momentum * velocity - config.learning_rate * np.concatenate([ga, gb])
        theta = theta + velocity
        cost, ga, gb = ev.value_and_grad(theta[:split], theta[split:])
        history.append(cost)
        best.append(min(best[-1], cost))
        if it >= window and best[it - window] - best[it] < config.cost_tolerance:
            converged = True
            break

    alpha, beta = theta[:split], theta[split:]
    return RunRecord(
        seed=config.seed,
        cost_kind=hamiltonian.kind,
        cost_history=history,
        final_alpha=alpha,
        final_beta=beta,
        final_fidelity=float(np.clip(ev.fidelity(alpha, beta), 0.0, 1.0)),
        iterations=len(history) - 1,
        converged=converged,
        config=config,
    )
