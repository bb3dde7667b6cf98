import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wassqec import qsim
from wassqec.ansatz import (
    DEFAULT_LAYERS,
    ParametricCircuit,
    Rotation,
    build_ansatz,
    cnot,
    equal_up_to_phase,
    exact_code_params,
    gate_unitaries,
    instantiate,
    repetition_encoder,
    repetition_recovery,
    two_design_states,
)
from wassqec.cost import PipelineSpec, average_fidelity, pipeline_state
from wassqec.noise import NoiseSpec
from wassqec.qsim import QubitLayout

LAYOUT = QubitLayout(1, 2, 2)


def test_single_layer_counts():
    v, w = build_ansatz(LAYOUT, 1)
    assert v.param_count == 3 * 3 + 3
    assert w.param_count == 5 * 3 + 5
    assert v.num_qubits == 3 and w.num_qubits == 5


def test_default_counts():
    v, w = build_ansatz(LAYOUT)
    assert (v.layers, w.layers) == DEFAULT_LAYERS
    assert v.param_count == 12 * DEFAULT_LAYERS[0]
    assert w.param_count == 20 * DEFAULT_LAYERS[1]


def test_layer_structure():
    v, _ = build_ansatz(LAYOUT, 2)
    axes = [g.axis for g in v.gates[:9]]
    assert axes == ["z", "y", "z"] * 3
    ring1 = v.gates[9:12]
    ring2 = v.gates[21:24]
    assert [(g.controls, g.target) for g in ring1] == [((0,), 1), ((1,), 2), ((2,), 0)]
    assert all(g.polarity == (1,) for g in ring1)
    assert all(g.polarity == (0,) for g in ring2)
    assert all(len(v.slot_gates(j)) == 1 for j in range(v.param_count))


def test_zero_layers_rejected():
    with pytest.raises(ValueError):
        build_ansatz(LAYOUT, 0)


def test_all_zero_angles_give_identity():
    v, w = build_ansatz(LAYOUT)
    assert np.allclose(instantiate(v, np.zeros(v.param_count)), np.eye(8))
    assert np.allclose(instantiate(w, np.zeros(w.param_count)), np.eye(32))


def test_single_x_slot_flips_target():
    circ = ParametricCircuit(2, (Rotation(1, "x", 0),), 1)
    u = instantiate(circ, [np.pi / 2])
    assert equal_up_to_phase(u, qsim.embed(qsim.PAULI["x"], [1], 2))


def test_controlled_rotation_at_half_pi_is_controlled_flip():
    for polarity in (0, 1):
        g = Rotation(0, "x", 0, (2,), (polarity,))
        circ = ParametricCircuit(3, (g,), 1)
        u = instantiate(circ, [np.pi / 2])
        expected = cnot(2, 0, 3, polarity)
        # -i on the active subspace only: equal to CNOT up to a controlled phase
        assert np.allclose(np.abs(u), np.abs(expected))
        active = [i for i in range(8) if ((i >> 0) & 1) == polarity]
        assert np.allclose(u[np.ix_(active, active)], -1j * expected[np.ix_(active, active)])


def test_generator_is_involution():
    for g in (Rotation(0, "y", 0), Rotation(1, "z", 0, (0,), (0,)), Rotation(2, "x", 0, (0, 1), (1, 0))):
        gen = g.generator()
        assert np.allclose(gen @ gen, np.eye(gen.shape[0]))
        assert np.allclose(gen, gen.conj().T)


def test_angle_length_checked():
    v, _ = build_ansatz(LAYOUT)
    with pytest.raises(ValueError):
        instantiate(v, np.zeros(v.param_count + 1))


def test_unbound_slot_rejected():
    with pytest.raises(ValueError):
        ParametricCircuit(1, (Rotation(0, "x", 0),), 2)


def test_gate_outside_register_rejected():
    with pytest.raises(IndexError):
        ParametricCircuit(2, (Rotation(2, "x", 0),), 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_instantiate_is_unitary(seed):
    v, w = build_ansatz(LAYOUT)
    rng = np.random.default_rng(seed)
    for circ in (v, w):
        u = instantiate(circ, rng.uniform(0, 2 * np.pi, circ.param_count))
        assert np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_slot_changes_touch_only_bound_gates(seed):
    v, _ = build_ansatz(LAYOUT)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0, 2 * np.pi, v.param_count)
    j = int(rng.integers(v.param_count))
    moved = theta.copy()
    moved[j] += rng.uniform(0.1, 1.0)
    before, after = gate_unitaries(v, theta), gate_unitaries(v, moved)
    changed = {i for i, ((_, a), (_, b)) in enumerate(zip(before, after)) if not np.allclose(a, b)}
    assert changed == set(v.slot_gates(j))


def test_json_round_trip():
    v, w = build_ansatz(LAYOUT)
    for circ in (v, w):
        doc = json.loads(circ.to_json())
        assert {"num_qubits", "param_count", "gates"} <= set(doc)
        assert {"target", "axis", "slot", "controls", "polarity"} == set(doc["gates"][0])
        back = ParametricCircuit.from_json(circ.to_json())
        assert back.gates == circ.gates and back.param_count == circ.param_count


class TestTwoDesign:
    def test_fixed_order(self):
        gates = two_design_states()
        assert len(gates) == 6
        x, y = qsim.PAULI["x"], qsim.PAULI["y"]
        expected = [np.eye(2), x] + [
            np.cos(np.pi / 4) * np.eye(2) + s * 1j * np.sin(np.pi / 4) * p for p in (x, y) for s in (1, -1)
        ]
        for g, e in zip(gates, expected):
            assert np.allclose(g, e)

    def test_images_of_zero(self):
        r = 1 / np.sqrt(2)
        images = [g[:, 0] for g in two_design_states()]
        expected = [[1, 0], [0, 1], [r, 1j * r], [r, -1j * r], [r, -r], [r, r]]
        for img, e in zip(images, expected):
            assert np.allclose(img, e)

    def test_average_projector_is_maximally_mixed(self):
        avg = sum(np.outer(g[:, 0], g[:, 0].conj()) for g in two_design_states()) / 6
        assert np.allclose(avg, np.eye(2) / 2)

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    def test_second_moment(self, axis):
        sigma = qsim.PAULI[axis]
        vals = [abs(g[:, 0].conj() @ sigma @ g[:, 0]) ** 2 for g in two_design_states()]
        assert abs(np.mean(vals) - 1 / 3) < 1e-14


class TestExactCode:
    @pytest.mark.parametrize("kind", ["bit_flip", "phase_flip"])
    def test_encoder_matches_two_flip_encoder(self, kind):
        v, _ = build_ansatz(LAYOUT)
        alpha, _ = exact_code_params(kind)
        assert equal_up_to_phase(instantiate(v, alpha), repetition_encoder(kind))

    def test_bit_flip_encoder_is_two_cnots(self):
        basis = np.eye(8)
        u = repetition_encoder("bit_flip")
        assert np.allclose(u @ basis[0], basis[0])
        assert np.allclose(u @ basis[4], basis[7])

    @pytest.mark.parametrize("kind", ["bit_flip", "phase_flip"])
    @pytest.mark.parametrize("p", [0.0, 0.4, 0.8, 1.0])
    def test_pipeline_fidelity_one(self, kind, p):
        spec = PipelineSpec.default(NoiseSpec(kind, p))
        alpha, beta = exact_code_params(kind)
        assert abs(average_fidelity(spec, alpha, beta) - 1) < 1e-9

    @pytest.mark.parametrize("kind", ["bit_flip", "phase_flip"])
    @pytest.mark.parametrize("p", [0.0, 0.8])
    def test_reference_circuits_correct(self, kind, p):
        rho = pipeline_state(LAYOUT, repetition_encoder(kind), repetition_recovery(kind), NoiseSpec(kind, p))
        assert abs(rho.fidelity_with_basis(0) - 1) < 1e-12

    def test_unsupported_layout(self):
        with pytest.raises(ValueError):
            exact_code_params("bit_flip", QubitLayout(1, 2, 1))

    def test_unsupported_noise(self):
        with pytest.raises(ValueError):
            exact_code_params("y_flip")
