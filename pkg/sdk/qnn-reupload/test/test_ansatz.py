# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

import pytest
import math

from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.quantum.ansatz import (
    AnsatzSpec, LayerKind, ParamVector, PrepKind,
    circuit_depth, describe, forward, forward_batch, init_params, layer_param_slice,
    pad_inputs, param_count, prep_param_slice, probabilities,
)
from qnn.reupload.quantum.qubit import KET_0, HADAMARD, apply, compose, make_rz, make_ry, make_u_gate, prob0, pure_fidelity

import numpy as np


@pytest.mark.parametrize("layer_kind, n_layers, prep, input_dim, expected_params, expected_depth", [
    (LayerKind.UNITARY, 3, PrepKind.NONE, 2, 9, 6),
    (LayerKind.COMPRESSED_UNITARY, 3, PrepKind.NONE, 2, 18, 3),
    (LayerKind.UAT, 3, PrepKind.NONE, 2, 15, 6),
    (LayerKind.UAT, 3, PrepKind.HADAMARD, 2, 15, 7),
    (LayerKind.UAT, 3, PrepKind.TRAINABLE_U, 2, 18, 7),
    (LayerKind.UAT, 1, PrepKind.TRAINABLE_U, 2, 8, 3),
    (LayerKind.UAT, 2, PrepKind.TRAINABLE_U, 2, 13, 5),
    (LayerKind.UAT, 4, PrepKind.TRAINABLE_U, 2, 23, 9),
    (LayerKind.UAT, 5, PrepKind.TRAINABLE_U, 2, 28, 11),
    (LayerKind.UAT, 4, PrepKind.NONE, 2, 20, 8),
    (LayerKind.UAT, 2, PrepKind.NONE, 2, 10, 4),
    (LayerKind.UNITARY, 2, PrepKind.NONE, 4, 6, 6),
    (LayerKind.COMPRESSED_UNITARY, 2, PrepKind.NONE, 4, 24, 4),
    (LayerKind.UAT, 2, PrepKind.NONE, 4, 16, 4),
])
def test_param_count_and_depth(layer_kind, n_layers, prep, input_dim, expected_params, expected_depth):
    spec = AnsatzSpec(layer_kind, n_layers, prep, input_dim)
    assert param_count(spec) == expected_params
    assert circuit_depth(spec) == expected_depth


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        AnsatzSpec(LayerKind.UAT, 0)
    with pytest.raises(InvalidArgumentError):
        AnsatzSpec(LayerKind.UAT, 2, input_dim=0)
    with pytest.raises(InvalidArgumentError):
        AnsatzSpec.from_dict({'n_layers': 2})
    with pytest.raises(InvalidArgumentError):
        AnsatzSpec.from_dict({'layer_kind': 'nonsense', 'n_layers': 2})


def test_spec_dict_round_trip():
    spec = AnsatzSpec(LayerKind.COMPRESSED_UNITARY, 4, PrepKind.HADAMARD, 5)
    assert AnsatzSpec.from_dict(spec.to_dict()) == spec
    assert spec.to_dict() == {'layer_kind': 'compressed_unitary', 'n_layers': 4, 'prep': 'hadamard', 'input_dim': 5}


def test_param_slices_partition_the_vector():
    spec = AnsatzSpec(LayerKind.UAT, 3, PrepKind.TRAINABLE_U)
    assert prep_param_slice(spec) == slice(0, 3)
    assert [layer_param_slice(spec, i) for i in range(3)] == [slice(3, 8), slice(8, 13), slice(13, 18)]
    with pytest.raises(InvalidArgumentError):
        layer_param_slice(spec, 3)


def test_init_params_are_seeded_and_bounded():
    spec = AnsatzSpec(LayerKind.UAT, 5, PrepKind.TRAINABLE_U)
    first = init_params(spec, np.random.default_rng(42))
    second = init_params(spec, np.random.default_rng(42))
    assert first == second
    assert len(first) == 28
    assert np.all(np.abs(first.values) <= math.pi)


def test_param_vector_rejects_wrong_length_and_non_finite():
    spec = AnsatzSpec(LayerKind.UNITARY, 2)
    with pytest.raises(InvalidArgumentError):
        ParamVector(np.zeros(5), spec)
    with pytest.raises(InvalidArgumentError):
        ParamVector([0.0, float('nan')])


def test_pad_inputs():
    spec = AnsatzSpec(LayerKind.UAT, 1, input_dim=4)
    padded = pad_inputs(spec, [[1.0, 2.0, 3.0, 4.0]])
    assert padded.tolist() == [[1.0, 2.0, 3.0, 4.0, 0.0, 0.0]]
    with pytest.raises(InvalidArgumentError):
        pad_inputs(spec, [[1.0, 2.0]])
    with pytest.raises(InvalidArgumentError):
        pad_inputs(spec, [[1.0, 2.0, float('inf'), 4.0]])


def test_unitary_layer_matches_gate_products():
    spec = AnsatzSpec(LayerKind.UNITARY, 2)
    params = ParamVector([0.3, -0.2, 1.1, -0.7, 0.5, 0.9], spec)
    x = np.array([0.4, -0.6])
    data_gate = make_u_gate(0.4, -0.6, 0.0)
    expected = apply(compose(make_u_gate(-0.7, 0.5, 0.9), data_gate, make_u_gate(0.3, -0.2, 1.1), data_gate), KET_0)
    assert np.allclose(forward(spec, params, x).amplitudes, expected.amplitudes, atol=1e-12)


def test_compressed_layer_uses_affine_angles():
    spec = AnsatzSpec(LayerKind.COMPRESSED_UNITARY, 1)
    theta = np.array([0.1, 0.2, 0.3])
    omega = np.array([1.5, -0.5, 2.0])
    params = ParamVector(np.concatenate([theta, omega]), spec)
    x = np.array([0.8, -0.3])
    angles = theta + omega * np.array([0.8, -0.3, 0.0])
    expected = apply(make_u_gate(*angles), KET_0)
    assert np.allclose(forward(spec, params, x).amplitudes, expected.amplitudes, atol=1e-12)


def test_uat_layer_matches_gate_products():
    spec = AnsatzSpec(LayerKind.UAT, 1, PrepKind.HADAMARD)
    omega = np.array([0.7, -1.2, 0.4])
    alpha, phi = 0.25, -0.8
    params = ParamVector(np.concatenate([omega, [alpha, phi]]), spec)
    x = np.array([0.5, 0.9])
    z_angle = 2.0 * (omega[0] * 0.5 + omega[1] * 0.9) + 2.0 * alpha
    expected = apply(compose(make_ry(2.0 * phi), make_rz(z_angle), HADAMARD), KET_0)
    assert np.allclose(forward(spec, params, x).amplitudes, expected.amplitudes, atol=1e-12)


def test_single_uat_layer_from_ket0_depends_only_on_phi():
    spec = AnsatzSpec(LayerKind.UAT, 1)
    rng = np.random.default_rng(0)
    for _ in range(10):
        values = rng.uniform(-math.pi, math.pi, size=5)
        x = rng.uniform(-1, 1, size=2)
        assert prob0(forward(spec, ParamVector(values), x)) == pytest.approx(math.cos(values[4]) ** 2, abs=1e-12)


def test_hadamard_prep_with_zero_uat_params_gives_even_split():
    spec = AnsatzSpec(LayerKind.UAT, 3, PrepKind.HADAMARD)
    params = ParamVector(np.zeros(15), spec)
    rng = np.random.default_rng(21)
    for x in rng.uniform(-1, 1, size=(50, 2)):
        assert prob0(forward(spec, params, x)) == pytest.approx(0.5, abs=1e-12)


def test_swapping_layers_changes_the_output():
    spec = AnsatzSpec(LayerKind.UNITARY, 3)
    rng = np.random.default_rng(23)
    first, last = layer_param_slice(spec, 0), layer_param_slice(spec, 2)
    changed = 0
    for _ in range(50):
        values = init_params(spec, rng).values.copy()
        swapped = values.copy()
        swapped[first], swapped[last] = values[last], values[first]
        x = rng.uniform(-1, 1, size=2)
        fidelity = pure_fidelity(forward(spec, ParamVector(values, spec), x), forward(spec, ParamVector(swapped, spec), x))
        if fidelity < 1.0 - 1e-6:
            changed += 1
    assert changed >= 45


def test_chunking_for_four_dimensional_inputs():
    spec = AnsatzSpec(LayerKind.UNITARY, 1, input_dim=4)
    params = ParamVector([0.2, 0.4, -0.6], spec)
    x = np.array([0.1, 0.2, 0.3, 0.4])
    expected = apply(compose(make_u_gate(0.2, 0.4, -0.6), make_u_gate(0.4, 0.0, 0.0), make_u_gate(0.1, 0.2, 0.3)), KET_0)
    assert np.allclose(forward(spec, params, x).amplitudes, expected.amplitudes, atol=1e-12)


def test_forward_batch_agrees_with_forward():
    spec = AnsatzSpec(LayerKind.UAT, 3, PrepKind.TRAINABLE_U)
    rng = np.random.default_rng(9)
    params = init_params(spec, rng)
    X = rng.uniform(-1, 1, size=(20, 2))
    batch = forward_batch(spec, params, X)
    for i in range(20):
        assert np.allclose(batch[i], forward(spec, params, X[i]).amplitudes, atol=1e-12)
    assert np.allclose(np.sum(np.abs(batch) ** 2, axis=1), 1.0)
    assert np.allclose(probabilities(spec, params, X), np.abs(batch[:, 0]) ** 2)


def test_forward_rejects_bad_shapes():
    spec = AnsatzSpec(LayerKind.UAT, 1)
    params = ParamVector(np.zeros(5), spec)
    with pytest.raises(InvalidArgumentError):
        forward(spec, params, [[0.0, 0.0]])
    with pytest.raises(InvalidArgumentError):
        forward(spec, np.zeros(4), [0.0, 0.0])


def test_describe_lists_gates_in_order():
    assert describe(AnsatzSpec(LayerKind.UAT, 2, PrepKind.HADAMARD)) == (
        "H -> Rz(2*omega1.x+2*alpha1) -> Ry(2*phi1) -> Rz(2*omega2.x+2*alpha2) -> Ry(2*phi2)")
    assert describe(AnsatzSpec(LayerKind.UNITARY, 1)) == "U(x) -> U(phi1)"
