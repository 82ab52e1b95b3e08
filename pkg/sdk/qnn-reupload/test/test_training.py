# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

import pytest
import math

from qnn.reupload.data.circle import gen_circle
from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.quantum.ansatz import AnsatzSpec, LayerKind, ParamVector, PrepKind, forward, init_params, param_count
from qnn.reupload.quantum.qubit import pure_fidelity
from qnn.reupload.quantum.training import (
    ClassifierConfig, GradientMode, OptimizerKind, TrainConfig, TrainReport,
    dataset_accuracy, dataset_loss, gradient, label_state, predict, predict_batch, sample_loss, train,
)

import numpy as np


ALL_SPECS = [
    AnsatzSpec(LayerKind.UNITARY, 2),
    AnsatzSpec(LayerKind.COMPRESSED_UNITARY, 2),
    AnsatzSpec(LayerKind.UAT, 2),
    AnsatzSpec(LayerKind.UAT, 2, PrepKind.HADAMARD),
    AnsatzSpec(LayerKind.UAT, 3, PrepKind.TRAINABLE_U),
    AnsatzSpec(LayerKind.COMPRESSED_UNITARY, 1, PrepKind.TRAINABLE_U, input_dim=4),
]


def small_dataset(n=12, dim=2, seed=0):
    rng = np.random.default_rng(seed)
    features = rng.uniform(-1, 1, size=(n, dim))
    labels = (np.sum(features ** 2, axis=1) < 0.5).astype(int)
    return LabeledDataset(features, labels)


def test_label_states():
    assert label_state(0).a0 == 1.0
    assert label_state(1).a1 == 1.0
    with pytest.raises(InvalidArgumentError):
        label_state(2)


def test_sample_loss_bounds():
    spec = AnsatzSpec(LayerKind.UAT, 2)
    params = init_params(spec, np.random.default_rng(1))
    for x in ([0.0, 0.0], [0.5, -0.5], [1.0, 1.0]):
        for label in (0, 1):
            assert 0.0 <= sample_loss(spec, params, x, label) <= 1.0


def test_sample_losses_of_both_labels_sum_to_one():
    spec = AnsatzSpec(LayerKind.UNITARY, 2)
    params = init_params(spec, np.random.default_rng(2))
    x = [0.3, 0.1]
    assert sample_loss(spec, params, x, 0) + sample_loss(spec, params, x, 1) == pytest.approx(1.0)


def test_dataset_loss_is_sum_of_sample_losses():
    spec = AnsatzSpec(LayerKind.UAT, 2, PrepKind.HADAMARD)
    data = small_dataset()
    params = init_params(spec, np.random.default_rng(3))
    expected = sum(sample_loss(spec, params, x, int(y)) for x, y in zip(data.features, data.labels))
    assert dataset_loss(spec, params, data) == pytest.approx(expected, abs=1e-12)


def test_dataset_loss_ignores_row_order():
    spec = AnsatzSpec(LayerKind.UAT, 3, PrepKind.TRAINABLE_U)
    data = small_dataset(n=30, seed=8)
    params = init_params(spec, np.random.default_rng(9))
    order = np.random.default_rng(10).permutation(len(data))
    shuffled = LabeledDataset(data.features[order], data.labels[order])
    assert dataset_loss(spec, params, shuffled) == pytest.approx(dataset_loss(spec, params, data), abs=1e-9)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=repr)
def test_analytic_gradient_matches_finite_differences(spec):
    data = small_dataset(dim=spec.input_dim)
    params = init_params(spec, np.random.default_rng(4))
    analytic = gradient(spec, params, data, GradientMode.ANALYTIC)
    numeric = gradient(spec, params, data, GradientMode.FINITE_DIFFERENCE, fd_step=1e-5)
    assert analytic.shape == (param_count(spec),)
    assert np.max(np.abs(analytic - numeric)) / np.max(np.abs(numeric)) <= 1e-5


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("prep", list(PrepKind))
@pytest.mark.parametrize("layer_kind", list(LayerKind))
def test_analytic_gradient_matches_finite_differences_on_random_configs(layer_kind, prep, seed):
    spec = AnsatzSpec(layer_kind, 2, prep)
    data = small_dataset(n=10, seed=seed)
    params = init_params(spec, np.random.default_rng(100 + seed))
    analytic = gradient(spec, params, data, GradientMode.ANALYTIC)
    numeric = gradient(spec, params, data, GradientMode.FINITE_DIFFERENCE, fd_step=1e-5)
    assert np.max(np.abs(analytic - numeric)) / np.max(np.abs(numeric)) <= 1e-5


def test_gradient_vanishes_where_every_output_matches_its_label():
    # zero UAT parameters leave |0> for any input
    spec = AnsatzSpec(LayerKind.UAT, 2)
    data = LabeledDataset(np.random.default_rng(6).uniform(-1, 1, size=(8, 2)), np.zeros(8, dtype=int))
    zero = ParamVector(np.zeros(10), spec)
    assert dataset_loss(spec, zero, data) == pytest.approx(0.0, abs=1e-12)
    assert np.max(np.abs(gradient(spec, zero, data, GradientMode.ANALYTIC))) <= 1e-6
    assert np.max(np.abs(gradient(spec, zero, data, GradientMode.FINITE_DIFFERENCE))) <= 1e-6


def test_gradient_rejects_dimension_mismatch():
    spec = AnsatzSpec(LayerKind.UAT, 2)
    with pytest.raises(InvalidArgumentError):
        gradient(spec, np.zeros(10), small_dataset(dim=3))
    with pytest.raises(InvalidArgumentError):
        gradient(spec, np.zeros(10), LabeledDataset(np.zeros((0, 2)), []))


@pytest.mark.parametrize("optimizer", [OptimizerKind.LBFGS, OptimizerKind.ADAM])
def test_training_does_not_increase_loss(optimizer):
    spec = AnsatzSpec(LayerKind.UAT, 2, PrepKind.TRAINABLE_U)
    data = gen_circle(40, seed=0)
    config = TrainConfig(optimizer=optimizer, max_iterations=15, rng_seed=5)
    report = train(spec, data, config)
    assert report.final_loss <= report.initial_loss
    assert report.iterations <= 15
    assert len(report.loss_history) == report.iterations + 1
    assert dataset_loss(spec, report.params, data) == pytest.approx(report.final_loss, abs=1e-9)


def test_finite_difference_training_follows_analytic_training():
    spec = AnsatzSpec(LayerKind.UAT, 1)
    data = gen_circle(20, seed=1)
    analytic = train(spec, data, TrainConfig(max_iterations=3, rng_seed=2))
    numeric = train(spec, data, TrainConfig(max_iterations=3, rng_seed=2, gradient_mode=GradientMode.FINITE_DIFFERENCE))
    assert numeric.loss_history[0] == pytest.approx(analytic.loss_history[0], abs=1e-12)
    assert numeric.final_loss == pytest.approx(analytic.final_loss, abs=1e-3)


def test_training_is_reproducible():
    spec = AnsatzSpec(LayerKind.COMPRESSED_UNITARY, 2)
    data = gen_circle(30, seed=3)
    config = TrainConfig(max_iterations=5, rng_seed=11)
    first = train(spec, data, config)
    second = train(spec, data, config)
    assert first.params == second.params
    assert first.loss_history == second.loss_history


def test_single_unitary_layer_separates_points_by_sign():
    positive = [[0.5, 0.0], [0.7, 0.6], [0.7, -0.6], [0.9, 0.3], [0.9, -0.3]]
    features = positive + [[-a, b] for a, b in positive]
    data = LabeledDataset(features, [0] * 5 + [1] * 5)
    spec = AnsatzSpec(LayerKind.UNITARY, 1)
    report = train(spec, data, TrainConfig(max_iterations=50, rng_seed=0))
    assert dataset_accuracy(spec, report.params, data) == 1.0


def test_single_iteration_budget():
    spec = AnsatzSpec(LayerKind.UAT, 2)
    data = gen_circle(20, seed=2)
    for optimizer in (OptimizerKind.LBFGS, OptimizerKind.ADAM):
        report = train(spec, data, TrainConfig(optimizer=optimizer, max_iterations=1, rng_seed=4))
        assert report.iterations <= 1
        assert len(report.loss_history) in (1, 2)


def test_training_from_given_init():
    spec = AnsatzSpec(LayerKind.UNITARY, 1)
    data = gen_circle(10, seed=0)
    init = ParamVector([0.1, 0.2, 0.3], spec)
    report = train(spec, data, TrainConfig(max_iterations=2), init=init)
    assert report.loss_history[0] == pytest.approx(dataset_loss(spec, init, data))


def test_training_callback_sees_every_iteration():
    spec = AnsatzSpec(LayerKind.UAT, 1)
    data = gen_circle(10, seed=0)
    seen = []
    report = train(spec, data, TrainConfig(optimizer=OptimizerKind.ADAM, max_iterations=4),
                   callback=lambda i, loss, x: seen.append(i))
    assert seen == list(range(1, report.iterations + 1))


def test_predict_threshold():
    # a zero-parameter single-layer circuit leaves |0>, so P(0) = 1
    spec = AnsatzSpec(LayerKind.UAT, 1)
    zero = ParamVector(np.zeros(5), spec)
    assert predict(spec, zero, [0.4, 0.4]) == 0
    # phi = pi/4 gives P(0) = 0.5 exactly at the boundary
    half = ParamVector([0.0, 0.0, 0.0, 0.0, math.pi / 4], spec)
    assert predict(spec, half, [0.4, 0.4], ClassifierConfig(0.4)) == 0
    assert predict(spec, half, [0.4, 0.4], ClassifierConfig(0.6)) == 1
    flipped = ParamVector([0.0, 0.0, 0.0, 0.0, math.pi / 2], spec)
    assert predict_batch(spec, flipped, [[0.0, 0.0], [1.0, -1.0]]).tolist() == [1, 1]


def test_predict_ignores_global_phase():
    # from |0> the Rz gate of a single UAT layer only adds a phase, so alpha moves nothing observable
    spec = AnsatzSpec(LayerKind.UAT, 1)
    X = np.random.default_rng(12).uniform(-1, 1, size=(20, 2))
    base = ParamVector([0.3, -0.2, 0.5, 0.0, 0.6], spec)
    shifted = ParamVector([0.3, -0.2, 0.5, 1.1, 0.6], spec)
    first, second = forward(spec, base, X[0]), forward(spec, shifted, X[0])
    assert abs(first.a0 - second.a0) > 1e-3
    assert pure_fidelity(first, second) == pytest.approx(1.0, abs=1e-12)
    assert predict_batch(spec, base, X).tolist() == predict_batch(spec, shifted, X).tolist()
    assert predict(spec, base, X[0]) == predict(spec, shifted, X[0])


def test_dataset_accuracy():
    spec = AnsatzSpec(LayerKind.UAT, 1)
    zero = ParamVector(np.zeros(5), spec)
    data = LabeledDataset([[0.0, 0.0], [0.1, 0.1], [0.2, 0.2], [0.3, 0.3]], [0, 0, 0, 1])
    assert dataset_accuracy(spec, zero, data) == pytest.approx(0.75)


def test_classifier_threshold_bounds():
    with pytest.raises(InvalidArgumentError):
        ClassifierConfig(0.0)
    with pytest.raises(InvalidArgumentError):
        ClassifierConfig(1.0)
    assert ClassifierConfig.from_dict(None).threshold == 0.5


def test_train_config_validation_and_round_trip():
    with pytest.raises(InvalidArgumentError):
        TrainConfig(max_iterations=0)
    with pytest.raises(InvalidArgumentError):
        TrainConfig(fd_step=0.5)
    with pytest.raises(InvalidArgumentError):
        TrainConfig.from_dict({'optimizer': 'sgd'})
    config = TrainConfig(optimizer=OptimizerKind.ADAM, max_iterations=7, learning_rate=0.01, rng_seed=3)
    assert TrainConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()
    assert config.with_seed(9).rng_seed == 9


def test_train_report_round_trip():
    spec = AnsatzSpec(LayerKind.UAT, 1)
    report = TrainReport(ParamVector(np.arange(5.0), spec), [3.0, 2.0, 2.5], 2, 0.1, 'adam', False)
    assert report.final_loss == 2.0
    restored = TrainReport.from_dict(report.to_dict())
    assert restored.to_dict() == report.to_dict()
    assert 'wall_time' not in report.to_dict()
    with pytest.raises(InvalidArgumentError):
        TrainReport(ParamVector([0.0]), [], 0, 0.0)
