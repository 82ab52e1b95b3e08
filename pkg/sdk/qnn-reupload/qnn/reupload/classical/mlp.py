# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

"""
Shallow sigmoid feed-forward networks used as the classical baseline: one hidden layer,
a single sigmoid output, trained full-batch with Adam on the mean squared error.
"""

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import InvalidArgumentError, TrainingAbortedError
from qnn.reupload.management.logger_module import logger
from qnn.reupload.optimizers import ADAM_LEARNING_RATE, minimize_adam

import math
import time
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit


DEFAULT_EPOCHS = 150


class MlpSpec:
    """
    A class describing a single-hidden-layer sigmoid network with one output unit.

    :param hidden_units: Number of hidden sigmoid units.
    :type hidden_units: int
    :param input_dim: Number of input features.
    :type input_dim: int
    """
    OUTPUT_UNITS = 1
    ACTIVATION = 'sigmoid'

    def __init__(self, hidden_units: int, input_dim: int = 2) -> None:
        if isinstance(hidden_units, bool) or int(hidden_units) != hidden_units or hidden_units < 1:
            raise InvalidArgumentError(f"hidden_units must be a positive integer, got {hidden_units}")
        if isinstance(input_dim, bool) or int(input_dim) != input_dim or input_dim < 1:
            raise InvalidArgumentError(f"input_dim must be a positive integer, got {input_dim}")
        self._hidden_units = int(hidden_units)
        self._input_dim = int(input_dim)

    @property
    def hidden_units(self) -> int:
        return self._hidden_units

    @property
    def input_dim(self) -> int:
        return self._input_dim

    @property
    def output_units(self) -> int:
        return self.OUTPUT_UNITS

    @property
    def activation(self) -> str:
        return self.ACTIVATION

    def to_dict(self) -> Dict[str, Any]:
        return {
            'hidden_units': self._hidden_units,
            'input_dim': self._input_dim,
            'output_units': self.OUTPUT_UNITS,
            'activation': self.ACTIVATION,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MlpSpec':
        if 'hidden_units' not in data:
            raise InvalidArgumentError("Network description is missing 'hidden_units'")
        if data.get('activation', cls.ACTIVATION) != cls.ACTIVATION:
            raise InvalidArgumentError(f"Only sigmoid activation is supported, got {data['activation']}")
        if data.get('output_units', cls.OUTPUT_UNITS) != cls.OUTPUT_UNITS:
            raise InvalidArgumentError("Only a single output unit is supported")
        return cls(hidden_units=data['hidden_units'], input_dim=data.get('input_dim', 2))

    def __eq__(self, other) -> bool:
        if isinstance(other, MlpSpec):
            return self.to_dict() == other.to_dict()
        return False

    def __hash__(self) -> int:
        return hash((self._hidden_units, self._input_dim))

    def __repr__(self) -> str:
        return f"MlpSpec(hidden_units={self._hidden_units}, input_dim={self._input_dim})"


class MlpParams:
    """
    Weights and biases of an MlpSpec network.

    :param hidden_weights: Matrix of shape (hidden_units, input_dim).
    :type hidden_weights: numpy.ndarray
    :param hidden_biases: Vector of shape (hidden_units,).
    :type hidden_biases: numpy.ndarray
    :param output_weights: Vector of shape (hidden_units,).
    :type output_weights: numpy.ndarray
    :param output_bias: Scalar output bias.
    :type output_bias: float
    """
    def __init__(self, hidden_weights, hidden_biases, output_weights, output_bias: float) -> None:
        self.hidden_weights = np.array(hidden_weights, dtype=np.float64)
        self.hidden_biases = np.array(hidden_biases, dtype=np.float64).reshape(-1)
        self.output_weights = np.array(output_weights, dtype=np.float64).reshape(-1)
        self.output_bias = float(output_bias)
        h = self.hidden_biases.shape[0]
        if self.hidden_weights.ndim != 2 or self.hidden_weights.shape[0] != h or self.output_weights.shape[0] != h:
            raise InvalidArgumentError("Inconsistent network parameter shapes")
        if not all(np.all(np.isfinite(a)) for a in self.arrays()):
            raise InvalidArgumentError("Network parameters must be finite")

    def arrays(self) -> Tuple[np.ndarray, ...]:
        return (self.hidden_weights, self.hidden_biases, self.output_weights, np.array([self.output_bias]))

    def flatten(self) -> np.ndarray:
        """
        Concatenates all parameters: hidden weights (row-major), hidden biases, output weights, output bias.

        :return: The flat parameter vector.
        :rtype: numpy.ndarray
        """
        return np.concatenate([a.reshape(-1) for a in self.arrays()])

    @classmethod
    def unflatten(cls, spec: MlpSpec, flat) -> 'MlpParams':
        flat = np.asarray(flat, dtype=np.float64).reshape(-1)
        if flat.size != mlp_param_count(spec):
            raise InvalidArgumentError(f"Expected {mlp_param_count(spec)} parameters, got {flat.size}")
        h, d = spec.hidden_units, spec.input_dim
        cut1 = h * d
        cut2 = cut1 + h
        cut3 = cut2 + h
        return cls(flat[:cut1].reshape(h, d), flat[cut1:cut2], flat[cut2:cut3], flat[cut3])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'hidden_weights': self.hidden_weights.tolist(),
            'hidden_biases': self.hidden_biases.tolist(),
            'output_weights': self.output_weights.tolist(),
            'output_bias': self.output_bias,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MlpParams':
        return cls(data['hidden_weights'], data['hidden_biases'], data['output_weights'], data['output_bias'])


class MlpTrainResult:
    """
    Trained parameters and the per-epoch mean squared error, starting with the untrained value.
    """
    def __init__(self, params: MlpParams, loss_history: List[float], epochs: int, wall_time: float) -> None:
        self.params = params
        self.loss_history = loss_history
        self.epochs = epochs
        self.wall_time = wall_time

    def to_dict(self) -> Dict[str, Any]:
        return {
            'epochs': self.epochs,
            'initial_loss': self.loss_history[0],
            'final_loss': min(self.loss_history),
            'loss_history': list(self.loss_history),
            'params': self.params.to_dict(),
        }


def mlp_param_count(spec: MlpSpec) -> int:
    """
    hidden_units * (input_dim + 1) + (hidden_units + 1).

    :param spec: The network.
    :type spec: MlpSpec

    :return: The parameter count.
    :rtype: int
    """
    return spec.hidden_units * (spec.input_dim + 1) + (spec.hidden_units + 1)


def mlp_init_params(spec: MlpSpec, rng: np.random.Generator) -> MlpParams:
    """
    Draws every weight and bias uniformly from [-1, 1] / sqrt(fan_in).
    """
    h, d = spec.hidden_units, spec.input_dim
    hidden_scale = 1.0 / math.sqrt(d)
    output_scale = 1.0 / math.sqrt(h)
    return MlpParams(
        rng.uniform(-1.0, 1.0, size=(h, d)) * hidden_scale,
        rng.uniform(-1.0, 1.0, size=h) * hidden_scale,
        rng.uniform(-1.0, 1.0, size=h) * output_scale,
        rng.uniform(-1.0, 1.0) * output_scale,
    )


def _check_inputs(spec: MlpSpec, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != spec.input_dim:
        raise InvalidArgumentError(f"Inputs must have {spec.input_dim} features, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("Inputs contain non-finite values")
    return X


def _forward_pass(params: MlpParams, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    hidden = expit(X @ params.hidden_weights.T + params.hidden_biases)
    output = expit(hidden @ params.output_weights + params.output_bias)
    return hidden, output


def mlp_forward_batch(spec: MlpSpec, params: MlpParams, X) -> np.ndarray:
    return _forward_pass(params, _check_inputs(spec, X))[1]


def mlp_forward(spec: MlpSpec, params: MlpParams, x) -> float:
    """
    Network output sigma(w2 . sigma(W1 x + b1) + b2) for one input.

    :param spec: The network.
    :type spec: MlpSpec
    :param params: The parameters.
    :type params: MlpParams
    :param x: The input vector.
    :type x: array-like

    :return: The output in (0, 1).
    :rtype: float
    """
    return float(mlp_forward_batch(spec, params, x)[0])


def mlp_predict(spec: MlpSpec, params: MlpParams, X) -> np.ndarray:
    """
    Class 1 where the output exceeds 0.5.

    :return: Predicted labels.
    :rtype: numpy.ndarray
    """
    return (mlp_forward_batch(spec, params, X) > 0.5).astype(np.int64)


def mlp_loss(spec: MlpSpec, params: MlpParams, X, y) -> float:
    output = mlp_forward_batch(spec, params, X)
    return float(np.mean((output - np.asarray(y, dtype=np.float64)) ** 2))


def mlp_gradient(spec: MlpSpec, params: MlpParams, X, y) -> Tuple[float, np.ndarray]:
    """
    Mean squared error and its exact gradient by backpropagation, flattened in MlpParams.flatten order.

    :param spec: The network.
    :type spec: MlpSpec
    :param params: The parameters.
    :type params: MlpParams
    :param X: Inputs of shape (M, input_dim).
    :type X: array-like
    :param y: Targets of shape (M,).
    :type y: array-like

    :return: (loss, gradient).
    :rtype: tuple
    """
    X = _check_inputs(spec, X)
    y = np.asarray(y, dtype=np.float64)
    m = X.shape[0]
    hidden, output = _forward_pass(params, X)
    residual = output - y
    loss = float(np.mean(residual ** 2))

    d_out = (2.0 / m) * residual * output * (1.0 - output)
    g_output_weights = hidden.T @ d_out
    g_output_bias = np.sum(d_out)
    d_hidden = np.outer(d_out, params.output_weights) * hidden * (1.0 - hidden)
    g_hidden_weights = d_hidden.T @ X
    g_hidden_biases = np.sum(d_hidden, axis=0)

    grad = np.concatenate([g_hidden_weights.reshape(-1), g_hidden_biases, g_output_weights, [g_output_bias]])
    return loss, grad


def mlp_train(
        spec: MlpSpec,
        data: LabeledDataset,
        epochs: int = DEFAULT_EPOCHS,
        seed: int = 0,
        learning_rate: float = ADAM_LEARNING_RATE,
        init: Optional[MlpParams] = None
) -> MlpTrainResult:
    """
    Trains the network with full-batch Adam on the mean squared error between output and labels.

    :param spec: The network.
    :type spec: MlpSpec
    :param data: The training data.
    :type data: LabeledDataset
    :param epochs: Number of full-batch Adam steps; 0 returns the initialization.
    :type epochs: int
    :param seed: Seed for weight initialization.
    :type seed: int
    :param learning_rate: Adam step size.
    :type learning_rate: float
    :param init: Optional starting parameters.
    :type init: Optional[MlpParams]

    :return: The trained parameters and loss history.
    :rtype: MlpTrainResult
    """
    if len(data) == 0:
        raise InvalidArgumentError("Dataset is empty")
    if data.dim != spec.input_dim:
        raise InvalidArgumentError(f"Dataset has {data.dim} features, the network expects {spec.input_dim}")
    if isinstance(epochs, bool) or int(epochs) != epochs or epochs < 0:
        raise InvalidArgumentError(f"epochs must be a non-negative integer, got {epochs}")
    if init is None:
        init = mlp_init_params(spec, np.random.default_rng(np.random.SeedSequence(seed)))

    X = data.features
    y = data.labels

    def value_and_grad(flat: np.ndarray) -> Tuple[float, np.ndarray]:
        return mlp_gradient(spec, MlpParams.unflatten(spec, flat), X, y)

    logger.info(f"Training sigmoid network with {spec.hidden_units} hidden units "
                f"({mlp_param_count(spec)} params) for {epochs} epochs, seed {seed}")
    start = time.perf_counter()
    try:
        outcome = minimize_adam(value_and_grad, init.flatten(), int(epochs), learning_rate=learning_rate, gtol=0.0)
    except InvalidArgumentError as e:
        # non-finite weights surface as invalid parameters
        raise TrainingAbortedError(str(e), -1)
    wall_time = time.perf_counter() - start

    result = MlpTrainResult(MlpParams.unflatten(spec, outcome.x), outcome.history, outcome.iterations, wall_time)
    logger.info(f"Network training finished: loss {outcome.history[0]:.6g} -> {min(outcome.history):.6g}")
    return result
