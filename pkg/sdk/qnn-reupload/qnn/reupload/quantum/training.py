# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.management.logger_module import logger
from qnn.reupload.optimizers import (
    ADAM_LEARNING_RATE, IterationCallback, minimize_adam, minimize_lbfgs,
)
from qnn.reupload.quantum.ansatz import (
    AnsatzSpec, ParamVector, describe, forward, forward_batch, init_params, overlap_and_jacobian, param_count,
)
from qnn.reupload.quantum.qubit import KET_0, KET_1, QubitState, prob0, pure_fidelity

import math
import time
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


DEFAULT_THRESHOLD = 0.5
DEFAULT_FD_STEP = 1e-5
MAX_FD_STEP = 1e-2
DEFAULT_MAX_ITERATIONS = 50


class OptimizerKind(Enum):
    """
    An enum for the classical optimizers driving the circuit parameters.
    """
    LBFGS = 'lbfgs'
    """Limited-memory BFGS with strong-Wolfe line search"""
    ADAM = 'adam'
    """Full-batch Adam"""


class GradientMode(Enum):
    """
    An enum for the gradient evaluation strategies.
    """
    ANALYTIC = 'analytic'
    """Exact chain rule through the gate products"""
    FINITE_DIFFERENCE = 'finite_difference'
    """Central differences"""


def label_state(label: int) -> QubitState:
    """
    The target state of a class label: 0 -> |0>, 1 -> |1>.

    :param label: The class label.
    :type label: int

    :return: The label state.
    :rtype: QubitState
    """
    if label == 0:
        return KET_0
    if label == 1:
        return KET_1
    raise InvalidArgumentError(f"Label must be 0 or 1, got {label}")


def label_targets(labels) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    targets = np.zeros((labels.shape[0], 2), dtype=np.complex128)
    targets[np.arange(labels.shape[0]), labels] = 1.0
    return targets


class ClassifierConfig:
    """
    Decision rule configuration: class 0 iff P(0) > threshold.

    :param threshold: The threshold, strictly between 0 and 1.
    :type threshold: float
    """
    def __init__(self, threshold: float = DEFAULT_THRESHOLD) -> None:
        if not (0.0 < threshold < 1.0):
            raise InvalidArgumentError(f"Threshold must lie in (0, 1), got {threshold}")
        self._threshold = float(threshold)

    @property
    def threshold(self) -> float:
        return self._threshold

    def to_dict(self) -> Dict[str, Any]:
        return {'threshold': self._threshold}

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'ClassifierConfig':
        data = data or {}
        return cls(threshold=float(data.get('threshold', DEFAULT_THRESHOLD)))


class TrainConfig:
    """
    A class representing the configuration of a training run.

    :param optimizer: The optimizer.
    :type optimizer: OptimizerKind
    :param max_iterations: The maximum number of optimizer iterations.
    :type max_iterations: int
    :param learning_rate: The Adam step size.
    :type learning_rate: float
    :param gradient_mode: How gradients are evaluated.
    :type gradient_mode: GradientMode
    :param fd_step: The central-difference step, in (0, 1e-2].
    :type fd_step: float
    :param rng_seed: Seed for parameter initialization.
    :type rng_seed: int
    """
    def __init__(
            self,
            optimizer: OptimizerKind = OptimizerKind.LBFGS,
            max_iterations: int = DEFAULT_MAX_ITERATIONS,
            learning_rate: float = ADAM_LEARNING_RATE,
            gradient_mode: GradientMode = GradientMode.ANALYTIC,
            fd_step: float = DEFAULT_FD_STEP,
            rng_seed: int = 0
    ) -> None:
        self._optimizer = OptimizerKind(optimizer)
        self._gradient_mode = GradientMode(gradient_mode)
        if isinstance(max_iterations, bool) or int(max_iterations) != max_iterations or max_iterations < 1:
            raise InvalidArgumentError(f"max_iterations must be a positive integer, got {max_iterations}")
        if not (learning_rate > 0.0 and math.isfinite(learning_rate)):
            raise InvalidArgumentError(f"learning_rate must be positive, got {learning_rate}")
        if not (0.0 < fd_step <= MAX_FD_STEP):
            raise InvalidArgumentError(f"fd_step must lie in (0, {MAX_FD_STEP}], got {fd_step}")
        if not (0 <= int(rng_seed) < 2 ** 64):
            raise InvalidArgumentError(f"rng_seed must be a 64-bit unsigned integer, got {rng_seed}")
        self._max_iterations = int(max_iterations)
        self._learning_rate = float(learning_rate)
        self._fd_step = float(fd_step)
        self._rng_seed = int(rng_seed)

    @property
    def optimizer(self) -> OptimizerKind:
        return self._optimizer

    @property
    def max_iterations(self) -> int:
        return self._max_iterations

    @property
    def learning_rate(self) -> float:
        return self._learning_rate

    @property
    def gradient_mode(self) -> GradientMode:
        return self._gradient_mode

    @property
    def fd_step(self) -> float:
        return self._fd_step

    @property
    def rng_seed(self) -> int:
        return self._rng_seed

    def with_seed(self, rng_seed: int) -> 'TrainConfig':
        data = self.to_dict()
        data['rng_seed'] = rng_seed
        return TrainConfig.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'optimizer': self._optimizer.value,
            'max_iterations': self._max_iterations,
            'learning_rate': self._learning_rate,
            'gradient_mode': self._gradient_mode.value,
            'fd_step': self._fd_step,
            'rng_seed': self._rng_seed,
        }

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'TrainConfig':
        """
        Creates a training configuration from a dictionary; missing keys take defaults.

        :param data: The dictionary.
        :type data: Optional[Dict[str, Any]]

        :return: The configuration.
        :rtype: TrainConfig
        """
        data = data or {}
        try:
            return cls(
                optimizer=OptimizerKind(data.get('optimizer', OptimizerKind.LBFGS.value)),
                max_iterations=data.get('max_iterations', DEFAULT_MAX_ITERATIONS),
                learning_rate=float(data.get('learning_rate', ADAM_LEARNING_RATE)),
                gradient_mode=GradientMode(data.get('gradient_mode', GradientMode.ANALYTIC.value)),
                fd_step=float(data.get('fd_step', DEFAULT_FD_STEP)),
                rng_seed=int(data.get('rng_seed', 0)),
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Invalid training configuration: {e}")


class TrainReport:
    """
    The outcome of a training run.

    :param params: The trained parameters.
    :type params: ParamVector
    :param loss_history: Loss before training and after every accepted iteration.
    :type loss_history: List[float]
    :param iterations: Number of accepted iterations.
    :type iterations: int
    :param wall_time: Elapsed seconds.
    :type wall_time: float
    :param optimizer: The optimizer used.
    :type optimizer: str
    :param converged: True if the gradient tolerance was reached.
    :type converged: bool
    """
    def __init__(
            self,
            params: ParamVector,
            loss_history: List[float],
            iterations: int,
            wall_time: float,
            optimizer: str = OptimizerKind.LBFGS.value,
            converged: bool = False
    ) -> None:
        if not loss_history:
            raise InvalidArgumentError("Loss history must not be empty")
        if not all(math.isfinite(v) and v >= 0.0 for v in loss_history):
            raise InvalidArgumentError("Loss history entries must be finite and non-negative")
        self._params = params
        self._loss_history = [float(v) for v in loss_history]
        self._iterations = int(iterations)
        self._wall_time = float(wall_time)
        self._optimizer = optimizer
        self._converged = bool(converged)

    @property
    def params(self) -> ParamVector:
        return self._params

    @property
    def loss_history(self) -> List[float]:
        return list(self._loss_history)

    @property
    def iterations(self) -> int:
        return self._iterations

    @property
    def wall_time(self) -> float:
        return self._wall_time

    @property
    def optimizer(self) -> str:
        return self._optimizer

    @property
    def converged(self) -> bool:
        return self._converged

    @property
    def initial_loss(self) -> float:
        return self._loss_history[0]

    @property
    def final_loss(self) -> float:
        return min(self._loss_history)

    def to_dict(self) -> Dict[str, Any]:
        """
        Serializable form. Wall time is left out so that repeated seeded runs produce identical records.

        :return: The report as a dictionary.
        :rtype: Dict[str, Any]
        """
        return {
            'optimizer': self._optimizer,
            'iterations': self._iterations,
            'converged': self._converged,
            'initial_loss': self.initial_loss,
            'final_loss': self.final_loss,
            'loss_history': list(self._loss_history),
            'params': self._params.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainReport':
        return cls(
            params=ParamVector(data['params']),
            loss_history=data['loss_history'],
            iterations=data['iterations'],
            wall_time=float(data.get('wall_time', 0.0)),
            optimizer=data.get('optimizer', OptimizerKind.LBFGS.value),
            converged=data.get('converged', False),
        )


def _check_data(spec: AnsatzSpec, data: LabeledDataset) -> None:
    if len(data) == 0:
        raise InvalidArgumentError("Dataset is empty")
    if data.dim != spec.input_dim:
        raise InvalidArgumentError(f"Dataset has {data.dim} features, the ansatz expects {spec.input_dim}")


def sample_loss(spec: AnsatzSpec, params, x, label: int) -> float:
    """
    Per-sample fidelity cost 1 - |<label state|psi(x)>|^2.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param x: The input vector.
    :type x: array-like
    :param label: The class label.
    :type label: int

    :return: The loss in [0, 1].
    :rtype: float
    """
    return 1.0 - pure_fidelity(forward(spec, params, x), label_state(label))


def _losses(spec: AnsatzSpec, params, data: LabeledDataset) -> np.ndarray:
    psi = forward_batch(spec, params, data.features)
    fidelity = np.abs(psi[np.arange(len(data)), data.labels]) ** 2
    return 1.0 - np.clip(fidelity, 0.0, 1.0)


def dataset_loss(spec: AnsatzSpec, params, data: LabeledDataset) -> float:
    """
    The fidelity cost summed over all rows of a dataset.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param data: The labeled dataset.
    :type data: LabeledDataset

    :return: The loss in [0, M].
    :rtype: float
    """
    _check_data(spec, data)
    # numpy sums float arrays pairwise
    return float(np.sum(_losses(spec, params, data)))


def _analytic_value_and_grad(spec: AnsatzSpec, values: np.ndarray, data: LabeledDataset) -> Tuple[float, np.ndarray]:
    overlap, jacobian = overlap_and_jacobian(spec, values, data.features, label_targets(data.labels))
    loss = float(np.sum(1.0 - np.clip(np.abs(overlap) ** 2, 0.0, 1.0)))
    # d(1 - |a|^2) = -2 Re(conj(a) da)
    grad = -2.0 * np.sum(np.real(np.conj(overlap)[:, None] * jacobian), axis=0)
    return loss, grad


def _finite_difference_grad(spec: AnsatzSpec, values: np.ndarray, data: LabeledDataset, fd_step: float) -> np.ndarray:
    grad = np.zeros(values.size, dtype=np.float64)
    for i in range(values.size):
        plus = values.copy()
        minus = values.copy()
        plus[i] += fd_step
        minus[i] -= fd_step
        grad[i] = (np.sum(_losses(spec, plus, data)) - np.sum(_losses(spec, minus, data))) / (2.0 * fd_step)
    return grad


def gradient(
        spec: AnsatzSpec,
        params,
        data: LabeledDataset,
        mode: GradientMode = GradientMode.ANALYTIC,
        fd_step: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """
    Gradient of dataset_loss with respect to every parameter.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param data: The labeled dataset.
    :type data: LabeledDataset
    :param mode: Analytic chain rule or central finite differences.
    :type mode: GradientMode
    :param fd_step: The finite-difference step.
    :type fd_step: float

    :return: Vector of length param_count(spec).
    :rtype: numpy.ndarray
    """
    _check_data(spec, data)
    values = ParamVector(params.values if isinstance(params, ParamVector) else params, spec).values
    if GradientMode(mode) == GradientMode.ANALYTIC:
        return _analytic_value_and_grad(spec, values, data)[1]
    return _finite_difference_grad(spec, values, data, fd_step)


def train(
        spec: AnsatzSpec,
        data: LabeledDataset,
        config: TrainConfig,
        init: Optional[ParamVector] = None,
        callback: Optional[IterationCallback] = None
) -> TrainReport:
    """
    Fits the circuit parameters to a dataset by minimizing the fidelity cost.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param data: The training data.
    :type data: LabeledDataset
    :param config: The training configuration.
    :type config: TrainConfig
    :param init: Optional starting parameters; drawn from the seeded generator when absent.
    :type init: Optional[ParamVector]
    :param callback: Called as callback(iteration, loss, params) after every accepted iteration.
    :type callback: Optional[Callable]

    :return: The training report.
    :rtype: TrainReport
    """
    _check_data(spec, data)
    if init is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.rng_seed))
        init = init_params(spec, rng)
    else:
        init = ParamVector(init.values, spec)

    logger.info(f"Training {describe(spec)} ({param_count(spec)} params) on {len(data)} rows "
                f"with {config.optimizer.value}, {config.max_iterations} iterations, seed {config.rng_seed}")

    if config.gradient_mode == GradientMode.ANALYTIC:
        def value_and_grad(values: np.ndarray) -> Tuple[float, np.ndarray]:
            return _analytic_value_and_grad(spec, values, data)
    else:
        def value_and_grad(values: np.ndarray) -> Tuple[float, np.ndarray]:
            return float(np.sum(_losses(spec, values, data))), _finite_difference_grad(spec, values, data, config.fd_step)

    start = time.perf_counter()
    if config.optimizer == OptimizerKind.LBFGS:
        outcome = minimize_lbfgs(value_and_grad, init.values, config.max_iterations, callback=callback)
    else:
        outcome = minimize_adam(value_and_grad, init.values, config.max_iterations,
                                learning_rate=config.learning_rate, callback=callback)
    wall_time = time.perf_counter() - start

    report = TrainReport(
        params=ParamVector(outcome.x, spec),
        loss_history=outcome.history,
        iterations=outcome.iterations,
        wall_time=wall_time,
        optimizer=config.optimizer.value,
        converged=outcome.converged,
    )
    logger.info(f"Training finished: loss {report.initial_loss:.6g} -> {report.final_loss:.6g} "
                f"in {report.iterations} iterations, {wall_time:.3f}s")
    return report


def predict(spec: AnsatzSpec, params, x, cfg: Optional[ClassifierConfig] = None) -> int:
    """
    Classifies one input: 0 if P(0) > threshold, else 1.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param x: The input vector.
    :type x: array-like
    :param cfg: The decision rule.
    :type cfg: Optional[ClassifierConfig]

    :return: The predicted class.
    :rtype: int
    """
    cfg = cfg or ClassifierConfig()
    return 0 if prob0(forward(spec, params, x)) > cfg.threshold else 1


def predict_batch(spec: AnsatzSpec, params, X, cfg: Optional[ClassifierConfig] = None) -> np.ndarray:
    cfg = cfg or ClassifierConfig()
    psi = forward_batch(spec, params, X)
    return np.where(np.abs(psi[:, 0]) ** 2 > cfg.threshold, 0, 1).astype(np.int64)


def dataset_accuracy(spec: AnsatzSpec, params, data: LabeledDataset, cfg: Optional[ClassifierConfig] = None) -> float:
    _check_data(spec, data)
    return float(np.mean(predict_batch(spec, params, data.features, cfg) == data.labels))
