# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.exceptions import TrainingAbortedError
from qnn.reupload.management.logger_module import logger

import math
from collections import deque
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import line_search


ValueAndGrad = Callable[[np.ndarray], Tuple[float, np.ndarray]]
IterationCallback = Callable[[int, float, np.ndarray], None]

LBFGS_MEMORY = 10
WOLFE_C1 = 1e-4
WOLFE_C2 = 0.9
GRADIENT_TOL = 1e-8

ADAM_LEARNING_RATE = 0.05
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8


class OptimizeOutcome:
    """
    The result of a minimization run.

    :param x: The returned parameters.
    :type x: numpy.ndarray
    :param history: Objective value at the start and after every accepted iteration.
    :type history: List[float]
    :param iterations: Number of accepted iterations.
    :type iterations: int
    :param converged: True if the gradient tolerance was reached.
    :type converged: bool
    """
    def __init__(self, x: np.ndarray, history: List[float], iterations: int, converged: bool) -> None:
        self.x = x
        self.history = history
        self.iterations = iterations
        self.converged = converged


class _CachedObjective:
    # line_search evaluates f and fprime separately at the same points
    def __init__(self, value_and_grad: ValueAndGrad) -> None:
        self._value_and_grad = value_and_grad
        self._key = None
        self._value = None
        self._grad = None
        self.evaluations = 0

    def _evaluate(self, x: np.ndarray) -> None:
        key = x.tobytes()
        if key != self._key:
            value, grad = self._value_and_grad(np.array(x, dtype=np.float64))
            self._key = key
            self._value = float(value)
            self._grad = np.asarray(grad, dtype=np.float64)
            self.evaluations += 1

    def value(self, x: np.ndarray) -> float:
        self._evaluate(x)
        return self._value

    def grad(self, x: np.ndarray) -> np.ndarray:
        self._evaluate(x)
        return self._grad


def _check_finite(value: float, iteration: int) -> None:
    if not math.isfinite(value):
        raise TrainingAbortedError(f"non-finite loss {value}", iteration, value)


def _two_loop_direction(grad: np.ndarray, memory: deque) -> np.ndarray:
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(memory):
        alpha = rho * np.dot(s, q)
        q = q - alpha * y
        alphas.append(alpha)
    if memory:
        s, y, _ = memory[-1]
        q = q * (np.dot(s, y) / np.dot(y, y))
    for (s, y, rho), alpha in zip(memory, reversed(alphas)):
        beta = rho * np.dot(y, q)
        q = q + s * (alpha - beta)
    return -q


def minimize_lbfgs(
        value_and_grad: ValueAndGrad,
        x0: np.ndarray,
        max_iterations: int,
        memory_size: int = LBFGS_MEMORY,
        c1: float = WOLFE_C1,
        c2: float = WOLFE_C2,
        gtol: float = GRADIENT_TOL,
        callback: Optional[IterationCallback] = None
) -> OptimizeOutcome:
    """
    Limited-memory BFGS with a strong-Wolfe line search.

    :param value_and_grad: Function returning (objective, gradient) at a point.
    :type value_and_grad: Callable
    :param x0: Starting point.
    :type x0: numpy.ndarray
    :param max_iterations: Maximum number of accepted iterations.
    :type max_iterations: int
    :param memory_size: Number of curvature pairs kept.
    :type memory_size: int
    :param c1: Sufficient-decrease constant.
    :type c1: float
    :param c2: Curvature constant.
    :type c2: float
    :param gtol: Stop when the gradient infinity-norm is at most this value.
    :type gtol: float
    :param callback: Called as callback(iteration, value, x) after every accepted iteration.
    :type callback: Optional[Callable]

    :return: The outcome.
    :rtype: OptimizeOutcome
    """
    objective = _CachedObjective(value_and_grad)
    x = np.array(x0, dtype=np.float64)
    f = objective.value(x)
    _check_finite(f, 0)
    g = objective.grad(x)
    history = [f]
    memory: deque = deque(maxlen=memory_size)
    old_f = None
    iteration = 0
    converged = bool(np.max(np.abs(g), initial=0.0) <= gtol)

    while not converged and iteration < max_iterations:
        direction = _two_loop_direction(g, memory)
        if np.dot(direction, g) >= 0:
            memory.clear()
            direction = -g
        alpha, _, _, new_f, _, _ = line_search(
            objective.value, objective.grad, x, direction, gfk=g, old_fval=f, old_old_fval=old_f, c1=c1, c2=c2
        )
        if alpha is None and memory:
            logger.warning(f"Line search failed at iteration {iteration + 1}; restarting from steepest descent")
            memory.clear()
            direction = -g
            alpha, _, _, new_f, _, _ = line_search(
                objective.value, objective.grad, x, direction, gfk=g, old_fval=f, c1=c1, c2=c2
            )
        if alpha is None:
            logger.warning(f"Line search failed at iteration {iteration + 1}; stopping")
            break

        iteration += 1
        step = alpha * direction
        x_new = x + step
        f_new = objective.value(x_new) if new_f is None else float(new_f)
        _check_finite(f_new, iteration)
        g_new = objective.grad(x_new)
        y = g_new - g
        sy = float(np.dot(step, y))
        if sy > 1e-10:
            memory.append((step, y, 1.0 / sy))

        old_f, f, x, g = f, f_new, x_new, g_new
        history.append(f)
        if callback is not None:
            callback(iteration, f, x)
        converged = bool(np.max(np.abs(g)) <= gtol)

    logger.info(f"L-BFGS finished after {iteration} iterations ({objective.evaluations} evaluations), loss {f:.6g}")
    return OptimizeOutcome(x, history, iteration, converged)


def minimize_adam(
        value_and_grad: ValueAndGrad,
        x0: np.ndarray,
        max_iterations: int,
        learning_rate: float = ADAM_LEARNING_RATE,
        beta1: float = ADAM_BETA1,
        beta2: float = ADAM_BETA2,
        epsilon: float = ADAM_EPSILON,
        gtol: float = GRADIENT_TOL,
        callback: Optional[IterationCallback] = None
) -> OptimizeOutcome:
    """
    Full-batch Adam. Returns the parameters with the lowest objective seen, so the
    returned value never exceeds the starting value.

    :param value_and_grad: Function returning (objective, gradient) at a point.
    :type value_and_grad: Callable
    :param x0: Starting point.
    :type x0: numpy.ndarray
    :param max_iterations: Number of update steps.
    :type max_iterations: int
    :param learning_rate: Step size.
    :type learning_rate: float

    :return: The outcome.
    :rtype: OptimizeOutcome
    """
    x = np.array(x0, dtype=np.float64)
    f, g = value_and_grad(x)
    f = float(f)
    _check_finite(f, 0)
    history = [f]
    best_x, best_f = x.copy(), f
    m = np.zeros_like(x)
    v = np.zeros_like(x)
    converged = bool(np.max(np.abs(g), initial=0.0) <= gtol)
    iteration = 0

    while not converged and iteration < max_iterations:
        iteration += 1
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g ** 2
        m_hat = m / (1.0 - beta1 ** iteration)
        v_hat = v / (1.0 - beta2 ** iteration)
        x = x - learning_rate * m_hat / (np.sqrt(v_hat) + epsilon)
        f, g = value_and_grad(x)
        f = float(f)
        _check_finite(f, iteration)
        history.append(f)
        if f < best_f:
            best_x, best_f = x.copy(), f
        if callback is not None:
            callback(iteration, f, x)
        converged = bool(np.max(np.abs(g)) <= gtol)

    logger.info(f"Adam finished after {iteration} iterations, best loss {best_f:.6g}")
    return OptimizeOutcome(best_x, history, iteration, converged)
