# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.quantum.qubit import (
    HADAMARD, QubitState,
    u_gate_array, u_gate_derivative_arrays,
    rz_array, rz_derivative_array, ry_array, ry_derivative_array,
)

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


class LayerKind(Enum):
    """
    An enum for the data re-uploading layer formulations.
    """
    UNITARY = 'unitary'
    """L(i) = U(phi_i) U(x): a data gate followed by a trainable gate"""
    COMPRESSED_UNITARY = 'compressed_unitary'
    """L(i) = U(theta_i + omega_i o x): data and weights fused in one gate"""
    UAT = 'uat'
    """L(i) = Ry(2 phi_i) Rz(2 omega_i . x + 2 alpha_i)"""


class PrepKind(Enum):
    """
    An enum for the optional state preparation step applied to |0> before the first layer.
    """
    NONE = 'none'
    """No preparation"""
    HADAMARD = 'hadamard'
    """A fixed Hadamard gate"""
    TRAINABLE_U = 'u'
    """A generic U(theta, phi, lambda) gate trained jointly with the layers"""


PREP_PARAM_COUNT = {PrepKind.NONE: 0, PrepKind.HADAMARD: 0, PrepKind.TRAINABLE_U: 3}

# Angle slots of one U(x) data gate.
CHUNK = 3


class AnsatzSpec:
    """
    A class describing a single-qubit data re-uploading circuit.

    :param layer_kind: The layer formulation.
    :type layer_kind: LayerKind
    :param n_layers: The number of processing layers, at least 1.
    :type n_layers: int
    :param prep: The initial preparation step.
    :type prep: PrepKind
    :param input_dim: The dimension of the raw input vectors, at least 1.
    :type input_dim: int
    """
    __slots__ = ("_layer_kind", "_n_layers", "_prep", "_input_dim")

    def __init__(
            self,
            layer_kind: LayerKind,
            n_layers: int,
            prep: PrepKind = PrepKind.NONE,
            input_dim: int = 2
    ) -> None:
        if not isinstance(layer_kind, LayerKind):
            layer_kind = LayerKind(layer_kind)
        if not isinstance(prep, PrepKind):
            prep = PrepKind(prep)
        if isinstance(n_layers, bool) or int(n_layers) != n_layers or n_layers < 1:
            raise InvalidArgumentError(f"n_layers must be a positive integer, got {n_layers}")
        if isinstance(input_dim, bool) or int(input_dim) != input_dim or input_dim < 1:
            raise InvalidArgumentError(f"input_dim must be a positive integer, got {input_dim}")
        self._layer_kind = layer_kind
        self._n_layers = int(n_layers)
        self._prep = prep
        self._input_dim = int(input_dim)

    @property
    def layer_kind(self) -> LayerKind:
        return self._layer_kind

    @property
    def n_layers(self) -> int:
        return self._n_layers

    @property
    def prep(self) -> PrepKind:
        return self._prep

    @property
    def input_dim(self) -> int:
        return self._input_dim

    @property
    def n_chunks(self) -> int:
        """
        Number of 3-angle groups the padded input occupies.

        :return: ceil(input_dim / 3).
        :rtype: int
        """
        return (self._input_dim + CHUNK - 1) // CHUNK

    @property
    def padded_dim(self) -> int:
        return CHUNK * self.n_chunks

    def layer_param_count(self) -> int:
        """
        Number of trainable parameters in one layer.

        :return: The per-layer parameter count.
        :rtype: int
        """
        if self._layer_kind == LayerKind.UNITARY:
            return 3
        if self._layer_kind == LayerKind.COMPRESSED_UNITARY:
            return 6 * self.n_chunks
        return self.padded_dim + 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            'layer_kind': self._layer_kind.value,
            'n_layers': self._n_layers,
            'prep': self._prep.value,
            'input_dim': self._input_dim,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AnsatzSpec':
        """
        Creates an ansatz description from a dictionary as produced by to_dict.

        :param data: The dictionary.
        :type data: Dict[str, Any]

        :return: The ansatz description.
        :rtype: AnsatzSpec
        """
        try:
            return cls(
                layer_kind=LayerKind(data['layer_kind']),
                n_layers=data['n_layers'],
                prep=PrepKind(data.get('prep', PrepKind.NONE.value)),
                input_dim=data.get('input_dim', 2),
            )
        except KeyError as e:
            raise InvalidArgumentError(f"Ansatz description is missing '{e.args[0]}'")
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid ansatz description: {e}")

    def __eq__(self, other) -> bool:
        if isinstance(other, AnsatzSpec):
            return self.to_dict() == other.to_dict()
        return False

    def __hash__(self) -> int:
        return hash(tuple(self.to_dict().items()))

    def __repr__(self) -> str:
        return (f"AnsatzSpec({self._layer_kind.value}, n_layers={self._n_layers}, "
                f"prep={self._prep.value}, input_dim={self._input_dim})")


class ParamVector:
    """
    The flat trainable parameter vector of an ansatz.

    :param values: The parameter values.
    :type values: array-like
    :param spec: Optional spec to validate the length against.
    :type spec: Optional[AnsatzSpec]
    """
    __slots__ = ("_values",)

    def __init__(self, values, spec: Optional[AnsatzSpec] = None) -> None:
        array = np.array(values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("Parameter vector contains non-finite values")
        if spec is not None and array.size != param_count(spec):
            raise InvalidArgumentError(
                f"Parameter vector has length {array.size}, the ansatz needs {param_count(spec)}"
            )
        array.setflags(write=False)
        self._values = array

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __len__(self) -> int:
        return int(self._values.size)

    def tolist(self) -> List[float]:
        return [float(v) for v in self._values]

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamVector):
            return bool(np.array_equal(self._values, other._values))
        return False

    def __hash__(self) -> int:
        return hash(self._values.tobytes())

    def __repr__(self) -> str:
        return f"ParamVector({self.tolist()})"


def param_count(spec: AnsatzSpec) -> int:
    """
    Total number of trainable parameters of an ansatz.

    :param spec: The ansatz.
    :type spec: AnsatzSpec

    :return: The parameter count.
    :rtype: int
    """
    return PREP_PARAM_COUNT[spec.prep] + spec.n_layers * spec.layer_param_count()


def circuit_depth(spec: AnsatzSpec) -> int:
    """
    Number of gates applied to the qubit.

    :param spec: The ansatz.
    :type spec: AnsatzSpec

    :return: The depth.
    :rtype: int
    """
    if spec.layer_kind == LayerKind.UNITARY:
        per_layer = spec.n_chunks + 1
    elif spec.layer_kind == LayerKind.COMPRESSED_UNITARY:
        per_layer = spec.n_chunks
    else:
        per_layer = 2
    return per_layer * spec.n_layers + (0 if spec.prep == PrepKind.NONE else 1)


def layer_param_slice(spec: AnsatzSpec, layer_index: int) -> slice:
    """
    Index range of one layer's parameters in the flat vector. TrainableU preparation
    parameters, when present, occupy the first three slots.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param layer_index: Zero-based layer index.
    :type layer_index: int

    :return: The slice [start, stop).
    :rtype: slice
    """
    if not 0 <= layer_index < spec.n_layers:
        raise InvalidArgumentError(f"Layer index {layer_index} out of range for {spec.n_layers} layers")
    width = spec.layer_param_count()
    start = PREP_PARAM_COUNT[spec.prep] + layer_index * width
    return slice(start, start + width)


def prep_param_slice(spec: AnsatzSpec) -> slice:
    return slice(0, PREP_PARAM_COUNT[spec.prep])


def init_params(spec: AnsatzSpec, rng: np.random.Generator) -> ParamVector:
    """
    Draws i.i.d. parameters uniformly from [-pi, pi].

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param rng: The random generator.
    :type rng: numpy.random.Generator

    :return: The parameters.
    :rtype: ParamVector
    """
    return ParamVector(rng.uniform(-math.pi, math.pi, size=param_count(spec)), spec)


def pad_inputs(spec: AnsatzSpec, X) -> np.ndarray:
    """
    Pads input rows with trailing zeros to a multiple of three components.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param X: Inputs of shape (M, input_dim) or (input_dim,).
    :type X: array-like

    :return: Padded inputs of shape (M, padded_dim).
    :rtype: numpy.ndarray
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != spec.input_dim:
        raise InvalidArgumentError(f"Inputs must have {spec.input_dim} features, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("Inputs contain non-finite values")
    padded = np.zeros((X.shape[0], spec.padded_dim), dtype=np.float64)
    padded[:, :spec.input_dim] = X
    return padded


class _GateStep:
    # matrix: (2, 2) or (M, 2, 2); derivatives: [(param index, dG of shape (2, 2) or (M, 2, 2))]
    __slots__ = ("matrix", "derivatives")

    def __init__(self, matrix: np.ndarray, derivatives: Optional[List[Tuple[int, np.ndarray]]] = None) -> None:
        self.matrix = matrix
        self.derivatives = derivatives or []


def _values_of(spec: AnsatzSpec, params) -> np.ndarray:
    if isinstance(params, ParamVector):
        values = params.values
    else:
        values = np.asarray(params, dtype=np.float64).reshape(-1)
    if values.size != param_count(spec):
        raise InvalidArgumentError(
            f"Parameter vector has length {values.size}, the ansatz needs {param_count(spec)}"
        )
    return values


def _build_program(spec: AnsatzSpec, values: np.ndarray, Xp: np.ndarray, with_derivatives: bool) -> List[_GateStep]:
    steps: List[_GateStep] = []

    if spec.prep == PrepKind.HADAMARD:
        steps.append(_GateStep(HADAMARD.m))
    elif spec.prep == PrepKind.TRAINABLE_U:
        p = values[0:3]
        derivatives = None
        if with_derivatives:
            derivatives = list(zip(range(3), u_gate_derivative_arrays(p[0], p[1], p[2])))
        steps.append(_GateStep(u_gate_array(p[0], p[1], p[2]), derivatives))

    for layer in range(spec.n_layers):
        block = layer_param_slice(spec, layer)
        w = values[block]
        base = block.start

        if spec.layer_kind == LayerKind.UNITARY:
            for c in range(spec.n_chunks):
                x = Xp[:, CHUNK * c:CHUNK * (c + 1)]
                steps.append(_GateStep(u_gate_array(x[:, 0], x[:, 1], x[:, 2])))
            derivatives = None
            if with_derivatives:
                derivatives = list(zip(range(base, base + 3), u_gate_derivative_arrays(w[0], w[1], w[2])))
            steps.append(_GateStep(u_gate_array(w[0], w[1], w[2]), derivatives))

        elif spec.layer_kind == LayerKind.COMPRESSED_UNITARY:
            for c in range(spec.n_chunks):
                theta = w[6 * c:6 * c + 3]
                omega = w[6 * c + 3:6 * c + 6]
                x = Xp[:, CHUNK * c:CHUNK * (c + 1)]
                angles = theta[None, :] + omega[None, :] * x
                derivatives = None
                if with_derivatives:
                    partials = u_gate_derivative_arrays(angles[:, 0], angles[:, 1], angles[:, 2])
                    derivatives = []
                    for j, d_angle in enumerate(partials):
                        derivatives.append((base + 6 * c + j, d_angle))
                        derivatives.append((base + 6 * c + 3 + j, x[:, j, None, None] * d_angle))
                steps.append(_GateStep(u_gate_array(angles[:, 0], angles[:, 1], angles[:, 2]), derivatives))

        else:
            d = spec.padded_dim
            omega = w[:d]
            alpha = w[d]
            phi = w[d + 1]
            z_angle = 2.0 * (Xp @ omega) + 2.0 * alpha
            z_derivatives = None
            y_derivatives = None
            if with_derivatives:
                d_rz = rz_derivative_array(z_angle)
                z_derivatives = [(base + j, 2.0 * Xp[:, j, None, None] * d_rz) for j in range(d)]
                z_derivatives.append((base + d, 2.0 * d_rz))
                y_derivatives = [(base + d + 1, 2.0 * ry_derivative_array(2.0 * phi))]
            steps.append(_GateStep(rz_array(z_angle), z_derivatives))
            steps.append(_GateStep(ry_array(2.0 * phi), y_derivatives))

    return steps


def _apply_step(matrix: np.ndarray, psi: np.ndarray) -> np.ndarray:
    return (matrix @ psi[:, :, None])[:, :, 0]


def forward_batch(spec: AnsatzSpec, params, X) -> np.ndarray:
    """
    Evaluates the circuit on every input row, starting from |0>.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param X: Inputs of shape (M, input_dim).
    :type X: array-like

    :return: Output amplitudes of shape (M, 2).
    :rtype: numpy.ndarray
    """
    values = _values_of(spec, params)
    Xp = pad_inputs(spec, X)
    psi = np.zeros((Xp.shape[0], 2), dtype=np.complex128)
    psi[:, 0] = 1.0
    for step in _build_program(spec, values, Xp, with_derivatives=False):
        psi = _apply_step(step.matrix, psi)
    return psi


def forward(spec: AnsatzSpec, params, x) -> QubitState:
    """
    Evaluates the circuit on a single input: the preparation gate (if any) acts on |0>, then
    L(1) ... L(N) in order.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param x: One input vector of length input_dim.
    :type x: array-like

    :return: The output state.
    :rtype: QubitState
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError(f"Expected a single input vector, got shape {x.shape}")
    return QubitState.from_array(forward_batch(spec, params, x[None, :])[0])


def probabilities(spec: AnsatzSpec, params, X) -> np.ndarray:
    """
    P(0) of the output state for every input row.

    :return: Array of shape (M,).
    :rtype: numpy.ndarray
    """
    psi = forward_batch(spec, params, X)
    return np.abs(psi[:, 0]) ** 2


def overlap_and_jacobian(spec: AnsatzSpec, params, X, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Computes a_m = <t_m|psi(x_m)> and its derivative with respect to every parameter by
    adjoint differentiation through the gate products.

    :param spec: The ansatz.
    :type spec: AnsatzSpec
    :param params: The parameters.
    :type params: ParamVector
    :param X: Inputs of shape (M, input_dim).
    :type X: array-like
    :param targets: Target amplitudes of shape (M, 2).
    :type targets: numpy.ndarray

    :return: Overlaps of shape (M,) and complex Jacobian of shape (M, P).
    :rtype: tuple
    """
    values = _values_of(spec, params)
    Xp = pad_inputs(spec, X)
    m = Xp.shape[0]
    steps = _build_program(spec, values, Xp, with_derivatives=True)

    states = []
    psi = np.zeros((m, 2), dtype=np.complex128)
    psi[:, 0] = 1.0
    for step in steps:
        states.append(psi)
        psi = _apply_step(step.matrix, psi)

    bra = np.conj(np.asarray(targets, dtype=np.complex128))
    overlap = np.sum(bra * psi, axis=1)
    jacobian = np.zeros((m, values.size), dtype=np.complex128)

    for step, psi_before in zip(reversed(steps), reversed(states)):
        for index, d_matrix in step.derivatives:
            jacobian[:, index] += np.sum(bra * _apply_step(d_matrix, psi_before), axis=1)
        bra = (bra[:, None, :] @ step.matrix)[:, 0, :]

    return overlap, jacobian


def describe(spec: AnsatzSpec) -> str:
    """
    Renders the gate sequence of an ansatz, first gate on the left.

    :param spec: The ansatz.
    :type spec: AnsatzSpec

    :return: A one-line description.
    :rtype: str
    """
    gates: List[str] = []
    if spec.prep == PrepKind.HADAMARD:
        gates.append("H")
    elif spec.prep == PrepKind.TRAINABLE_U:
        gates.append("U(p)")
    for layer in range(1, spec.n_layers + 1):
        if spec.layer_kind == LayerKind.UNITARY:
            gates.extend(["U(x)"] * spec.n_chunks)
            gates.append(f"U(phi{layer})")
        elif spec.layer_kind == LayerKind.COMPRESSED_UNITARY:
            gates.extend([f"U(theta{layer}+omega{layer}*x)"] * spec.n_chunks)
        else:
            gates.append(f"Rz(2*omega{layer}.x+2*alpha{layer})")
            gates.append(f"Ry(2*phi{layer})")
    return " -> ".join(gates)

