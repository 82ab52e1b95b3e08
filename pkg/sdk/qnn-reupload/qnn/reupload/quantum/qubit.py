# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

"""
Exact single-qubit linear algebra: states, gates, density matrices, fidelity and
computational-basis measurement probabilities.

Amplitudes are numpy ``complex128`` values. All value classes are immutable after
construction and every function here is pure.
"""

from qnn.reupload.management.exceptions import InvalidArgumentError

import math
from typing import Tuple, Union

import numpy as np


NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
BLOCH_TOL = 1e-10


def _frozen(values, shape: Tuple[int, ...]) -> np.ndarray:
    array = np.array(values, dtype=np.complex128)
    if array.shape != shape:
        raise InvalidArgumentError(f"Expected an array of shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidArgumentError("Non-finite value in complex array")
    array.setflags(write=False)
    return array


def _check_angles(*angles: float) -> None:
    for angle in angles:
        if not math.isfinite(angle):
            raise InvalidArgumentError(f"Angle must be finite, got {angle}")


class QubitState:
    """
    A pure single-qubit state a0|0> + a1|1>.

    :param a0: The amplitude of |0>.
    :type a0: complex
    :param a1: The amplitude of |1>.
    :type a1: complex
    """
    __slots__ = ("_amplitudes",)

    def __init__(self, a0: complex, a1: complex) -> None:
        amplitudes = _frozen([a0, a1], (2,))
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidArgumentError(f"State is not normalized: |a0|^2 + |a1|^2 = {norm}")
        self._amplitudes = amplitudes

    @classmethod
    def from_array(cls, amplitudes) -> 'QubitState':
        """
        Creates a state from a length-2 amplitude array.

        :param amplitudes: The amplitudes (a0, a1).
        :type amplitudes: array-like

        :return: The state.
        :rtype: QubitState
        """
        a0, a1 = np.asarray(amplitudes, dtype=np.complex128).reshape(2)
        return cls(a0, a1)

    @classmethod
    def basis(cls, k: int) -> 'QubitState':
        """
        Gets the computational basis state |k>.

        :param k: 0 or 1.
        :type k: int

        :return: The basis state.
        :rtype: QubitState
        """
        if k == 0:
            return cls(1.0, 0.0)
        if k == 1:
            return cls(0.0, 1.0)
        raise InvalidArgumentError(f"Basis index must be 0 or 1, got {k}")

    @property
    def a0(self) -> complex:
        return complex(self._amplitudes[0])

    @property
    def a1(self) -> complex:
        return complex(self._amplitudes[1])

    @property
    def amplitudes(self) -> np.ndarray:
        """
        Read-only view of the amplitude vector.

        :return: The amplitudes (a0, a1).
        :rtype: numpy.ndarray
        """
        return self._amplitudes

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self._amplitudes, self._amplitudes).real))

    def with_global_phase(self, gamma: float) -> 'QubitState':
        phase = np.exp(1j * gamma)
        return QubitState(phase * self.a0, phase * self.a1)

    def __eq__(self, other) -> bool:
        if isinstance(other, QubitState):
            return bool(np.array_equal(self._amplitudes, other._amplitudes))
        return False

    def __hash__(self) -> int:
        return hash((self.a0, self.a1))

    def __repr__(self) -> str:
        return f"QubitState(a0={self.a0:.6g}, a1={self.a1:.6g})"


class GateMatrix:
    """
    A 2x2 complex unitary matrix.

    :param matrix: The matrix entries.
    :type matrix: array-like
    :param check: Whether to verify unitarity within UNITARY_TOL.
    :type check: bool
    """
    __slots__ = ("_m",)

    def __init__(self, matrix, check: bool = True) -> None:
        m = _frozen(matrix, (2, 2))
        if check and not _is_unitary_array(m):
            raise InvalidArgumentError("Gate matrix is not unitary")
        self._m = m

    @property
    def m(self) -> np.ndarray:
        return self._m

    def dagger(self) -> 'GateMatrix':
        return GateMatrix(self._m.conj().T, check=False)

    def __matmul__(self, other: 'GateMatrix') -> 'GateMatrix':
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return GateMatrix(self._m @ other._m, check=False)

    def __eq__(self, other) -> bool:
        if isinstance(other, GateMatrix):
            return bool(np.array_equal(self._m, other._m))
        return False

    def __hash__(self) -> int:
        return hash(self._m.tobytes())

    def __repr__(self) -> str:
        return f"GateMatrix({self._m.tolist()})"


class DensityMatrix:
    """
    A 2x2 density matrix: Hermitian, unit trace and positive semidefinite.

    :param matrix: The matrix entries.
    :type matrix: array-like
    """
    __slots__ = ("_m",)

    def __init__(self, matrix) -> None:
        m = _frozen(matrix, (2, 2))
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidArgumentError("Density matrix is not Hermitian")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidArgumentError(f"Density matrix trace is {trace}, expected 1")
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues.min() < -PSD_TOL:
            raise InvalidArgumentError(f"Density matrix is not positive semidefinite (eigenvalues {eigenvalues})")
        self._m = m

    @property
    def m(self) -> np.ndarray:
        return self._m

    def determinant(self) -> float:
        # real for Hermitian input
        return float(np.linalg.det(self._m).real)

    def __repr__(self) -> str:
        return f"DensityMatrix({self._m.tolist()})"


class BlochVector:
    """
    A point on or inside the Bloch sphere.

    :param x: The x coordinate.
    :type x: float
    :param y: The y coordinate.
    :type y: float
    :param z: The z coordinate.
    :type z: float
    """
    __slots__ = ("_x", "_y", "_z")

    def __init__(self, x: float, y: float, z: float) -> None:
        if not all(math.isfinite(v) for v in (x, y, z)):
            raise InvalidArgumentError("Bloch vector components must be finite")
        if x * x + y * y + z * z > 1.0 + BLOCH_TOL:
            raise InvalidArgumentError("Bloch vector lies outside the unit ball")
        self._x = float(x)
        self._y = float(y)
        self._z = float(z)

    @property
    def x(self) -> float:
        return self._x

    @property
    def y(self) -> float:
        return self._y

    @property
    def z(self) -> float:
        return self._z

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self._x, self._y, self._z)

    def length(self) -> float:
        return math.sqrt(self._x ** 2 + self._y ** 2 + self._z ** 2)

    def __repr__(self) -> str:
        return f"BlochVector({self._x:.6g}, {self._y:.6g}, {self._z:.6g})"


def _is_unitary_array(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(2))) <= tol)


def is_unitary(gate: GateMatrix, tol: float = UNITARY_TOL) -> bool:
    """
    Checks max|U^dagger U - I| <= tol.

    :param gate: The gate to check.
    :type gate: GateMatrix
    :param tol: The tolerance.
    :type tol: float

    :return: True if the gate is unitary within the tolerance.
    :rtype: bool
    """
    return _is_unitary_array(gate.m, tol)


# Batched matrix builders. Angles broadcast; the result has shape angles.shape + (2, 2).

def u_gate_array(theta, phi, lam) -> np.ndarray:
    theta, phi, lam = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float), np.asarray(lam, float))
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    out = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = -np.exp(1j * lam) * s
    out[..., 1, 0] = np.exp(1j * phi) * s
    out[..., 1, 1] = np.exp(1j * (phi + lam)) * c
    return out


def u_gate_derivative_arrays(theta, phi, lam) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Partial derivatives of U(theta, phi, lam) with respect to each of its three angles.

    :return: (dU/dtheta, dU/dphi, dU/dlam), each of shape angles.shape + (2, 2).
    :rtype: tuple
    """
    theta, phi, lam = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float), np.asarray(lam, float))
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    e_phi = np.exp(1j * phi)
    e_lam = np.exp(1j * lam)
    e_both = np.exp(1j * (phi + lam))

    d_theta = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    d_theta[..., 0, 0] = -0.5 * s
    d_theta[..., 0, 1] = -0.5 * e_lam * c
    d_theta[..., 1, 0] = 0.5 * e_phi * c
    d_theta[..., 1, 1] = -0.5 * e_both * s

    d_phi = np.zeros(theta.shape + (2, 2), dtype=np.complex128)
    d_phi[..., 1, 0] = 1j * e_phi * s
    d_phi[..., 1, 1] = 1j * e_both * c

    d_lam = np.zeros(theta.shape + (2, 2), dtype=np.complex128)
    d_lam[..., 0, 1] = -1j * e_lam * s
    d_lam[..., 1, 1] = 1j * e_both * c
    return d_theta, d_phi, d_lam


def rz_array(angle) -> np.ndarray:
    angle = np.asarray(angle, float)
    out = np.zeros(angle.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = np.exp(-0.5j * angle)
    out[..., 1, 1] = np.exp(0.5j * angle)
    return out


def rz_derivative_array(angle) -> np.ndarray:
    angle = np.asarray(angle, float)
    out = np.zeros(angle.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = -0.5j * np.exp(-0.5j * angle)
    out[..., 1, 1] = 0.5j * np.exp(0.5j * angle)
    return out


def ry_array(angle) -> np.ndarray:
    angle = np.asarray(angle, float)
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    out = np.empty(angle.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def ry_derivative_array(angle) -> np.ndarray:
    angle = np.asarray(angle, float)
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    out = np.empty(angle.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = -0.5 * s
    out[..., 0, 1] = -0.5 * c
    out[..., 1, 0] = 0.5 * c
    out[..., 1, 1] = -0.5 * s
    return out


def make_u_gate(theta: float, phi: float, lam: float) -> GateMatrix:
    """
    Builds the general single-qubit gate

        U(theta, phi, lam) = [[cos(theta/2),             -e^{i lam} sin(theta/2)],
                              [e^{i phi} sin(theta/2),   e^{i(phi+lam)} cos(theta/2)]]

    :param theta: Polar rotation angle in radians.
    :type theta: float
    :param phi: Phase angle in radians.
    :type phi: float
    :param lam: Phase angle in radians.
    :type lam: float

    :return: The gate.
    :rtype: GateMatrix
    """
    _check_angles(theta, phi, lam)
    return GateMatrix(u_gate_array(theta, phi, lam))


def make_rz(angle: float) -> GateMatrix:
    """
    Rotation about the Z axis, diag(e^{-i angle/2}, e^{i angle/2}).

    :param angle: The rotation angle in radians.
    :type angle: float

    :return: The gate.
    :rtype: GateMatrix
    """
    _check_angles(angle)
    return GateMatrix(rz_array(angle))


def make_ry(angle: float) -> GateMatrix:
    """
    Rotation about the Y axis; equal to U(angle, 0, 0).

    :param angle: The rotation angle in radians.
    :type angle: float

    :return: The gate.
    :rtype: GateMatrix
    """
    _check_angles(angle)
    return GateMatrix(ry_array(angle))


IDENTITY = GateMatrix(np.eye(2))
PAULI_X = GateMatrix([[0, 1], [1, 0]])
PAULI_Y = GateMatrix([[0, -1j], [1j, 0]])
PAULI_Z = GateMatrix([[1, 0], [0, -1]])
HADAMARD = GateMatrix(np.array([[1, 1], [1, -1]]) / math.sqrt(2.0))

KET_0 = QubitState(1.0, 0.0)
KET_1 = QubitState(0.0, 1.0)


def compose(*gates: GateMatrix) -> GateMatrix:
    """
    Multiplies gates in operator order: compose(A, B) acts as A after B.

    :return: The product gate.
    :rtype: GateMatrix
    """
    result = np.eye(2, dtype=np.complex128)
    for gate in gates:
        result = result @ gate.m
    return GateMatrix(result, check=False)


def apply(gate: GateMatrix, state: QubitState) -> QubitState:
    """
    Applies a gate to a state.

    :param gate: The gate.
    :type gate: GateMatrix
    :param state: The input state.
    :type state: QubitState

    :return: The output state.
    :rtype: QubitState
    """
    return QubitState.from_array(gate.m @ state.amplitudes)


def prob0(state: QubitState) -> float:
    """
    Probability of measuring 0 in the computational basis, |a0|^2.

    :param state: The state.
    :type state: QubitState

    :return: P(0).
    :rtype: float
    """
    return float(abs(state.a0) ** 2)


def prob1(state: QubitState) -> float:
    return float(abs(state.a1) ** 2)


def pure_fidelity(s1: QubitState, s2: QubitState) -> float:
    """
    Overlap |<s1|s2>|^2 of two pure states.

    :param s1: The first state.
    :type s1: QubitState
    :param s2: The second state.
    :type s2: QubitState

    :return: The fidelity in [0, 1].
    :rtype: float
    """
    overlap = np.vdot(s1.amplitudes, s2.amplitudes)
    return float(min(1.0, max(0.0, abs(overlap) ** 2)))


def density_matrix(state: QubitState) -> DensityMatrix:
    """
    The projector |psi><psi| of a pure state.

    :param state: The state.
    :type state: QubitState

    :return: The density matrix.
    :rtype: DensityMatrix
    """
    return DensityMatrix(np.outer(state.amplitudes, state.amplitudes.conj()))


def mixed_fidelity(r: Union[DensityMatrix, np.ndarray], s: Union[DensityMatrix, np.ndarray]) -> float:
    """
    Fidelity (tr sqrt(sqrt(r) s sqrt(r)))^2 between two density matrices, evaluated with the
    2x2 closed form tr(r s) + 2 sqrt(det r det s).

    :param r: The first density matrix.
    :type r: DensityMatrix
    :param s: The second density matrix.
    :type s: DensityMatrix

    :return: The fidelity in [0, 1].
    :rtype: float
    """
    if not isinstance(r, DensityMatrix):
        r = DensityMatrix(r)
    if not isinstance(s, DensityMatrix):
        s = DensityMatrix(s)
    overlap = float(np.trace(r.m @ s.m).real)
    det_product = max(0.0, r.determinant()) * max(0.0, s.determinant())
    return float(min(1.0, max(0.0, overlap + 2.0 * math.sqrt(det_product))))


def to_bloch(state: QubitState) -> BlochVector:
    """
    Maps a pure state to (sin t cos p, sin t sin p, cos t) on the Bloch sphere.

    :param state: The state.
    :type state: QubitState

    :return: The Bloch vector.
    :rtype: BlochVector
    """
    cross = state.a0.conjugate() * state.a1
    x = 2.0 * cross.real
    y = 2.0 * cross.imag
    z = abs(state.a0) ** 2 - abs(state.a1) ** 2
    length = math.sqrt(x * x + y * y + z * z)
    # rounding can push a pure state a hair outside the sphere
    if length > 1.0:
        x, y, z = x / length, y / length, z / length
    return BlochVector(x, y, z)


def bloch_to_state(theta: float, phi: float) -> QubitState:
    """
    The pure state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.

    :param theta: Polar angle in radians.
    :type theta: float
    :param phi: Azimuthal angle in radians.
    :type phi: float

    :return: The state.
    :rtype: QubitState
    """
    _check_angles(theta, phi)
    return QubitState(math.cos(theta / 2.0), np.exp(1j * phi) * math.sin(theta / 2.0))
