"""Quantum circuit learning: parameterized circuits with Pauli-generated
rotations, analytic shift-rule gradients, and plain gradient descent on the
quadratic loss.

A rotation gate here is exp(-i (phi/2) P) for a Pauli-string generator P, so
the two-point shift rule [f(phi+e) - f(phi-e)] / (2 sin e) is the exact
partial derivative for any shift e in (0, pi).  Parameters may be shared
between gates; the gradient of a shared parameter is the sum of its
single-occurrence shift gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .pauli import PauliString
from .qelm import EncodingSpec, _encode_batch
from .quantum import Observable, QuantumError, _apply_gate_tensor, _check_unitary

DEFAULT_SHIFT = math.pi / 2.0


@dataclass(frozen=True)
class FixedUnitary:
    """Non-trainable gate on an ordered subset of qubits."""

    matrix: np.ndarray
    targets: tuple

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        targets = tuple(int(t) for t in self.targets)
        if mat.shape != (2 ** len(targets),) * 2:
            raise QuantumError(
                f"gate shape {mat.shape} does not match {len(targets)} targets"
            )
        _check_unitary(mat)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class ParamRotation:
    """exp(-i (phi/2) P) with a full-width Pauli-string generator."""

    generator: PauliString
    param_index: int

    def __post_init__(self) -> None:
        if self.param_index < 0:
            raise QuantumError("parameter index must be nonnegative")


Gate = Union[FixedUnitary, ParamRotation]


class ParameterizedCircuit:
    """Ordered gate list mixing fixed unitaries and generator rotations."""

    def __init__(
        self,
        n_qubits: int,
        gates: Sequence[Gate],
        n_params: int,
        encoding: Optional[EncodingSpec] = None,
    ):
        self.n_qubits = int(n_qubits)
        self.gates = tuple(gates)
        self.n_params = int(n_params)
        self.encoding = encoding
        if encoding is not None and encoding.n_qubits != self.n_qubits:
            raise QuantumError("encoding qubit count does not match circuit")
        for gate in self.gates:
            if isinstance(gate, ParamRotation):
                if gate.param_index >= self.n_params:
                    raise QuantumError(
                        f"gate parameter index {gate.param_index} out of range "
                        f"(n_params={self.n_params})"
                    )
                if gate.generator.n_qubits != self.n_qubits:
                    raise QuantumError(
                        "rotation generator width does not match circuit"
                    )
            elif isinstance(gate, FixedUnitary):
                for t in gate.targets:
                    if not 0 <= t < self.n_qubits:
                        raise QuantumError(f"gate target {t} out of range")
            else:
                raise QuantumError(f"unknown gate element {type(gate)}")
        # Dense generator matrices are reused every forward pass.
        self._generator_matrices = [
            g.generator.matrix() if isinstance(g, ParamRotation) else None
            for g in self.gates
        ]

    def occurrences(self, param_index: int) -> list[int]:
        """Positions in the gate list where this parameter appears."""
        return [
            pos
            for pos, gate in enumerate(self.gates)
            if isinstance(gate, ParamRotation) and gate.param_index == param_index
        ]

    def initial_amplitudes(self, x: Optional[Sequence[float]]) -> np.ndarray:
        if self.encoding is None:
            if x is not None:
                raise QuantumError("circuit has no encoding; pass x=None")
            amps = np.zeros(2**self.n_qubits, dtype=complex)
            amps[0] = 1.0
            return amps
        if x is None:
            raise QuantumError("circuit encodes inputs; x must be provided")
        return _encode_batch(np.atleast_2d(np.asarray(x, dtype=float)), self.encoding)[
            :, 0
        ]

    def run(
        self,
        x: Optional[Sequence[float]],
        params: np.ndarray,
        shift_at: Optional[dict] = None,
    ) -> np.ndarray:
        """Final amplitudes; ``shift_at`` maps gate positions to angle offsets."""
        params = np.asarray(params, dtype=float).reshape(-1)
        if params.shape[0] != self.n_params:
            raise QuantumError(
                f"expected {self.n_params} parameters, got {params.shape[0]}"
            )
        if not np.all(np.isfinite(params)):
            raise QuantumError("parameters must be finite")
        amps = self.initial_amplitudes(x)
        for pos, gate in enumerate(self.gates):
            if isinstance(gate, FixedUnitary):
                amps = _apply_gate_tensor(amps, gate.matrix, gate.targets, self.n_qubits)
            else:
                angle = params[gate.param_index]
                if shift_at is not None:
                    angle = angle + shift_at.get(pos, 0.0)
                generator = self._generator_matrices[pos]
                # P^2 = I, so exp(-i(a/2)P) psi = cos(a/2) psi - i sin(a/2) P psi.
                amps = math.cos(angle / 2.0) * amps - 1j * math.sin(angle / 2.0) * (
                    generator @ amps
                )
        return amps


@dataclass(frozen=True)
class TrainState:
    """Snapshot of one gradient-descent iteration."""

    params: np.ndarray
    learning_rate: float
    iteration: int

    def __post_init__(self) -> None:
        params = np.asarray(self.params, dtype=float).reshape(-1)
        if not np.all(np.isfinite(params)):
            raise QuantumError("parameters must be finite")
        object.__setattr__(self, "params", params)


@dataclass
class TrainResult:
    """Per-iteration trace of gradient descent plus a divergence flag."""

    states: list
    losses: list
    grad_norms: list
    diverged: bool = False

    @property
    def final_params(self) -> np.ndarray:
        return self.states[-1].params

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


def forward(
    x: Optional[Sequence[float]],
    params: np.ndarray,
    circuit: ParameterizedCircuit,
    obs: Union[np.ndarray, Observable],
) -> float:
    """Exact expectation of ``obs`` on the circuit output for one input."""
    mat = obs.matrix if isinstance(obs, Observable) else np.asarray(obs, dtype=complex)
    amps = circuit.run(x, params)
    value = complex(np.vdot(amps, mat @ amps))
    if abs(value.imag) > 1e-10:
        raise QuantumError(f"expectation has imaginary residue {value.imag:g}")
    return float(value.real)


def param_shift_grad(
    x: Optional[Sequence[float]],
    params: np.ndarray,
    circuit: ParameterizedCircuit,
    obs: Union[np.ndarray, Observable],
    param_index: int,
    eps: float = DEFAULT_SHIFT,
) -> float:
    """Analytic partial derivative of forward() with respect to one parameter.

    Unused parameters have derivative exactly 0.  Shared parameters sum the
    shift gradients of their occurrences (product rule).
    """
    if not 0.0 < eps < math.pi:
        raise QuantumError(f"shift eps must lie in (0, pi), got {eps}")
    positions = circuit.occurrences(param_index)
    if not positions:
        return 0.0
    mat = obs.matrix if isinstance(obs, Observable) else np.asarray(obs, dtype=complex)
    total = 0.0
    denom = 2.0 * math.sin(eps)
    for pos in positions:
        plus = circuit.run(x, params, shift_at={pos: eps})
        minus = circuit.run(x, params, shift_at={pos: -eps})
        val_plus = float(np.vdot(plus, mat @ plus).real)
        val_minus = float(np.vdot(minus, mat @ minus).real)
        total += (val_plus - val_minus) / denom
    return total


def loss_and_grad(
    dataset: Sequence[tuple],
    params: np.ndarray,
    circuit: ParameterizedCircuit,
    obs: Union[np.ndarray, Observable],
    eps: float = DEFAULT_SHIFT,
) -> tuple:
    """Quadratic loss sum_j (f_j - y_j)^2 and its full gradient vector."""
    if len(dataset) == 0:
        raise QuantumError("loss needs a nonempty dataset")
    params = np.asarray(params, dtype=float).reshape(-1)
    residuals = []
    grads = np.zeros((len(dataset), params.shape[0]))
    for j, (x, y) in enumerate(dataset):
        value = forward(x, params, circuit, obs)
        residuals.append(value - float(y))
        for l in range(params.shape[0]):
            grads[j, l] = param_shift_grad(x, params, circuit, obs, l, eps=eps)
    residuals = np.asarray(residuals)
    loss = float(np.sum(residuals**2))
    grad = 2.0 * residuals @ grads
    return loss, grad


def train(
    dataset: Sequence[tuple],
    circuit: ParameterizedCircuit,
    obs: Union[np.ndarray, Observable],
    init_params: np.ndarray,
    alpha: float,
    iters: int,
    eps: float = DEFAULT_SHIFT,
) -> TrainResult:
    """Plain gradient descent: phi <- phi - alpha * dL/dphi.

    The trace keeps every iterate.  If the final loss exceeds the initial one
    the result is flagged as diverged rather than silently returned; a
    non-finite loss aborts with the failing iteration in the message.
    """
    if alpha < 0.0:
        raise QuantumError(f"learning rate must be nonnegative, got {alpha}")
    params = np.asarray(init_params, dtype=float).reshape(-1).copy()
    states = [TrainState(params.copy(), alpha, 0)]
    loss, grad = loss_and_grad(dataset, params, circuit, obs, eps=eps)
    losses = [loss]
    grad_norms = [float(np.linalg.norm(grad))]
    for it in range(1, iters + 1):
        params = params - alpha * grad
        loss, grad = loss_and_grad(dataset, params, circuit, obs, eps=eps)
        if not np.isfinite(loss):
            raise QuantumError(f"loss became non-finite at iteration {it}")
        states.append(TrainState(params.copy(), alpha, it))
        losses.append(loss)
        grad_norms.append(float(np.linalg.norm(grad)))
    diverged = losses[-1] > losses[0]
    return TrainResult(states, losses, grad_norms, diverged=diverged)


def single_y_rotation_layers(
    n_qubits: int, layers: int, encoding: Optional[EncodingSpec] = None
) -> ParameterizedCircuit:
    """Y-rotation layers separated by CZ chains; one trailing rotation layer.

    A compact ansatz that can express low-order polynomial targets of the
    product encoding; (layers + 1) * n_qubits parameters in total.
    """
    from .qelm import CZ_GATE

    gates: list[Gate] = []
    index = 0

    def rotation_layer() -> None:
        nonlocal index
        for q in range(n_qubits):
            letters = ["I"] * n_qubits
            letters[q] = "Y"
            gates.append(ParamRotation(PauliString("".join(letters)), index))
            index += 1

    for _ in range(layers):
        rotation_layer()
        for q in range(n_qubits - 1):
            gates.append(FixedUnitary(CZ_GATE, (q, q + 1)))
    rotation_layer()
    return ParameterizedCircuit(n_qubits, gates, index, encoding=encoding)
