"""Quantum extreme learning machine: static inputs pushed through a fixed random
entangling circuit, per-qubit Z expectations read out as features, and a plain
pseudoinverse classifier on top.

The feature map never gets trained; all the nonlinearity comes from the
product-state encoding and the entangling unitary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .quantum import (
    QuantumError,
    StateVector,
    _apply_gate_tensor,
    rotation_gate,
    z_diagonal,
)
from .regression import ReadoutWeights, fit_linear, threshold_accuracy

CZ_GATE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)

# Disk rule from the two-class benchmark: class 0 inside radius^2 = 0.15
# around (0.5, 0.5), class 1 outside.
CIRCLE_RADIUS_SQ = 0.15
CIRCLE_CENTER = (0.5, 0.5)

# Gate word of one two-qubit block, read per qubit as X-Z-X | CZ | X-Z | CZ | X.
# Census per block: 8 X-rotations, 4 Z-rotations, 2 CZs.
BLOCK_LAYOUT = (
    ("RX", "a"), ("RX", "b"), ("RZ", "a"), ("RZ", "b"), ("RX", "a"), ("RX", "b"),
    ("CZ", "ab"),
    ("RX", "a"), ("RX", "b"), ("RZ", "a"), ("RZ", "b"),
    ("CZ", "ab"),
    ("RX", "a"), ("RX", "b"),
)


@dataclass(frozen=True)
class EncodingSpec:
    """How a bounded input vector becomes per-qubit Y-rotation angles.

    rule "uniform": every qubit gets arccos(sqrt(x)) of the scalar input.
    rule "paired": even qubits get arccos(sqrt(x0)), odd qubits
    arccos(sqrt(x1)); the classification default, where all nonlinearity
    beyond 2x-1 must come from the entangling circuit.
    rule "paired-harmonics": qubit 2k gets k*arccos(sqrt(x0)) and qubit 2k+1
    gets k*arccos(sqrt(x1)); the first pair sits at angle 0.  Used for the
    response-surface demo; its harmonic angles alone already span separable
    polynomials of each input.
    An optional nonlinearity is applied to each component before the arccos.
    """

    n_qubits: int
    rule: str = "uniform"
    nonlinearity: Optional[Callable[[float], float]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise QuantumError("encoding needs at least one qubit")
        if self.rule not in ("uniform", "paired", "paired-harmonics"):
            raise QuantumError(f"unknown encoding rule {self.rule!r}")

    @property
    def input_dim(self) -> int:
        return 1 if self.rule == "uniform" else 2

    @classmethod
    def for_classification(cls, n_qubits: int) -> "EncodingSpec":
        """The two-input encoding used by the disk classification benchmark."""
        return cls(n_qubits, rule="paired")

    def angles(self, x: Sequence[float]) -> np.ndarray:
        """Per-qubit rotation angles for one input vector."""
        values = np.atleast_1d(np.asarray(x, dtype=float))
        if values.shape[0] != self.input_dim:
            raise QuantumError(
                f"rule {self.rule!r} expects {self.input_dim} input components, "
                f"got {values.shape[0]}"
            )
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise QuantumError(f"input components must lie in [0, 1], got {values}")
        if self.nonlinearity is not None:
            values = np.array([float(self.nonlinearity(v)) for v in values])
            if np.any(values < 0.0) or np.any(values > 1.0):
                raise QuantumError("nonlinearity must map [0, 1] into [0, 1]")
        base = np.arccos(np.sqrt(values))
        qubits = np.arange(self.n_qubits)
        if self.rule == "uniform":
            angles = np.full(self.n_qubits, base[0])
        elif self.rule == "paired":
            angles = np.where(qubits % 2 == 0, base[0], base[-1])
        else:
            harmonics = qubits // 2
            angles = harmonics * np.where(qubits % 2 == 0, base[0], base[-1])
        if not np.all(np.isfinite(angles)):
            raise QuantumError("encoding produced non-finite angles")
        return angles


def encode(x: Sequence[float], spec: EncodingSpec) -> StateVector:
    """Product-state encoding: per-qubit Y rotations applied to |0...0>."""
    amps = _encode_batch(np.atleast_2d(np.asarray(x, dtype=float)), spec)[:, 0]
    return StateVector(spec.n_qubits, amps)


def _encode_batch(inputs: np.ndarray, spec: EncodingSpec) -> np.ndarray:
    """Amplitudes of the encoded product states, shape (2^n, batch)."""
    batch = inputs.shape[0]
    angle_rows = np.stack([spec.angles(row) for row in inputs], axis=1)
    cos, sin = np.cos(angle_rows), np.sin(angle_rows)
    amps = np.ones((1, batch), dtype=complex)
    for q in range(spec.n_qubits):
        # exp(-i a Y)|0> = cos(a)|0> + sin(a)|1>; qubit 0 is the leftmost factor.
        amps = np.einsum("is,js->ijs", amps, np.stack([cos[q], sin[q]])).reshape(
            -1, batch
        )
    return amps


class RandomCircuit:
    """Seeded brickwork of two-qubit blocks (two CZs, 8 X- and 4 Z-rotations each).

    The gate list is fully determined by (n_qubits, seed, sweeps); rebuilding
    with the same arguments is bit-identical.  Angles are drawn uniformly from
    [0, 2pi) with numpy's PCG64 generator in gate order.
    """

    def __init__(self, n_qubits: int, seed: int, sweeps: int = 2):
        if n_qubits < 2:
            raise QuantumError("random entangling circuit needs at least 2 qubits")
        self.n_qubits = int(n_qubits)
        self.seed = int(seed)
        self.sweeps = int(sweeps)
        rng = np.random.default_rng(self.seed)
        gates: list[tuple[np.ndarray, tuple[int, ...]]] = []
        for _ in range(self.sweeps):
            for a, b in self.block_pairs(self.n_qubits):
                for kind, where in BLOCK_LAYOUT:
                    if kind == "CZ":
                        gates.append((CZ_GATE, (a, b)))
                    else:
                        target = a if where == "a" else b
                        angle = rng.uniform(0.0, 2.0 * np.pi)
                        gates.append((rotation_gate(kind[1], angle), (target,)))
        self.gates = tuple(gates)

    @staticmethod
    def block_pairs(n_qubits: int) -> list[tuple[int, int]]:
        """Brickwork covering: even pairs then odd pairs, n-1 blocks on a line."""
        pairs = [(a, a + 1) for a in range(0, n_qubits - 1, 2)]
        pairs += [(a, a + 1) for a in range(1, n_qubits - 1, 2)]
        return pairs

    def census(self) -> dict:
        """Gate counts per two-qubit block (sanity contract for the layout)."""
        kinds = [kind for kind, _ in BLOCK_LAYOUT]
        return {
            "x_rotations": kinds.count("RX"),
            "z_rotations": kinds.count("RZ"),
            "cz_gates": kinds.count("CZ"),
            "blocks_per_sweep": len(self.block_pairs(self.n_qubits)),
            "sweeps": self.sweeps,
        }

    def apply_to_amplitudes(self, amps: np.ndarray) -> np.ndarray:
        """Run the gate sequence over a (2^n,) or (2^n, batch) amplitude array."""
        out = amps
        for gate, targets in self.gates:
            out = _apply_gate_tensor(out, gate, targets, self.n_qubits)
        return out

    def apply(self, state: StateVector) -> StateVector:
        if state.n_qubits != self.n_qubits:
            raise QuantumError(
                f"circuit on {self.n_qubits} qubits cannot act on "
                f"{state.n_qubits}-qubit state"
            )
        return StateVector(self.n_qubits, self.apply_to_amplitudes(state.amplitudes))


@dataclass(frozen=True)
class LabeledDataset:
    """Two-dimensional inputs in the unit square with binary labels."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        inputs = np.asarray(self.inputs, dtype=float)
        labels = np.asarray(self.labels, dtype=int).reshape(-1)
        if inputs.ndim != 2 or inputs.shape[0] == 0:
            raise QuantumError("dataset inputs must be a nonempty 2-D array")
        if inputs.shape[0] != labels.shape[0]:
            raise QuantumError("inputs and labels must have equal length")
        if not np.all((labels == 0) | (labels == 1)):
            raise QuantumError("labels must be binary")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.inputs.shape[0]


def circle_label(x0: float, x1: float) -> int:
    """0 inside the disk, 1 outside."""
    d2 = (x0 - CIRCLE_CENTER[0]) ** 2 + (x1 - CIRCLE_CENTER[1]) ** 2
    return 0 if d2 <= CIRCLE_RADIUS_SQ else 1


def generate_circle_dataset(count: int, seed: int) -> LabeledDataset:
    """Uniform samples on the unit square labeled by the disk rule."""
    if count < 1:
        raise QuantumError("dataset size must be at least 1")
    rng = np.random.default_rng(seed)
    inputs = rng.uniform(0.0, 1.0, size=(count, 2))
    labels = np.array([circle_label(x0, x1) for x0, x1 in inputs])
    return LabeledDataset(inputs, labels)


def features(
    x: Sequence[float], circuit: Optional[RandomCircuit], spec: EncodingSpec
) -> np.ndarray:
    """Feature vector [1.0, inputs..., z_1..z_n] after the (optional) circuit."""
    return feature_matrix(np.atleast_2d(np.asarray(x, dtype=float)), circuit, spec)[0]


def feature_matrix(
    inputs: np.ndarray, circuit: Optional[RandomCircuit], spec: EncodingSpec
) -> np.ndarray:
    """Stacked feature vectors for a batch of inputs, one row per sample."""
    inputs = np.asarray(inputs, dtype=float)
    amps = _encode_batch(inputs, spec)
    if circuit is not None:
        if circuit.n_qubits != spec.n_qubits:
            raise QuantumError("circuit and encoding qubit counts differ")
        amps = circuit.apply_to_amplitudes(amps)
    probs = np.abs(amps) ** 2
    z_diagonals = np.stack([z_diagonal(spec.n_qubits, q) for q in range(spec.n_qubits)])
    z_values = z_diagonals @ probs
    bias = np.ones((1, inputs.shape[0]))
    return np.concatenate([bias, inputs.T, z_values]).T


def feature_labels(spec: EncodingSpec) -> tuple:
    names = ["bias"] + [f"x{i}" for i in range(spec.input_dim)]
    names += [f"z{q}" for q in range(spec.n_qubits)]
    return tuple(names)


def train_qelm(
    train: LabeledDataset, circuit: Optional[RandomCircuit], spec: EncodingSpec
) -> ReadoutWeights:
    """Least-squares fit of the feature map onto the 0/1 labels."""
    design = feature_matrix(train.inputs, circuit, spec)
    return fit_linear(design, train.labels.astype(float), feature_labels=feature_labels(spec))


def predict_qelm(
    inputs: np.ndarray,
    weights: ReadoutWeights,
    circuit: Optional[RandomCircuit],
    spec: EncodingSpec,
) -> np.ndarray:
    """Raw readout values y for a batch of inputs (threshold at 0.5 for labels)."""
    return weights.predict(feature_matrix(np.asarray(inputs, dtype=float), circuit, spec))


def evaluate_qelm(
    test: LabeledDataset,
    weights: ReadoutWeights,
    circuit: Optional[RandomCircuit],
    spec: EncodingSpec,
) -> float:
    """Classification accuracy with the readout thresholded at 0.5."""
    readout = predict_qelm(test.inputs, weights, circuit, spec)
    return threshold_accuracy(readout, test.labels.astype(float), threshold=0.5)
