"""Exact dense simulation of few-qubit states, channels, and Hamiltonian dynamics.

Everything here is plain dense linear algebra on 2^n-dimensional arrays.
Qubit 0 is the leftmost tensor factor and the most significant bit of the
computational-basis index; that convention is fixed here and used by every
module in the package.

States and operators are immutable value objects; all operations are pure
functions, so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np

# Default guard against accidental huge allocations (2^12 = 4096 amplitudes).
MAX_QUBITS = 12

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_EIG_FLOOR = -1e-9
UNITARY_ATOL = 1e-10
KRAUS_ATOL = 1e-10

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

PAULI_BY_NAME = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


class QuantumError(ValueError):
    """Raised when a state, operator, or operation violates its contract."""


def _check_qubit_count(n_qubits: int, max_qubits: int = MAX_QUBITS) -> None:
    if not isinstance(n_qubits, (int, np.integer)) or n_qubits < 1:
        raise QuantumError(f"qubit count must be a positive integer, got {n_qubits!r}")
    if n_qubits > max_qubits:
        raise QuantumError(
            f"qubit count {n_qubits} exceeds the configured maximum {max_qubits}"
        )


def _as_matrix(op: Union[np.ndarray, "Observable"]) -> np.ndarray:
    if isinstance(op, Observable):
        return op.matrix
    return np.asarray(op, dtype=complex)


@dataclass(frozen=True)
class StateVector:
    """Pure state on ``n_qubits`` qubits: a normalized complex amplitude vector."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        _check_qubit_count(self.n_qubits)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**self.n_qubits:
            raise QuantumError(
                f"state on {self.n_qubits} qubits needs {2**self.n_qubits} amplitudes, "
                f"got {amps.shape[0]}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise QuantumError(f"state is not normalized: |psi|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def density_matrix(self) -> "DensityMatrix":
        """Return the rank-one projector |psi><psi| as a DensityMatrix."""
        amps = self.amplitudes
        return DensityMatrix(self.n_qubits, np.outer(amps, amps.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: Hermitian, positive semidefinite, unit-trace 2^n x 2^n matrix."""

    n_qubits: int
    matrix: np.ndarray
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        _check_qubit_count(self.n_qubits)
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2**self.n_qubits
        if mat.shape != (dim, dim):
            raise QuantumError(
                f"density matrix on {self.n_qubits} qubits must be {dim}x{dim}, "
                f"got {mat.shape}"
            )
        object.__setattr__(self, "matrix", mat)
        if self.validate:
            self.check_physical()

    def check_physical(
        self,
        hermitian_atol: float = HERMITIAN_ATOL,
        trace_atol: float = TRACE_ATOL,
        eig_floor: float = PSD_EIG_FLOOR,
    ) -> None:
        """Raise QuantumError unless Hermitian, unit trace, and PSD within tolerance."""
        mat = self.matrix
        herm_err = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_err > hermitian_atol:
            raise QuantumError(f"density matrix not Hermitian: residual {herm_err:g}")
        trace_err = abs(complex(np.trace(mat)) - 1.0)
        if trace_err > trace_atol:
            raise QuantumError(f"density matrix trace off by {trace_err:g}")
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)[0])
        if min_eig < eig_floor:
            raise QuantumError(f"density matrix has negative eigenvalue {min_eig:g}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class Observable:
    """Hermitian operator whose expectation Tr[A rho] is a measurable quantity."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise QuantumError(f"observable must be a square matrix, got {mat.shape}")
        herm_err = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_err > HERMITIAN_ATOL:
            raise QuantumError(f"observable not Hermitian: residual {herm_err:g}")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class KrausChannel:
    """Quantum channel given by Kraus operators with sum_i K_i^dag K_i = I."""

    operators: tuple

    def __init__(self, operators: Iterable[np.ndarray]):
        ops = tuple(np.asarray(k, dtype=complex) for k in operators)
        if not ops:
            raise QuantumError("channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise QuantumError("all Kraus operators must be square and same size")
        total = sum(k.conj().T @ k for k in ops)
        err = float(np.max(np.abs(total - np.eye(dim))))
        if err > KRAUS_ATOL:
            raise QuantumError(f"channel is not trace preserving: residual {err:g}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def ket_zero(n_qubits: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """All-zeros computational basis state on ``n_qubits`` qubits."""
    _check_qubit_count(n_qubits, max_qubits)
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def rotation_gate(axis: str, angle: float) -> np.ndarray:
    """Single-qubit rotation exp(-i * angle * G) for G in {X, Y, Z}.

    Note the full-angle convention: rotation_gate("Y", arccos(sqrt(x))) maps
    |0> to sqrt(x)|0> + sqrt(1-x)|1>.  Half-angle generator rotations live in
    the parameterized-circuit module.
    """
    if axis not in ("X", "Y", "Z"):
        raise QuantumError(f"rotation axis must be X, Y, or Z, got {axis!r}")
    if not np.isfinite(angle):
        raise QuantumError(f"rotation angle must be finite, got {angle!r}")
    g = PAULI_BY_NAME[axis]
    # G^2 = I, so exp(-i a G) = cos(a) I - i sin(a) G.
    return np.cos(angle) * I2 - 1j * np.sin(angle) * g


def _check_unitary(gate: np.ndarray, atol: float = UNITARY_ATOL) -> None:
    dim = gate.shape[0]
    err = float(np.max(np.abs(gate.conj().T @ gate - np.eye(dim))))
    if err > atol:
        raise QuantumError(f"gate is not unitary: residual {err:g}")


def _apply_gate_tensor(
    array: np.ndarray, gate: np.ndarray, targets: Sequence[int], n_qubits: int
) -> np.ndarray:
    """Contract ``gate`` against the target axes of a (2,)*rank tensor view.

    ``array`` may be a state (rank n) or any batch whose leading n axes are
    qubit axes; only the first n axes are touched.
    """
    k = len(targets)
    tensor = array.reshape((2,) * n_qubits + array.shape[1:])
    gate_tensor = gate.reshape((2,) * (2 * k))
    moved = np.tensordot(gate_tensor, tensor, axes=(range(k, 2 * k), targets))
    # tensordot puts the contracted output axes first; restore original order.
    moved = np.moveaxis(moved, range(k), targets)
    return moved.reshape(array.shape)


def apply_gate(
    state: StateVector, gate: np.ndarray, targets: Union[int, Sequence[int]]
) -> StateVector:
    """Apply a unitary on the given target qubits: (I x ... x U x ... x I)|psi>."""
    if isinstance(targets, (int, np.integer)):
        targets = (int(targets),)
    targets = tuple(int(t) for t in targets)
    n = state.n_qubits
    if len(set(targets)) != len(targets):
        raise QuantumError(f"target qubits must be distinct, got {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise QuantumError(f"target qubit {t} out of range for {n} qubits")
    gate = np.asarray(gate, dtype=complex)
    dim = 2 ** len(targets)
    if gate.shape != (dim, dim):
        raise QuantumError(
            f"gate of shape {gate.shape} does not match {len(targets)} target qubits"
        )
    _check_unitary(gate)
    out = _apply_gate_tensor(state.amplitudes, gate, targets, n)
    return StateVector(n, out)


def expectation(
    state: Union[StateVector, DensityMatrix], obs: Union[np.ndarray, Observable]
) -> float:
    """<psi|A|psi> for pure states or Tr[A rho] for density matrices."""
    mat = _as_matrix(obs)
    if isinstance(state, StateVector):
        if mat.shape != (state.dim, state.dim):
            raise QuantumError(
                f"observable shape {mat.shape} does not match state dim {state.dim}"
            )
        value = complex(np.vdot(state.amplitudes, mat @ state.amplitudes))
    elif isinstance(state, DensityMatrix):
        if mat.shape != (state.dim, state.dim):
            raise QuantumError(
                f"observable shape {mat.shape} does not match state dim {state.dim}"
            )
        value = complex(np.trace(mat @ state.matrix))
    else:
        raise QuantumError(f"expected StateVector or DensityMatrix, got {type(state)}")
    if abs(value.imag) > 1e-10:
        raise QuantumError(f"expectation has imaginary residue {value.imag:g}")
    return float(value.real)


def pauli_on(n_qubits: int, letter: str, qubit: int) -> np.ndarray:
    """Dense single-site Pauli ``letter`` acting on ``qubit`` of an n-qubit register."""
    if letter not in PAULI_BY_NAME:
        raise QuantumError(f"unknown Pauli letter {letter!r}")
    if not 0 <= qubit < n_qubits:
        raise QuantumError(f"qubit {qubit} out of range for {n_qubits} qubits")
    op = np.ones((1, 1), dtype=complex)
    for q in range(n_qubits):
        op = np.kron(op, PAULI_BY_NAME[letter] if q == qubit else I2)
    return op


def z_diagonal(n_qubits: int, qubit: int) -> np.ndarray:
    """Diagonal of Z on ``qubit``: +1/-1 per basis index (qubit 0 = MSB)."""
    if not 0 <= qubit < n_qubits:
        raise QuantumError(f"qubit {qubit} out of range for {n_qubits} qubits")
    idx = np.arange(2**n_qubits)
    bit = (idx >> (n_qubits - 1 - qubit)) & 1
    return 1.0 - 2.0 * bit


def ising_hamiltonian(
    n_qubits: int, couplings: np.ndarray, field_z: float
) -> Observable:
    """Fully connected transverse-field Ising Hamiltonian.

    H = sum_{i<j} J_ij X_i X_j + sum_i h Z_i, with each unordered pair summed
    once (double-counting would only rescale J, but fixing the convention keeps
    seeded coupling draws reproducible).
    """
    _check_qubit_count(n_qubits)
    j = np.asarray(couplings, dtype=float)
    if j.shape != (n_qubits, n_qubits):
        raise QuantumError(
            f"coupling matrix must be {n_qubits}x{n_qubits}, got {j.shape}"
        )
    if float(np.max(np.abs(j - j.T))) > 0.0:
        raise QuantumError("coupling matrix must be symmetric")
    if float(np.max(np.abs(np.diag(j)))) > 0.0:
        raise QuantumError("coupling matrix must have zero diagonal")
    dim = 2**n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for a in range(n_qubits):
        for b in range(a + 1, n_qubits):
            if j[a, b] != 0.0:
                h += j[a, b] * (pauli_on(n_qubits, "X", a) @ pauli_on(n_qubits, "X", b))
    if field_z != 0.0:
        diag = np.zeros(dim)
        for a in range(n_qubits):
            diag += field_z * z_diagonal(n_qubits, a)
        h += np.diag(diag).astype(complex)
    return Observable(h)


def evolve_unitary(hamiltonian: Union[np.ndarray, Observable], t: float) -> np.ndarray:
    """U = exp(-i H t) via Hermitian eigendecomposition (exact and stable)."""
    h = _as_matrix(hamiltonian)
    herm_err = float(np.max(np.abs(h - h.conj().T)))
    if herm_err > HERMITIAN_ATOL:
        raise QuantumError(f"Hamiltonian not Hermitian: residual {herm_err:g}")
    if not np.isfinite(t):
        raise QuantumError(f"evolution time must be finite, got {t!r}")
    eigvals, eigvecs = np.linalg.eigh(h)
    phases = np.exp(-1j * eigvals * t)
    return (eigvecs * phases) @ eigvecs.conj().T


def apply_channel(rho: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    """Apply a Kraus channel: rho' = sum_i K_i rho K_i^dag."""
    if channel.dim != rho.dim:
        raise QuantumError(
            f"channel dim {channel.dim} does not match state dim {rho.dim}"
        )
    out = np.zeros_like(rho.matrix)
    for k in channel.operators:
        out += k @ rho.matrix @ k.conj().T
    out = (out + out.conj().T) / 2.0
    return DensityMatrix(rho.n_qubits, out)


def _partial_trace_array(
    mat: np.ndarray, keep: Sequence[int], n_qubits: int
) -> np.ndarray:
    """Partial trace on a raw 2^n x 2^n array; kept qubits stay in index order."""
    keep = sorted(keep)
    traced = [q for q in range(n_qubits) if q not in keep]
    tensor = mat.reshape((2,) * (2 * n_qubits))
    # Tracing the highest qubit first keeps the remaining axis positions stable.
    for q in sorted(traced, reverse=True):
        rank = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=q, axis2=q + rank)
    dim = 2 ** len(keep)
    return tensor.reshape(dim, dim)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out all qubits not in ``keep``; output qubits keep their relative order."""
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise QuantumError("keep set must be nonempty")
    for q in keep:
        if not 0 <= q < rho.n_qubits:
            raise QuantumError(f"kept qubit {q} out of range for {rho.n_qubits} qubits")
    if len(keep) == rho.n_qubits:
        return rho
    reduced = _partial_trace_array(rho.matrix, keep, rho.n_qubits)
    return DensityMatrix(len(keep), reduced)


def permute_qubits(mat: np.ndarray, perm: Sequence[int], n_qubits: int) -> np.ndarray:
    """Reorder the qubits of a density-matrix-shaped array.

    ``perm[i]`` gives the source qubit that lands at position ``i``.
    """
    perm = list(perm)
    axes = perm + [p + n_qubits for p in perm]
    tensor = mat.reshape((2,) * (2 * n_qubits))
    dim = 2**n_qubits
    return tensor.transpose(axes).reshape(dim, dim)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    """I / 2^n."""
    _check_qubit_count(n_qubits)
    dim = 2**n_qubits
    return DensityMatrix(n_qubits, np.eye(dim, dtype=complex) / dim)


def unitary_channel(u: np.ndarray) -> KrausChannel:
    """Channel with the single Kraus operator U."""
    _check_unitary(np.asarray(u, dtype=complex))
    return KrausChannel([u])


def dephasing_channel(n_qubits: int) -> KrausChannel:
    """Non-selective computational-basis measurement: keeps only the diagonal."""
    dim = 2**n_qubits
    ops = []
    for i in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        k[i, i] = 1.0
        ops.append(k)
    return KrausChannel(ops)


ChannelFunction = Callable[[np.ndarray], np.ndarray]
