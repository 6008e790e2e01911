"""Pauli-string basis, the real 4^n vector picture of density operators, and
the matrix form of channels acting on that vector.

The 4^n coefficients are r_i = Tr[P(i) rho] / 2^n in lexicographic (I, X, Y, Z)
string order with qubit 0 as the most significant base-4 digit, so the
identity-string entry is pinned to 1/2^n by unit trace.  This representation
scales as 4^n and is meant for small-n diagnostics and cross-checks, not the
production simulation path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .quantum import (
    DensityMatrix,
    PAULI_BY_NAME,
    QuantumError,
)

PAULI_LETTERS = "IXYZ"

# 4^n strings get expensive fast; this bound keeps diagnostics snappy.
MAX_VECTOR_QUBITS = 6
MAX_TRANSFER_QUBITS = 3


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, e.g. "IXZ" on three qubits."""

    letters: str

    def __post_init__(self) -> None:
        if not self.letters:
            raise QuantumError("Pauli string must have at least one letter")
        bad = set(self.letters) - set(PAULI_LETTERS)
        if bad:
            raise QuantumError(f"invalid Pauli letters {sorted(bad)!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def index(self) -> int:
        """Lexicographic index with I=0, X=1, Y=2, Z=3 and qubit 0 most significant."""
        idx = 0
        for letter in self.letters:
            idx = idx * 4 + PAULI_LETTERS.index(letter)
        return idx

    def matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n realization."""
        return reduce(np.kron, (PAULI_BY_NAME[c] for c in self.letters))


def pauli_string_from_index(n_qubits: int, index: int) -> PauliString:
    """Inverse of PauliString.index for an n-qubit register."""
    if not 0 <= index < 4**n_qubits:
        raise QuantumError(f"index {index} out of range for {n_qubits} qubits")
    letters = []
    for _ in range(n_qubits):
        letters.append(PAULI_LETTERS[index % 4])
        index //= 4
    return PauliString("".join(reversed(letters)))


def all_pauli_strings(n_qubits: int) -> list[PauliString]:
    """All 4^n strings in lexicographic order."""
    return [pauli_string_from_index(n_qubits, i) for i in range(4**n_qubits)]


def z_string_index(n_qubits: int, qubit: int) -> int:
    """Index of the single-site Z string on ``qubit``."""
    letters = ["I"] * n_qubits
    letters[qubit] = "Z"
    return PauliString("".join(letters)).index()


@dataclass(frozen=True)
class PauliStateVector:
    """Real 4^n coefficient vector of a density operator in the Pauli basis."""

    n_qubits: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if coeffs.shape[0] != 4**self.n_qubits:
            raise QuantumError(
                f"Pauli vector on {self.n_qubits} qubits needs {4**self.n_qubits} "
                f"entries, got {coeffs.shape[0]}"
            )
        expected = 1.0 / 2**self.n_qubits
        if abs(coeffs[0] - expected) > 1e-12:
            raise QuantumError(
                f"identity coefficient {coeffs[0]!r} != 1/2^n = {expected!r}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def z_signal(self, qubit: int) -> float:
        """Tr[Z_qubit rho] recovered from the coefficient of the Z string."""
        return float(self.coeffs[z_string_index(self.n_qubits, qubit)] * 2**self.n_qubits)


_MATRIX_CACHE: dict = {}


def _string_matrices(n_qubits: int) -> list:
    """Dense matrices of every n-qubit Pauli string; cached for small n."""
    if n_qubits <= 4:
        if n_qubits not in _MATRIX_CACHE:
            _MATRIX_CACHE[n_qubits] = [
                s.matrix() for s in all_pauli_strings(n_qubits)
            ]
        return _MATRIX_CACHE[n_qubits]
    return [s.matrix() for s in all_pauli_strings(n_qubits)]


def _pauli_coeffs_array(mat: np.ndarray, n_qubits: int) -> np.ndarray:
    dim = 2**n_qubits
    coeffs = np.empty(4**n_qubits)
    for i, p in enumerate(_string_matrices(n_qubits)):
        # Tr[P M] as an elementwise sum avoids forming the product matrix.
        value = complex(np.sum(p.T * mat))
        coeffs[i] = value.real / dim
    return coeffs


def pauli_expectation_vector(
    rho: DensityMatrix, max_qubits: int = MAX_VECTOR_QUBITS
) -> PauliStateVector:
    """Coefficients Tr[P(i) rho]/2^n for every Pauli string, in basis order."""
    if rho.n_qubits > max_qubits:
        raise QuantumError(
            f"Pauli vector of {rho.n_qubits} qubits exceeds diagnostic budget "
            f"({max_qubits})"
        )
    return PauliStateVector(rho.n_qubits, _pauli_coeffs_array(rho.matrix, rho.n_qubits))


def reconstruct_density(vec: PauliStateVector) -> DensityMatrix:
    """Rebuild rho = sum_i coeffs[i] P(i) from its Pauli coefficients."""
    dim = 2**vec.n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    for c, p in zip(vec.coeffs, _string_matrices(vec.n_qubits)):
        if c != 0.0:
            mat += c * p
    return DensityMatrix(vec.n_qubits, mat)


def transfer_matrix(
    channel: Callable[[np.ndarray], np.ndarray],
    n_qubits: int,
    max_qubits: int = MAX_TRANSFER_QUBITS,
) -> np.ndarray:
    """Real 4^n x 4^n matrix K with K_ij = Tr[P(i) channel(P(j))] / 2^n.

    ``channel`` is the linear action on raw 2^n x 2^n arrays; feeding it Pauli
    strings (trace-zero, not states) is what defines the matrix elements.
    Evolving the coefficient vector by K reproduces the dense dynamics.
    """
    if n_qubits > max_qubits:
        raise QuantumError(
            f"transfer matrix of {n_qubits} qubits exceeds oracle budget "
            f"({max_qubits})"
        )
    strings = all_pauli_strings(n_qubits)
    dim = 2**n_qubits
    size = 4**n_qubits
    out = np.empty((size, size))
    for j, string in enumerate(strings):
        image = np.asarray(channel(string.matrix()), dtype=complex)
        if image.shape != (dim, dim):
            raise QuantumError(
                f"channel output shape {image.shape} does not match dim {dim}"
            )
        out[:, j] = _pauli_coeffs_array(image, n_qubits)
    return out


def conjugation_channel(u: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """The linear map M -> U M U^dag."""
    u = np.asarray(u, dtype=complex)
    u_dag = u.conj().T
    return lambda mat: u @ mat @ u_dag


def kraus_channel_function(
    operators: Sequence[np.ndarray],
) -> Callable[[np.ndarray], np.ndarray]:
    """The linear map M -> sum_i K_i M K_i^dag."""
    ops = [np.asarray(k, dtype=complex) for k in operators]

    def apply(mat: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(mat, dtype=complex))
        for k in ops:
            out += k @ mat @ k.conj().T
        return out

    return apply
