"""Quantum reservoir computing on an exact density-matrix simulator.

One reservoir step replaces the input qubit with rho_x = (I + (2x-1)Z)/2,
evolves under a random fully connected transverse-field Ising Hamiltonian for
a time interval tau, and reads the per-qubit Z expectations at V evenly spaced
sub-intervals (temporal multiplexing).  A pseudoinverse readout on the N*V
signals (plus an optional bias) does all the learning; the reservoir itself is
never trained.

The production path keeps the dense 2^N density matrix.  A 4^N Pauli-vector
twin (PauliTransferReservoir) reproduces the same trajectory through channel
transfer matrices and serves as a small-N cross-representation oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .pauli import (
    conjugation_channel,
    pauli_expectation_vector,
    transfer_matrix,
    z_string_index,
)
from .quantum import (
    DensityMatrix,
    Observable,
    QuantumError,
    _partial_trace_array,
    ising_hamiltonian,
    permute_qubits,
    z_diagonal,
)
from .regression import ReadoutWeights, fit_linear

DIVERGENCE_LOW = -0.5
DIVERGENCE_HIGH = 1.5


@dataclass(frozen=True)
class ReservoirConfig:
    """Everything defining one quantum reservoir instance."""

    n_qubits: int = 5
    j_range: tuple = (-0.5, 0.5)
    h_field: float = 1.0
    tau: float = 4.0
    v_nodes: int = 10
    input_qubit: int = 0
    seed: int = 0
    washout: int = 1000
    initial_state: str = "mixed"
    include_bias: bool = True

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise QuantumError("reservoir needs at least one qubit")
        if self.v_nodes < 1:
            raise QuantumError("virtual node count must be at least 1")
        if self.tau <= 0.0:
            raise QuantumError("evolution interval tau must be positive")
        if not 0 <= self.input_qubit < self.n_qubits:
            raise QuantumError("input qubit index out of range")
        if self.washout < 0:
            raise QuantumError("washout must be nonnegative")
        lo, hi = self.j_range
        if not lo < hi:
            raise QuantumError("j_range must be a nonempty interval")
        if self.initial_state not in ("mixed", "zero"):
            raise QuantumError("initial_state must be 'mixed' or 'zero'")


@dataclass
class ReservoirState:
    """Dense reservoir density matrix plus the number of inputs consumed."""

    rho: np.ndarray
    step_index: int = 0

    def as_density_matrix(self, n_qubits: int) -> DensityMatrix:
        return DensityMatrix(n_qubits, self.rho)


@dataclass
class NodeSignalMatrix:
    """Rows = time steps, columns = N*V multiplexed Z signals (qubit-major,
    virtual-minor: column l*V + v holds qubit l at virtual node v)."""

    signals: np.ndarray
    n_qubits: int
    v_nodes: int
    include_bias: bool = True

    def __post_init__(self) -> None:
        signals = np.asarray(self.signals, dtype=float)
        if signals.ndim != 2 or signals.shape[1] != self.n_qubits * self.v_nodes:
            raise QuantumError(
                f"signal matrix must have {self.n_qubits * self.v_nodes} columns, "
                f"got shape {signals.shape}"
            )
        if not np.all(np.isfinite(signals)):
            raise QuantumError("signal matrix has non-finite entries")
        if signals.size and float(np.max(np.abs(signals))) > 1.0 + 1e-9:
            raise QuantumError("Z signals must lie in [-1, 1]")
        self.signals = signals

    def design(self) -> np.ndarray:
        """Regression design matrix; appends the all-ones bias column if enabled."""
        if not self.include_bias:
            return self.signals
        return np.column_stack([self.signals, np.ones(self.signals.shape[0])])

    def column_labels(self) -> tuple:
        labels = [
            f"z{l}_v{v + 1}" for l in range(self.n_qubits) for v in range(self.v_nodes)
        ]
        if self.include_bias:
            labels.append("bias")
        return tuple(labels)


@dataclass
class PhysicalityReport:
    """Per-step trace/Hermiticity drift and sampled eigenvalue floor."""

    trace_errors: np.ndarray
    hermiticity_residuals: np.ndarray
    checked_steps: list
    min_eigenvalues: list

    @property
    def max_trace_error(self) -> float:
        return float(np.max(self.trace_errors))

    @property
    def min_eigenvalue(self) -> float:
        return min(self.min_eigenvalues)


class QuantumReservoir:
    """Precomputed Ising evolution plus the input-replacement channel."""

    def __init__(self, cfg: ReservoirConfig):
        self.cfg = cfg
        n = cfg.n_qubits
        self.dim = 2**n
        rng = np.random.default_rng(cfg.seed)
        couplings = np.zeros((n, n))
        # Upper triangle drawn in lexicographic pair order for reproducibility.
        for a in range(n):
            for b in range(a + 1, n):
                couplings[a, b] = couplings[b, a] = rng.uniform(*cfg.j_range)
        self.couplings = couplings
        self.hamiltonian: Observable = ising_hamiltonian(n, couplings, cfg.h_field)
        eigvals, eigvecs = np.linalg.eigh(self.hamiltonian.matrix)
        self.fraction_unitaries = []
        for v in range(1, cfg.v_nodes + 1):
            phases = np.exp(-1j * eigvals * (cfg.tau * v / cfg.v_nodes))
            self.fraction_unitaries.append((eigvecs * phases) @ eigvecs.conj().T)
        self._z_diagonals = np.stack([z_diagonal(n, l) for l in range(n)])
        # Restores qubit order after tensoring the fresh input qubit in front.
        q = cfg.input_qubit
        others = [p for p in range(n) if p != q]
        self._inject_perm = [0 if i == q else 1 + others.index(i) for i in range(n)]

    @property
    def n_signals(self) -> int:
        return self.cfg.n_qubits * self.cfg.v_nodes

    def full_step_unitary(self) -> np.ndarray:
        """U_tau, identical to the last fraction unitary."""
        return self.fraction_unitaries[-1]

    def initial_state(self) -> ReservoirState:
        if self.cfg.initial_state == "mixed":
            rho = np.eye(self.dim, dtype=complex) / self.dim
        else:
            rho = np.zeros((self.dim, self.dim), dtype=complex)
            rho[0, 0] = 1.0
        return ReservoirState(rho, 0)

    def inject_array(self, rho: np.ndarray, x: float) -> np.ndarray:
        """Linear input-replacement channel on a raw matrix (no validation)."""
        n = self.cfg.n_qubits
        q = self.cfg.input_qubit
        rho_x = np.array(
            [[0.5 + (x - 0.5), 0.0], [0.0, 0.5 - (x - 0.5)]], dtype=complex
        )
        if n == 1:
            return complex(np.trace(rho)) * rho_x
        rest = _partial_trace_array(rho, [p for p in range(n) if p != q], n)
        joined = np.kron(rho_x, rest)
        if q == 0:
            return joined
        return permute_qubits(joined, self._inject_perm, n)

    def inject(self, rho: np.ndarray, x: float) -> np.ndarray:
        """Replace the input qubit with rho_x = (I + (2x-1)Z)/2."""
        if not 0.0 <= x <= 1.0:
            raise QuantumError(f"input must lie in [0, 1], got {x}")
        out = self.inject_array(rho, x)
        return (out + out.conj().T) / 2.0

    def step(self, state: ReservoirState, x: float) -> tuple:
        """One input injection plus multiplexed readout.

        Returns (next_state, signals) where signals has length N*V in
        qubit-major, virtual-minor order and the next state is the full-tau
        evolution of the injected state.
        """
        rho_inj = self.inject(state.rho, x)
        v_nodes = self.cfg.v_nodes
        signals = np.empty((self.cfg.n_qubits, v_nodes))
        rho_v = rho_inj
        for v, unitary in enumerate(self.fraction_unitaries):
            rho_v = unitary @ rho_inj @ unitary.conj().T
            signals[:, v] = self._z_diagonals @ np.real(np.diagonal(rho_v))
        next_state = ReservoirState(rho_v, state.step_index + 1)
        return next_state, signals.reshape(-1)

    def run(
        self,
        inputs: np.ndarray,
        state: Optional[ReservoirState] = None,
        collect_physicality: bool = False,
        eig_check_every: int = 100,
    ) -> tuple:
        """Teacher-forced pass over an input series.

        Returns (NodeSignalMatrix, final_state[, PhysicalityReport]); row k of
        the signal matrix holds the signals produced by input k.
        """
        inputs = np.asarray(inputs, dtype=float).reshape(-1)
        if inputs.shape[0] == 0:
            raise QuantumError("input series must be nonempty")
        if state is None:
            state = self.initial_state()
        signals = np.empty((inputs.shape[0], self.n_signals))
        trace_errors = np.empty(inputs.shape[0]) if collect_physicality else None
        herm_residuals = np.empty(inputs.shape[0]) if collect_physicality else None
        checked_steps: list = []
        min_eigs: list = []
        for k, x in enumerate(inputs):
            state, signals[k] = self.step(state, x)
            if collect_physicality:
                rho = state.rho
                trace_errors[k] = abs(complex(np.trace(rho)) - 1.0)
                herm_residuals[k] = float(np.max(np.abs(rho - rho.conj().T)))
                if k % eig_check_every == 0 or k == inputs.shape[0] - 1:
                    checked_steps.append(k)
                    min_eigs.append(float(np.linalg.eigvalsh(rho)[0]))
        matrix = NodeSignalMatrix(
            signals, self.cfg.n_qubits, self.cfg.v_nodes, self.cfg.include_bias
        )
        if collect_physicality:
            report = PhysicalityReport(
                trace_errors, herm_residuals, checked_steps, min_eigs
            )
            return matrix, state, report
        return matrix, state


def run_teacher_forced(
    inputs: np.ndarray,
    reservoir: QuantumReservoir,
    state: Optional[ReservoirState] = None,
) -> tuple:
    """Iterate the reservoir over a series; returns (NodeSignalMatrix, final state)."""
    matrix, final_state = reservoir.run(inputs, state)
    return matrix, final_state


def train_readout(
    signals: NodeSignalMatrix,
    targets: np.ndarray,
    washout: int,
    rcond: float = 1e-10,
    ridge: float = 0.0,
) -> ReadoutWeights:
    """Pseudoinverse fit of the post-washout rows onto the target series."""
    targets = np.asarray(targets, dtype=float).reshape(-1)
    design = signals.design()
    if targets.shape[0] != design.shape[0]:
        raise QuantumError(
            f"{design.shape[0]} signal rows but {targets.shape[0]} targets"
        )
    if washout >= design.shape[0]:
        raise QuantumError(
            f"washout {washout} leaves no training rows out of {design.shape[0]}"
        )
    return fit_linear(
        design[washout:],
        targets[washout:],
        rcond=rcond,
        ridge=ridge,
        feature_labels=signals.column_labels(),
    )


def clamp_unit_interval(y: float) -> float:
    return min(1.0, max(0.0, y))


@dataclass
class AutonomousRun:
    """Closed-loop trajectory: outputs, raw readouts, clamp log, divergence flag."""

    outputs: np.ndarray
    raw_readouts: np.ndarray
    clamped: np.ndarray
    diverged: bool
    diverged_at: Optional[int]
    final_state: ReservoirState


def run_autonomous(
    reservoir: QuantumReservoir,
    weights: ReadoutWeights,
    state: ReservoirState,
    steps: int,
    first_input: float,
    feedback_map: Callable[[float], float] = clamp_unit_interval,
) -> AutonomousRun:
    """Feed the readout back as the next input.

    outputs[0] is ``first_input`` (the loop's first injected value, normally the
    final teacher-phase prediction); outputs[s+1] = feedback(readout at step s).
    The run stops early, flagged, if a pre-clamp readout leaves
    [-0.5, 1.5]; a non-finite readout raises with the failing step index.
    """
    if steps < 1:
        raise QuantumError("autonomous run needs at least one step")
    outputs = np.empty(steps)
    raw = np.empty(steps)
    clamped = np.zeros(steps, dtype=bool)
    outputs[0] = first_input
    diverged = False
    diverged_at: Optional[int] = None
    produced = 0
    for s in range(steps):
        state, signals = reservoir.step(state, outputs[s])
        design = (
            np.concatenate([signals, [1.0]])
            if reservoir.cfg.include_bias
            else signals
        )
        y = float(weights.predict(design))
        if not np.isfinite(y):
            raise QuantumError(f"non-finite readout at autonomous step {s}")
        raw[s] = y
        produced = s + 1
        if not DIVERGENCE_LOW <= y <= DIVERGENCE_HIGH:
            diverged = True
            diverged_at = s
            break
        fed = feedback_map(y)
        if fed != y:
            clamped[s] = True
        if s + 1 < steps:
            outputs[s + 1] = fed
    return AutonomousRun(
        outputs[:produced],
        raw[:produced],
        clamped[:produced],
        diverged,
        diverged_at,
        state,
    )


def squared_correlation(prediction: np.ndarray, target: np.ndarray) -> float:
    """Squared Pearson correlation; 0 when either side has no variance."""
    prediction = np.asarray(prediction, dtype=float).reshape(-1)
    target = np.asarray(target, dtype=float).reshape(-1)
    if np.var(prediction) == 0.0 or np.var(target) == 0.0:
        return 0.0
    r = float(np.corrcoef(prediction, target)[0, 1])
    return r * r


def delay_targets(inputs: np.ndarray, delay: int, task: str) -> np.ndarray:
    """Per-row targets for the memory benchmarks.

    STM: y_k = x_{k-d}.  PARITY: y_k = (sum_{i=0..d} x_{k-i}) mod 2 on binary
    inputs.  Rows with k < d are filled with NaN and must be excluded by the
    caller's washout.
    """
    inputs = np.asarray(inputs, dtype=float).reshape(-1)
    length = inputs.shape[0]
    targets = np.full(length, np.nan)
    if task == "STM":
        targets[delay:] = inputs[: length - delay] if delay else inputs
    elif task == "PARITY":
        if not np.all((inputs == 0.0) | (inputs == 1.0)):
            raise QuantumError("parity task needs binary inputs")
        window = np.zeros(length)
        for i in range(delay + 1):
            window[delay:] += inputs[delay - i : length - i]
        targets[delay:] = np.mod(window[delay:], 2.0)
    else:
        raise QuantumError(f"unknown capacity task {task!r}")
    return targets


@dataclass
class CapacityResult:
    """Per-delay squared correlations and their sum."""

    task: str
    delays: np.ndarray
    capacities: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.capacities))


def capacity_profile(
    design: np.ndarray,
    inputs: np.ndarray,
    task: str,
    max_delay: int,
    train_slice: slice,
    test_slice: slice,
    rcond: float = 1e-10,
) -> CapacityResult:
    """Delay-wise memory capacities of any design matrix on one input stream.

    A fresh readout is trained per delay on the training rows; the capacity is
    the squared correlation between its test-set prediction and the delayed
    target.  Degenerate (zero-variance) targets score 0 with a warning.
    """
    if max_delay < 0:
        raise QuantumError("max delay must be nonnegative")
    design = np.asarray(design, dtype=float)
    inputs = np.asarray(inputs, dtype=float).reshape(-1)
    if design.shape[0] != inputs.shape[0]:
        raise QuantumError("design rows and input length differ")
    delays = np.arange(max_delay + 1)
    capacities = np.zeros(max_delay + 1)
    for d in delays:
        targets = delay_targets(inputs, int(d), task)
        train_targets = targets[train_slice]
        test_targets = targets[test_slice]
        if np.any(np.isnan(train_targets)) or np.any(np.isnan(test_targets)):
            raise QuantumError(
                f"delay {d} reaches before the series start; enlarge the washout"
            )
        if np.var(train_targets) == 0.0 or np.var(test_targets) == 0.0:
            warnings.warn(
                f"degenerate target at delay {d}; capacity set to 0", RuntimeWarning
            )
            continue
        weights = fit_linear(design[train_slice], train_targets, rcond=rcond)
        prediction = weights.predict(design[test_slice])
        capacities[d] = squared_correlation(prediction, test_targets)
    return CapacityResult(task, delays, capacities)


def stm_parity_capacity(
    reservoir: QuantumReservoir,
    task: str,
    max_delay: int,
    input_kind: str = "uniform",
    train_steps: int = 2000,
    test_steps: int = 1000,
    input_seed: int = 0,
) -> tuple:
    """Memory-capacity benchmark of a reservoir on a random input stream.

    Returns (CapacityResult, inputs, NodeSignalMatrix) so baselines can be
    evaluated on the identical stream and split.
    """
    if max_delay < 1:
        raise QuantumError("max delay must be at least 1")
    if input_kind not in ("uniform", "binary"):
        raise QuantumError(f"unknown input kind {input_kind!r}")
    washout = reservoir.cfg.washout
    if washout <= max_delay:
        raise QuantumError("washout must exceed the maximum delay")
    length = washout + train_steps + test_steps
    rng = np.random.default_rng(input_seed)
    if input_kind == "uniform":
        inputs = rng.uniform(0.0, 1.0, size=length)
    else:
        inputs = rng.integers(0, 2, size=length).astype(float)
    matrix, _ = reservoir.run(inputs)
    train_slice = slice(washout, washout + train_steps)
    test_slice = slice(washout + train_steps, length)
    result = capacity_profile(
        matrix.design(), inputs, task, max_delay, train_slice, test_slice
    )
    return result, inputs, matrix


class PauliTransferReservoir:
    """The same reservoir dynamics in the 4^N Pauli-coefficient picture.

    Channel matrices are built from the trace formula
    K_ij = Tr[P(i) K(P(j))] / 2^N; the injection matrix is affine in the input
    and assembled from its values at x = 0.5 and x = 1.  Small N only; used as
    a cross-representation oracle against the dense implementation.
    """

    def __init__(self, reservoir: QuantumReservoir):
        cfg = reservoir.cfg
        self.cfg = cfg
        n = cfg.n_qubits
        self.n_qubits = n
        self.unitary_transfer = [
            transfer_matrix(conjugation_channel(u), n)
            for u in reservoir.fraction_unitaries
        ]
        mid = transfer_matrix(lambda m: reservoir.inject_array(m, 0.5), n)
        top = transfer_matrix(lambda m: reservoir.inject_array(m, 1.0), n)
        self._inject_mid = mid
        self._inject_span = top - mid
        self._z_indices = [z_string_index(n, l) for l in range(n)]

    def injection_transfer(self, x: float) -> np.ndarray:
        """Transfer matrix of the input-replacement channel at input x."""
        return self._inject_mid + (2.0 * x - 1.0) * self._inject_span

    def initial_vector(self, state: ReservoirState) -> np.ndarray:
        rho = DensityMatrix(self.n_qubits, state.rho)
        return pauli_expectation_vector(rho).coeffs

    def step(self, coeffs: np.ndarray, x: float) -> tuple:
        """Mirror of QuantumReservoir.step on the coefficient vector."""
        injected = self.injection_transfer(x) @ coeffs
        scale = 2.0**self.n_qubits
        signals = np.empty((self.n_qubits, self.cfg.v_nodes))
        out = injected
        for v, transfer in enumerate(self.unitary_transfer):
            out = transfer @ injected
            for l, idx in enumerate(self._z_indices):
                signals[l, v] = out[idx] * scale
        return out, signals.reshape(-1)

    def run(self, inputs: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
        """Signal rows for an input series, matching QuantumReservoir.run."""
        inputs = np.asarray(inputs, dtype=float).reshape(-1)
        rows = np.empty((inputs.shape[0], self.n_qubits * self.cfg.v_nodes))
        for k, x in enumerate(inputs):
            coeffs, rows[k] = self.step(coeffs, x)
        return rows
