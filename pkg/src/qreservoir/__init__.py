"""Exact few-qubit toolkit for quantum extreme learning machines, quantum
circuit learning, and quantum reservoir computing, with chaotic time-series
benchmarks and a CSV-emitting experiment CLI."""

from .quantum import (
    DensityMatrix,
    KrausChannel,
    Observable,
    QuantumError,
    StateVector,
    apply_channel,
    apply_gate,
    dephasing_channel,
    evolve_unitary,
    expectation,
    ising_hamiltonian,
    ket_zero,
    maximally_mixed,
    partial_trace,
    pauli_on,
    rotation_gate,
    unitary_channel,
)
from .pauli import (
    PauliStateVector,
    PauliString,
    pauli_expectation_vector,
    reconstruct_density,
    transfer_matrix,
)
from .regression import (
    ReadoutWeights,
    fit_linear,
    mse,
    nmse,
    pseudoinverse,
    threshold_accuracy,
)
from .qelm import (
    EncodingSpec,
    LabeledDataset,
    RandomCircuit,
    encode,
    evaluate_qelm,
    feature_matrix,
    features,
    generate_circle_dataset,
    train_qelm,
)
from .qcl import (
    FixedUnitary,
    ParamRotation,
    ParameterizedCircuit,
    forward,
    loss_and_grad,
    param_shift_grad,
    train,
)
from .qrc import (
    NodeSignalMatrix,
    PauliTransferReservoir,
    QuantumReservoir,
    ReservoirConfig,
    ReservoirState,
    run_autonomous,
    run_teacher_forced,
    stm_parity_capacity,
    train_readout,
)
from .dynamics import (
    EchoStateNetwork,
    EsnConfig,
    OdeSystem,
    esn_baseline,
    henon_series,
    lorenz_series,
    mackey_glass_series,
    normalize_unit_interval,
    rk4_step,
    rossler_series,
)
from .seeding import derive_seed, seed_everything

__version__ = "0.1.0"
