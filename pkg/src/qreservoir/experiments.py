"""The experiment families behind the CLI: classification, response surface,
circuit-learning fit, chaotic-series emulation, and memory-capacity benchmarks.

Each runner consumes a validated parameter dict plus a global seed, writes its
CSV artifacts into an output directory, and returns a results dict that lands
in the manifest.  Per-component randomness is derived from the global seed by
name (see seeding), so every artifact byte except the manifest wall time is
reproducible.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import dynamics
from .artifacts import write_csv
from .qcl import forward, single_y_rotation_layers, train as qcl_train
from .qelm import (
    EncodingSpec,
    LabeledDataset,
    RandomCircuit,
    evaluate_qelm,
    feature_matrix,
    generate_circle_dataset,
    predict_qelm,
    train_qelm,
)
from .qrc import (
    QuantumReservoir,
    ReservoirConfig,
    capacity_profile,
    clamp_unit_interval,
    run_autonomous,
    train_readout,
)
from .quantum import pauli_on
from .regression import fit_linear, mse, nmse, threshold_accuracy
from .seeding import derive_seed

EMULATION_SYSTEMS = ("lorenz", "mackey-glass", "rossler", "henon")


def _reservoir_config(params: dict, couplings_seed: int) -> ReservoirConfig:
    return ReservoirConfig(
        n_qubits=params["n_qubits"],
        j_range=(params["j_min"], params["j_max"]),
        h_field=params["h_field"],
        tau=params["tau"],
        v_nodes=params["v_nodes"],
        input_qubit=params["input_qubit"],
        seed=couplings_seed,
        washout=params["washout"],
        initial_state=params["initial_state"],
        include_bias=params["include_bias"],
    )


def run_qelm_classify(params: dict, seed: int, out_dir: Path) -> dict:
    """Two-class disk benchmark: entangling circuit vs no-circuit vs plain linear."""
    n_qubits = params["n_qubits"]
    spec = EncodingSpec.for_classification(n_qubits)
    dataset_seed = derive_seed(seed, "dataset")
    full = generate_circle_dataset(params["train_count"] + params["test_count"], dataset_seed)
    train_set = LabeledDataset(
        full.inputs[: params["train_count"]], full.labels[: params["train_count"]]
    )
    test_set = LabeledDataset(
        full.inputs[params["train_count"] :], full.labels[params["train_count"] :]
    )
    circuit = RandomCircuit(n_qubits, derive_seed(seed, "circuit"), sweeps=params["sweeps"])

    accuracy_rows = []
    results: dict = {"seed": seed, "n_qubits": n_qubits}
    for kind, circ in (("entangling", circuit), ("identity", None)):
        weights = train_qelm(train_set, circ, spec)
        train_acc = evaluate_qelm(train_set, weights, circ, spec)
        test_acc = evaluate_qelm(test_set, weights, circ, spec)
        accuracy_rows.append((seed, n_qubits, kind, train_acc, test_acc))
        results[f"{kind}_train_accuracy"] = train_acc
        results[f"{kind}_test_accuracy"] = test_acc
        if kind == "entangling":
            readout = predict_qelm(test_set.inputs, weights, circ, spec)
            rows = [
                (x[0], x[1], int(label), float(y), int(y > 0.5))
                for x, label, y in zip(test_set.inputs, test_set.labels, readout)
            ]
            write_csv(
                out_dir / "predictions.csv",
                ("x0", "x1", "label", "readout", "prediction"),
                rows,
            )

    # Memoryless baseline: plain linear regression on (1, x0, x1).
    design_train = np.column_stack([np.ones(len(train_set)), train_set.inputs])
    design_test = np.column_stack([np.ones(len(test_set)), test_set.inputs])
    linear = fit_linear(design_train, train_set.labels.astype(float))
    linear_train = threshold_accuracy(linear.predict(design_train), train_set.labels)
    linear_test = threshold_accuracy(linear.predict(design_test), test_set.labels)
    accuracy_rows.append((seed, n_qubits, "linear", linear_train, linear_test))
    results["linear_train_accuracy"] = linear_train
    results["linear_test_accuracy"] = linear_test

    write_csv(
        out_dir / "train_data.csv",
        ("x0", "x1", "label"),
        [(x[0], x[1], int(l)) for x, l in zip(train_set.inputs, train_set.labels)],
    )
    write_csv(
        out_dir / "accuracy.csv",
        ("seed", "n_qubits", "circuit_kind", "train_acc", "test_acc"),
        accuracy_rows,
    )
    return results


def run_qelm_surface(params: dict, seed: int, out_dir: Path) -> dict:
    """Readout expectation of the first qubit over a grid of the unit square."""
    n_qubits = params["n_qubits"]
    spec = EncodingSpec(n_qubits, rule="paired-harmonics")
    circuit = RandomCircuit(n_qubits, derive_seed(seed, "circuit"), sweeps=params["sweeps"])
    grid = params["grid"]
    axis = np.linspace(0.0, 1.0, grid)
    points = np.array([(a, b) for a in axis for b in axis])
    feats = feature_matrix(points, circuit, spec)
    z_column = feats[:, 3]  # bias, x0, x1, then z of qubit 0
    rows = [(p[0], p[1], float(z)) for p, z in zip(points, z_column)]
    write_csv(out_dir / "surface.csv", ("x0", "x1", "z"), rows)
    return {"grid": grid, "z_min": float(z_column.min()), "z_max": float(z_column.max())}


def run_qcl_fit(params: dict, seed: int, out_dir: Path) -> dict:
    """Gradient-descent fit of y = (2x - 1)^2 with a layered ansatz."""
    n_qubits = params["n_qubits"]
    encoding = EncodingSpec(n_qubits, rule="uniform")
    circuit = single_y_rotation_layers(n_qubits, params["layers"], encoding=encoding)
    xs = np.linspace(0.0, 1.0, params["train_count"])
    dataset = [((x,), (2.0 * x - 1.0) ** 2) for x in xs]
    rng = np.random.default_rng(derive_seed(seed, "params"))
    init = rng.normal(0.0, 0.1, size=circuit.n_params)
    observable = pauli_on(n_qubits, "Z", 0)
    result = qcl_train(
        dataset,
        circuit,
        observable,
        init,
        alpha=params["alpha"],
        iters=params["iters"],
        eps=params["eps"],
    )
    write_csv(
        out_dir / "trace.csv",
        ("iter", "loss", "grad_norm"),
        [
            (i, loss, gnorm)
            for i, (loss, gnorm) in enumerate(zip(result.losses, result.grad_norms))
        ],
    )
    predictions = [forward((x,), result.final_params, circuit, observable) for (x,), _ in dataset]
    targets = [y for _, y in dataset]
    write_csv(
        out_dir / "fit.csv",
        ("x", "target", "prediction"),
        list(zip(xs, targets, predictions)),
    )
    final_mse = mse(np.array(predictions), np.array(targets))
    return {
        "final_loss": result.final_loss,
        "final_mse": final_mse,
        "iterations": params["iters"],
        "diverged": result.diverged,
        "n_params": circuit.n_params,
    }


def generate_series(system: str, length: int, params: dict) -> np.ndarray:
    """Ground-truth series for one emulation benchmark."""
    if system == "lorenz":
        return dynamics.lorenz_series(length, dt=params["dt"], transient=params["transient"])
    if system == "rossler":
        return dynamics.rossler_series(length, dt=params["dt"], transient=params["transient"])
    if system == "mackey-glass":
        return dynamics.mackey_glass_series(
            length, dt=params["dt"], transient=params["transient"]
        )
    if system == "henon":
        return dynamics.henon_series(length, transient=min(params["transient"], 1000))
    raise ValueError(f"unknown system {system!r}")


def run_qrc_emulate(params: dict, seed: int, out_dir: Path) -> dict:
    """Teacher-forced training plus closed-loop emulation of a chaotic series."""
    system = params["system"]
    washout = params["washout"]
    train_steps = params["train_steps"]
    test_steps = params["test_steps"]
    autonomous_steps = params["autonomous_steps"]
    teach = washout + train_steps + test_steps
    total = teach + autonomous_steps + 2

    raw = generate_series(system, total, params)
    normalized = dynamics.normalize_unit_interval(
        raw, fit_slice=slice(0, washout + train_steps + 1)
    )
    x = normalized.values
    inv = normalized.mapping.invert

    reservoir = QuantumReservoir(_reservoir_config(params, derive_seed(seed, "couplings")))
    signal_matrix, state = reservoir.run(x[:teach])
    targets = x[1 : teach + 1]
    weights = train_readout(signal_matrix, targets, washout)
    design = signal_matrix.design()
    teacher_predictions = weights.predict(design)
    train_rows = slice(washout, washout + train_steps)
    test_rows = slice(washout + train_steps, teach)
    teacher_train_nmse = nmse(teacher_predictions[train_rows], targets[train_rows])
    teacher_test_nmse = nmse(teacher_predictions[test_rows], targets[test_rows])

    first_input = clamp_unit_interval(float(teacher_predictions[-1]))
    auto = run_autonomous(reservoir, weights, state, autonomous_steps, first_input)
    truth = x[teach : teach + autonomous_steps]
    window = min(50, len(auto.outputs))
    truth_std = float(np.std(truth))
    nrmse_50 = float(
        np.sqrt(np.mean((auto.outputs[:window] - truth[:window]) ** 2)) / truth_std
    )

    rows = []
    for k in range(teach):
        rows.append(
            (
                k,
                float(inv(x[k])),
                float(inv(targets[k])),
                float(inv(teacher_predictions[k])),
                "teacher",
            )
        )
    for s in range(len(auto.raw_readouts)):
        step = teach + s
        target_value = float(inv(x[step + 1])) if step + 1 < total else ""
        rows.append(
            (
                step,
                float(inv(auto.outputs[s])),
                target_value,
                float(inv(auto.raw_readouts[s])),
                "autonomous",
            )
        )
    write_csv(
        out_dir / "trajectory.csv",
        ("step", "input", "target", "prediction", "mode"),
        rows,
    )
    dt = params["dt"] if system != "henon" else None
    write_csv(
        out_dir / "series.csv",
        ("step", "t", "value"),
        [(k, "" if dt is None else k * dt, float(v)) for k, v in enumerate(raw)],
    )
    return {
        "system": system,
        "teacher_train_nmse": teacher_train_nmse,
        "teacher_test_nmse": teacher_test_nmse,
        "autonomous_steps_completed": int(len(auto.outputs)),
        "autonomous_diverged": bool(auto.diverged),
        "autonomous_diverged_at": auto.diverged_at,
        "autonomous_nrmse_50": nrmse_50,
        "clamped_steps": int(np.sum(auto.clamped)),
        "normalization_scale": normalized.mapping.scale,
        "normalization_offset": normalized.mapping.offset,
        "normalization_clamped": normalized.clamped_count,
        "teacher_autonomous_switch_step": teach,
    }


def run_qrc_capacity(params: dict, seed: int, out_dir: Path) -> dict:
    """Delay-capacity curves for the reservoir, an ESN, and a memoryless baseline."""
    task = params["task"]
    input_kind = params["input_kind"]
    if task == "PARITY" and input_kind != "binary":
        raise ValueError("PARITY capacity requires binary inputs")
    washout = params["washout"]
    train_steps = params["train_steps"]
    test_steps = params["test_steps"]
    max_delay = params["max_delay"]
    length = washout + train_steps + test_steps

    rng = np.random.default_rng(derive_seed(seed, "inputs"))
    if input_kind == "uniform":
        inputs = rng.uniform(0.0, 1.0, size=length)
    else:
        inputs = rng.integers(0, 2, size=length).astype(float)
    train_slice = slice(washout, washout + train_steps)
    test_slice = slice(washout + train_steps, length)

    reservoir = QuantumReservoir(_reservoir_config(params, derive_seed(seed, "couplings")))
    signal_matrix, _ = reservoir.run(inputs)
    qrc_result = capacity_profile(
        signal_matrix.design(), inputs, task, max_delay, train_slice, test_slice
    )

    esn = dynamics.EchoStateNetwork(
        dynamics.EsnConfig(
            nodes=params["esn_nodes"],
            spectral_radius=params["esn_spectral_radius"],
            input_scale=params["esn_input_scale"],
            seed=derive_seed(seed, "esn"),
        )
    )
    esn_design = np.column_stack([esn.run(inputs), np.ones(length)])
    esn_result = capacity_profile(
        esn_design, inputs, task, max_delay, train_slice, test_slice
    )

    linear_design = np.column_stack([np.ones(length), inputs])
    linear_result = capacity_profile(
        linear_design, inputs, task, max_delay, train_slice, test_slice
    )

    for name, result in (
        ("qrc", qrc_result),
        ("esn", esn_result),
        ("linear", linear_result),
    ):
        write_csv(
            out_dir / f"capacity_{name}.csv",
            ("delay", "capacity"),
            list(zip(result.delays.tolist(), result.capacities.tolist())),
        )
    return {
        "task": task,
        "input_kind": input_kind,
        "qrc_total": qrc_result.total,
        "esn_total": esn_result.total,
        "linear_total": linear_result.total,
        "qrc_vs_esn_ratio": qrc_result.total / esn_result.total
        if esn_result.total > 0
        else math.inf,
    }


RUNNERS = {
    "qelm-classify": run_qelm_classify,
    "qelm-surface": run_qelm_surface,
    "qcl-fit": run_qcl_fit,
    "qrc-emulate": run_qrc_emulate,
    "qrc-capacity": run_qrc_capacity,
}
