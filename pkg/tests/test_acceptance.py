"""Acceptance suite: one test per release criterion, each printing a PASS/FAIL
line with the measured numbers.

Two criteria are currently red for structural reasons documented in the
project notes: the quantitative chaotic-map emulation bars and the
STM-capacity ratio against the echo state network.  Their tests state the
criteria exactly as pinned and report honest measurements rather than being
weakened to pass.
"""

import json
import math

import numpy as np
import pytest

from qreservoir import dynamics
from qreservoir.cli import main as cli_main
from qreservoir.pauli import pauli_string_from_index
from qreservoir.qcl import (
    FixedUnitary,
    ParamRotation,
    ParameterizedCircuit,
    forward,
    param_shift_grad,
    single_y_rotation_layers,
    train as qcl_train,
)
from qreservoir.qelm import (
    CZ_GATE,
    EncodingSpec,
    LabeledDataset,
    RandomCircuit,
    evaluate_qelm,
    generate_circle_dataset,
    train_qelm,
)
from qreservoir.qrc import (
    PauliTransferReservoir,
    QuantumReservoir,
    ReservoirConfig,
    capacity_profile,
    clamp_unit_interval,
    run_autonomous,
    train_readout,
)
from qreservoir.quantum import pauli_on
from qreservoir.regression import (
    fit_linear,
    mse,
    nmse,
    pseudoinverse,
    threshold_accuracy,
)
from qreservoir.seeding import derive_seed


def report(name: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")


def emulate_once(system: str, seed: int, n_qubits: int, train_steps: int = 10000,
                 test_steps: int = 1000, autonomous_steps: int = 1000,
                 washout: int = 1000):
    """Shared emulation protocol; returns the per-seed metrics dict."""
    teach = washout + train_steps + test_steps
    total = teach + autonomous_steps + 2
    if system == "henon":
        raw = dynamics.henon_series(total, transient=100)
    elif system == "lorenz":
        raw = dynamics.lorenz_series(total)
    elif system == "rossler":
        raw = dynamics.rossler_series(total)
    else:
        raw = dynamics.mackey_glass_series(total)
    normalized = dynamics.normalize_unit_interval(
        raw, fit_slice=slice(0, washout + train_steps + 1)
    )
    x = normalized.values
    cfg = ReservoirConfig(n_qubits=n_qubits, seed=derive_seed(seed, "couplings"),
                          washout=washout)
    reservoir = QuantumReservoir(cfg)
    matrix, state = reservoir.run(x[:teach])
    targets = x[1 : teach + 1]
    weights = train_readout(matrix, targets, washout)
    design = matrix.design()
    test_rows = slice(washout + train_steps, teach)
    test_pred = weights.predict(design[test_rows])
    teacher_nmse = nmse(test_pred, targets[test_rows])
    first = clamp_unit_interval(float(test_pred[-1]))
    auto = run_autonomous(reservoir, weights, state, autonomous_steps, first)
    truth = x[teach : teach + autonomous_steps]
    window = min(50, len(auto.outputs))
    nrmse_50 = float(
        np.sqrt(np.mean((auto.outputs[:window] - truth[:window]) ** 2))
        / np.std(truth)
    )
    return {
        "teacher_nmse": teacher_nmse,
        "bounded_steps": int(len(auto.outputs)),
        "diverged": bool(auto.diverged),
        "nrmse_50": nrmse_50,
    }


class TestQelmClassification:
    def test_circle_benchmark(self):
        spec = EncodingSpec.for_classification(8)
        data = generate_circle_dataset(2000, seed=derive_seed(0, "dataset"))
        train_set = LabeledDataset(data.inputs[:1000], data.labels[:1000])
        test_set = LabeledDataset(data.inputs[1000:], data.labels[1000:])

        best_entangling = 0.0
        for seed in range(5):
            circuit = RandomCircuit(8, seed=derive_seed(seed, "circuit"))
            weights = train_qelm(train_set, circuit, spec)
            best_entangling = max(
                best_entangling, evaluate_qelm(test_set, weights, circuit, spec)
            )
        identity_acc = evaluate_qelm(
            test_set, train_qelm(train_set, None, spec), None, spec
        )
        design_train = np.column_stack([np.ones(1000), train_set.inputs])
        design_test = np.column_stack([np.ones(1000), test_set.inputs])
        linear = fit_linear(design_train, train_set.labels.astype(float))
        linear_acc = threshold_accuracy(linear.predict(design_test), test_set.labels)

        passed = best_entangling >= 0.90 and linear_acc <= 0.60 and identity_acc <= 0.65
        report(
            "qelm-circle-classification",
            passed,
            f"best entangling {best_entangling:.3f} >= 0.90, "
            f"linear {linear_acc:.3f} <= 0.60, identity {identity_acc:.3f} <= 0.65",
        )
        assert best_entangling >= 0.90
        assert linear_acc <= 0.60
        assert identity_acc <= 0.65


class TestParameterShift:
    @staticmethod
    def random_circuit(rng, n_qubits, n_params):
        gates = []
        for _ in range(int(rng.integers(4, 10))):
            if rng.random() < 0.3 and n_qubits >= 2:
                a = int(rng.integers(n_qubits - 1))
                gates.append(FixedUnitary(CZ_GATE, (a, a + 1)))
            else:
                while True:
                    idx = int(rng.integers(1, 4**n_qubits))
                    string = pauli_string_from_index(n_qubits, idx)
                    if set(string.letters) != {"I"}:
                        break
                gates.append(ParamRotation(string, int(rng.integers(n_params))))
        encoding = EncodingSpec(n_qubits, rule="uniform")
        return ParameterizedCircuit(n_qubits, gates, n_params, encoding=encoding)

    def test_gradient_against_finite_difference(self):
        rng = np.random.default_rng(derive_seed(1, "params"))
        worst_fd = 0.0
        worst_eps = 0.0
        draws = 0
        while draws < 110:
            n_qubits = int(rng.integers(1, 5))
            n_params = int(rng.integers(1, 5))
            circuit = self.random_circuit(rng, n_qubits, n_params)
            params = rng.uniform(-np.pi, np.pi, n_params)
            x = (float(rng.uniform(0, 1)),)
            obs = pauli_on(n_qubits, "Z", int(rng.integers(n_qubits)))
            index = int(rng.integers(n_params))
            grad = param_shift_grad(x, params, circuit, obs, index)
            h = 1e-5
            plus, minus = params.copy(), params.copy()
            plus[index] += h
            minus[index] -= h
            fd = (forward(x, plus, circuit, obs) - forward(x, minus, circuit, obs)) / (
                2 * h
            )
            worst_fd = max(worst_fd, abs(grad - fd))
            if draws < 30:
                grads = [
                    param_shift_grad(x, params, circuit, obs, index, eps=eps)
                    for eps in (math.pi / 4, math.pi / 2, 3 * math.pi / 4)
                ]
                worst_eps = max(worst_eps, max(grads) - min(grads))
            draws += 1
        passed = worst_fd < 1e-6 and worst_eps < 1e-8
        report(
            "parameter-shift-correctness",
            passed,
            f"{draws} draws, max |shift - fd| = {worst_fd:.2e} < 1e-6, "
            f"max eps spread = {worst_eps:.2e} < 1e-8",
        )
        assert worst_fd < 1e-6
        assert worst_eps < 1e-8


class TestQclTraining:
    def test_quadratic_target_convergence(self):
        n_qubits = 3
        encoding = EncodingSpec(n_qubits, rule="uniform")
        circuit = single_y_rotation_layers(n_qubits, 2, encoding=encoding)
        xs = np.linspace(0.0, 1.0, 20)
        dataset = [((x,), (2 * x - 1) ** 2) for x in xs]
        rng = np.random.default_rng(derive_seed(3, "params"))
        init = rng.normal(0.0, 0.1, circuit.n_params)
        obs = pauli_on(n_qubits, "Z", 0)
        result = qcl_train(dataset, circuit, obs, init, alpha=0.05, iters=500)
        preds = np.array(
            [forward((x,), result.final_params, circuit, obs) for (x,), _ in dataset]
        )
        final_mse = mse(preds, np.array([y for _, y in dataset]))
        passed = final_mse < 0.01
        report(
            "qcl-training",
            passed,
            f"training MSE {final_mse:.2e} < 0.01 after 500 iterations",
        )
        assert final_mse < 0.01


class TestPhysicality:
    def test_canonical_run_stays_physical(self):
        cfg = ReservoirConfig(n_qubits=5, tau=4.0, v_nodes=10,
                              seed=derive_seed(4, "couplings"), washout=1000)
        reservoir = QuantumReservoir(cfg)
        rng = np.random.default_rng(derive_seed(4, "inputs"))
        inputs = rng.uniform(0.0, 1.0, 10000)
        _, _, physicality = reservoir.run(
            inputs, collect_physicality=True, eig_check_every=100
        )
        max_trace = physicality.max_trace_error
        min_eig = physicality.min_eigenvalue
        max_herm = float(np.max(physicality.hermiticity_residuals))
        passed = max_trace < 1e-9 and min_eig >= -1e-8 and max_herm < 1e-10
        report(
            "physicality-suite",
            passed,
            f"10^4 steps, max trace error {max_trace:.2e} < 1e-9, "
            f"min eigenvalue {min_eig:.2e} >= -1e-8, "
            f"max hermiticity residual {max_herm:.2e} < 1e-10 "
            f"({len(physicality.checked_steps)} checkpoints)",
        )
        assert max_trace < 1e-9
        assert min_eig >= -1e-8
        assert max_herm < 1e-10


class TestRepresentationEquivalence:
    def test_transfer_matrix_reservoir_matches_dense(self):
        worst = 0.0
        for seed in range(10):
            n_qubits = 2 + (seed % 2)
            cfg = ReservoirConfig(n_qubits=n_qubits, tau=4.0, v_nodes=10,
                                  seed=derive_seed(seed, "couplings"), washout=10)
            reservoir = QuantumReservoir(cfg)
            twin = PauliTransferReservoir(reservoir)
            rng = np.random.default_rng(derive_seed(seed, "inputs"))
            inputs = rng.uniform(0.0, 1.0, 100)
            state = reservoir.initial_state()
            coeffs = twin.initial_vector(state)
            for x in inputs:
                state, dense_signals = reservoir.step(state, x)
                coeffs, twin_signals = twin.step(coeffs, x)
                worst = max(worst, float(np.max(np.abs(dense_signals - twin_signals))))
        passed = worst < 1e-8
        report(
            "representation-equivalence",
            passed,
            f"10 seeds x 100 steps, max signal deviation {worst:.2e} < 1e-8",
        )
        assert worst < 1e-8


class TestPseudoinverse:
    def test_penrose_conditions_on_random_matrices(self):
        rng = np.random.default_rng(derive_seed(6, "dataset"))
        worst = 0.0
        for draw in range(50):
            rows = int(rng.integers(3, 30))
            cols = int(rng.integers(2, 20))
            x = rng.normal(size=(rows, cols))
            if draw % 2 == 0 and cols >= 2:
                x[:, -1] = x[:, 0]  # rank deficiency in half the draws
            p = pseudoinverse(x)
            scale = float(np.max(np.abs(x)))
            residues = (
                float(np.max(np.abs(x @ p @ x - x))) / scale,
                float(np.max(np.abs(p @ x @ p - p))) / max(1.0, float(np.max(np.abs(p)))),
                float(np.max(np.abs((x @ p).T - x @ p))),
                float(np.max(np.abs((p @ x).T - p @ x))),
            )
            worst = max(worst, max(residues))
        passed = worst < 1e-9
        report(
            "pseudoinverse-penrose",
            passed,
            f"50 matrices incl. rank-deficient, max relative residual {worst:.2e} < 1e-9",
        )
        assert worst < 1e-9


class TestChaoticEmulation:
    def test_henon_quantitative(self):
        """Henon, N in 5..7, 10^4 training steps: teacher NMSE < 0.05, bounded
        autonomous run >= 1000 steps, first-50-step NRMSE < 0.3 on the best of
        5 seeds.

        Expected red: with the chapter's mixed-state injection the reservoir
        signals are multi-affine in the input history, which caps the
        attainable teacher NMSE near 0.1 at these sizes (see the decisions
        ledger for the full analysis).  The criterion is asserted as stated.
        """
        runs = [emulate_once("henon", seed, n_qubits=6) for seed in range(5)]
        best = min(runs, key=lambda r: r["nrmse_50"])
        detail = (
            f"best-of-5: teacher NMSE {best['teacher_nmse']:.3f} (<0.05), "
            f"bounded {best['bounded_steps']}/1000 steps, "
            f"NRMSE@50 {best['nrmse_50']:.3f} (<0.3); "
            f"all teacher NMSE: {[round(r['teacher_nmse'], 3) for r in runs]}"
        )
        passed = any(
            r["teacher_nmse"] < 0.05
            and r["bounded_steps"] >= 1000
            and r["nrmse_50"] < 0.3
            for r in runs
        )
        report("chaotic-emulation-henon", passed, detail)
        assert passed, (
            "Henon emulation criterion not met; structural analysis in "
            "decisions ledger. " + detail
        )

    @pytest.mark.parametrize("system", ["lorenz", "mackey-glass", "rossler"])
    def test_continuous_systems_bounded_with_artifact(self, system, tmp_path):
        # Same best-of-5 protocol as the map benchmark: the first seed whose
        # closed loop stays bounded for the full horizon carries the artifact.
        bounded = 0
        trajectory = None
        manifest = None
        used_seed = None
        for seed in range(5):
            out_dir = tmp_path / f"{system}_{seed}"
            config = {
                "experiment": "qrc-emulate",
                "seed": seed,
                "output_dir": str(out_dir),
                "params": {"system": system},
            }
            config_path = tmp_path / f"{system}_{seed}.json"
            config_path.write_text(json.dumps(config))
            code = cli_main(["run", str(config_path)])
            manifest = json.loads((out_dir / "manifest.json").read_text())
            bounded = manifest["results"]["autonomous_steps_completed"]
            trajectory = out_dir / "trajectory.csv"
            used_seed = seed
            if code == 0 and bounded >= 1000:
                break
        passed = trajectory.exists() and bounded >= 1000
        report(
            f"chaotic-emulation-{system}",
            passed,
            f"seed {used_seed}: autonomous bounded {bounded}/1000 steps, "
            f"teacher NMSE {manifest['results']['teacher_test_nmse']:.2e}, "
            f"phase-diagram artifact {trajectory.name} emitted",
        )
        assert trajectory.exists()
        assert bounded >= 1000


class TestCapacityBenchmark:
    def test_stm_capacity_vs_baselines(self):
        """Canonical 6-qubit V=10 reservoir: total STM capacity >= 0.8x a
        100-node ESN on the same stream, and strictly above the memoryless
        linear baseline at every delay d in 1..3 (delay 0 is excluded since
        the memoryless baseline is exact there by construction).

        Expected red on the ESN ratio: measured ~0.57 with neutral ESN
        defaults; see the decisions ledger.
        """
        washout, train_steps, test_steps, max_delay = 1000, 2000, 1000, 15
        length = washout + train_steps + test_steps
        rng = np.random.default_rng(derive_seed(7, "inputs"))
        inputs = rng.uniform(0.0, 1.0, length)
        train_slice = slice(washout, washout + train_steps)
        test_slice = slice(washout + train_steps, length)

        reservoir = QuantumReservoir(
            ReservoirConfig(n_qubits=6, tau=4.0, v_nodes=10,
                            seed=derive_seed(7, "couplings"), washout=washout)
        )
        matrix, _ = reservoir.run(inputs)
        qrc = capacity_profile(
            matrix.design(), inputs, "STM", max_delay, train_slice, test_slice
        )
        esn = dynamics.EchoStateNetwork(
            dynamics.EsnConfig(nodes=100, spectral_radius=0.95, input_scale=1.0,
                               seed=derive_seed(7, "esn"))
        )
        esn_design = np.column_stack([esn.run(inputs), np.ones(length)])
        esn_result = capacity_profile(
            esn_design, inputs, "STM", max_delay, train_slice, test_slice
        )
        linear_design = np.column_stack([np.ones(length), inputs])
        linear = capacity_profile(
            linear_design, inputs, "STM", max_delay, train_slice, test_slice
        )

        ratio = qrc.total / esn_result.total
        beats_linear = all(
            qrc.capacities[d] > linear.capacities[d] for d in (1, 2, 3)
        )
        passed = ratio >= 0.8 and beats_linear
        detail = (
            f"QRC total {qrc.total:.2f}, ESN total {esn_result.total:.2f}, "
            f"ratio {ratio:.3f} (>=0.8), "
            f"beats linear at d=1..3: {beats_linear} "
            f"(QRC {[round(float(qrc.capacities[d]), 3) for d in (1, 2, 3)]} vs "
            f"linear {[round(float(linear.capacities[d]), 4) for d in (1, 2, 3)]})"
        )
        report("capacity-benchmark", passed, detail)
        assert beats_linear
        assert ratio >= 0.8, (
            "STM capacity ratio criterion not met; analysis in decisions "
            "ledger. " + detail
        )


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        config = {
            "experiment": "qrc-emulate",
            "seed": 9,
            "params": {
                "system": "henon",
                "n_qubits": 4,
                "v_nodes": 5,
                "washout": 100,
                "train_steps": 600,
                "test_steps": 150,
                "autonomous_steps": 60,
                "transient": 300,
            },
        }
        digests = []
        for attempt in ("first", "second"):
            out_dir = tmp_path / attempt
            payload = dict(config, output_dir=str(out_dir))
            path = tmp_path / f"{attempt}.json"
            path.write_text(json.dumps(payload))
            cli_main(["run", str(path)])
            digests.append(
                {
                    name.name: name.read_bytes()
                    for name in sorted(out_dir.glob("*.csv"))
                }
            )
        same = digests[0] == digests[1]
        names = sorted(digests[0])
        report(
            "determinism",
            same,
            f"re-run produced byte-identical CSVs: {names}",
        )
        assert same
        assert names  # at least one CSV artifact compared
