"""Encoding, random entangling circuit, disk dataset, and QELM training."""

import numpy as np
import pytest

from qreservoir.qelm import (
    BLOCK_LAYOUT,
    EncodingSpec,
    LabeledDataset,
    RandomCircuit,
    circle_label,
    encode,
    evaluate_qelm,
    feature_matrix,
    features,
    generate_circle_dataset,
    train_qelm,
)
from qreservoir.quantum import PAULI_Z, QuantumError, expectation, pauli_on


class TestEncoding:
    def test_x_one_gives_ket_zero(self):
        spec = EncodingSpec(1, rule="uniform")
        state = encode([1.0], spec)
        assert np.allclose(state.amplitudes, [1.0, 0.0], atol=1e-12)
        assert expectation(state, PAULI_Z) == pytest.approx(1.0)

    def test_x_half_gives_zero_expectation(self):
        spec = EncodingSpec(1, rule="uniform")
        state = encode([0.5], spec)
        assert expectation(state, PAULI_Z) == pytest.approx(0.0, abs=1e-12)

    def test_uniform_rule_every_qubit_carries_input(self):
        spec = EncodingSpec(4, rule="uniform")
        x = 0.37
        state = encode([x], spec)
        for q in range(4):
            assert expectation(state, pauli_on(4, "Z", q)) == pytest.approx(
                2 * x - 1, abs=1e-12
            )

    def test_paired_harmonics_angles(self):
        spec = EncodingSpec(8, rule="paired-harmonics")
        x0, x1 = 0.3, 0.8
        angles = spec.angles([x0, x1])
        base0, base1 = np.arccos(np.sqrt(x0)), np.arccos(np.sqrt(x1))
        for q in range(8):
            expected = (q // 2) * (base0 if q % 2 == 0 else base1)
            assert angles[q] == pytest.approx(expected)

    def test_out_of_range_rejected(self):
        spec = EncodingSpec(2, rule="uniform")
        with pytest.raises(QuantumError):
            encode([1.2], spec)
        with pytest.raises(QuantumError):
            encode([-0.1], spec)

    def test_nonlinearity_applied_before_arccos(self):
        phi = lambda v: v**2
        spec = EncodingSpec(1, rule="uniform", nonlinearity=phi)
        state = encode([0.6], spec)
        assert expectation(state, PAULI_Z) == pytest.approx(2 * 0.36 - 1, abs=1e-12)


class TestRandomCircuit:
    def test_block_census(self):
        circuit = RandomCircuit(8, seed=1)
        census = circuit.census()
        assert census["x_rotations"] == 8
        assert census["z_rotations"] == 4
        assert census["cz_gates"] == 2
        assert census["blocks_per_sweep"] == 7
        assert census["sweeps"] == 2

    def test_block_pairs_brickwork(self):
        assert RandomCircuit.block_pairs(8) == [
            (0, 1), (2, 3), (4, 5), (6, 7), (1, 2), (3, 4), (5, 6),
        ]

    def test_layout_word_per_qubit(self):
        # Each qubit reads X-Z-X | CZ | X-Z | CZ | X through one block.
        for qubit in ("a", "b"):
            word = [kind for kind, where in BLOCK_LAYOUT if where in (qubit, "ab")]
            assert word == ["RX", "RZ", "RX", "CZ", "RX", "RZ", "CZ", "RX"]

    def test_regeneration_is_bit_identical(self):
        c1 = RandomCircuit(8, seed=42)
        c2 = RandomCircuit(8, seed=42)
        assert len(c1.gates) == len(c2.gates)
        for (g1, t1), (g2, t2) in zip(c1.gates, c2.gates):
            assert t1 == t2
            assert np.array_equal(g1, g2)

    def test_different_seeds_differ(self):
        c1 = RandomCircuit(8, seed=0)
        c2 = RandomCircuit(8, seed=1)
        assert any(
            not np.array_equal(g1, g2)
            for (g1, _), (g2, _) in zip(c1.gates, c2.gates)
        )

    def test_gate_count(self):
        circuit = RandomCircuit(8, seed=3)
        assert len(circuit.gates) == 2 * 7 * len(BLOCK_LAYOUT)


class TestCircleDataset:
    def test_center_is_class_zero(self):
        assert circle_label(0.5, 0.5) == 0

    def test_corner_is_class_one(self):
        # distance^2 from the center is 0.5 > 0.15
        assert circle_label(0.0, 0.0) == 1

    def test_class_balance_matches_disk_area(self):
        # The disk of radius sqrt(0.15) ~ 0.387 fits inside the unit square,
        # so the class-0 fraction tends to pi * 0.15 ~ 0.4712.
        data = generate_circle_dataset(100000, seed=123)
        fraction = float(np.mean(data.labels == 0))
        assert abs(fraction - np.pi * 0.15) < 0.01

    def test_labels_binary_and_inputs_in_square(self):
        data = generate_circle_dataset(500, seed=7)
        assert set(np.unique(data.labels)) <= {0, 1}
        assert np.all((data.inputs >= 0) & (data.inputs <= 1))

    def test_invalid_count(self):
        with pytest.raises(QuantumError):
            generate_circle_dataset(0, seed=1)


class TestFeatures:
    def test_identity_circuit_linear_features(self):
        spec = EncodingSpec(2, rule="uniform")
        x = 0.42
        vec = features([x], None, spec)
        assert vec[0] == 1.0
        assert vec[1] == pytest.approx(x)
        assert np.allclose(vec[2:], 2 * x - 1, atol=1e-12)

    def test_feature_length_two_dim_input(self):
        spec = EncodingSpec(8, rule="paired-harmonics")
        vec = features([0.2, 0.9], RandomCircuit(8, seed=5), spec)
        assert vec.shape == (8 + 3,)

    def test_z_values_bounded(self):
        spec = EncodingSpec(6, rule="paired-harmonics")
        circuit = RandomCircuit(6, seed=9)
        rng = np.random.default_rng(0)
        batch = rng.uniform(0, 1, size=(50, 2))
        feats = feature_matrix(batch, circuit, spec)
        assert np.all(np.abs(feats[:, 3:]) <= 1.0 + 1e-12)

    def test_batch_matches_single(self):
        spec = EncodingSpec(4, rule="paired-harmonics")
        circuit = RandomCircuit(4, seed=11)
        rng = np.random.default_rng(1)
        batch = rng.uniform(0, 1, size=(5, 2))
        stacked = feature_matrix(batch, circuit, spec)
        for row, x in zip(stacked, batch):
            assert np.allclose(row, features(x, circuit, spec), atol=1e-12)


class TestTrainEvaluate:
    def test_all_zero_labels_predict_zero(self):
        spec = EncodingSpec(4, rule="paired-harmonics")
        circuit = RandomCircuit(4, seed=2)
        rng = np.random.default_rng(3)
        data = LabeledDataset(rng.uniform(0, 1, size=(40, 2)), np.zeros(40, dtype=int))
        weights = train_qelm(data, circuit, spec)
        preds = weights.predict(feature_matrix(data.inputs, circuit, spec))
        assert float(np.max(np.abs(preds))) < 1e-9

    def test_training_is_deterministic(self):
        spec = EncodingSpec(4, rule="paired-harmonics")
        circuit = RandomCircuit(4, seed=6)
        data = generate_circle_dataset(100, seed=8)
        w1 = train_qelm(data, circuit, spec)
        w2 = train_qelm(data, circuit, spec)
        assert np.array_equal(w1.weights, w2.weights)

    def test_entangling_beats_identity_on_majority_of_seeds(self):
        spec = EncodingSpec.for_classification(8)
        train_set = generate_circle_dataset(400, seed=100)
        test_set = generate_circle_dataset(400, seed=101)
        wins = 0
        floor_ok = 0
        for seed in range(5):
            circuit = RandomCircuit(8, seed=seed)
            acc_entangled = evaluate_qelm(
                test_set, train_qelm(train_set, circuit, spec), circuit, spec
            )
            acc_identity = evaluate_qelm(
                test_set, train_qelm(train_set, None, spec), None, spec
            )
            if acc_entangled > acc_identity:
                wins += 1
            if acc_identity > 0.35:
                floor_ok += 1
        assert wins >= 3
        assert floor_ok >= 3

    def test_identity_circuit_with_paired_rule_is_linear(self):
        # With the simple paired encoding the no-circuit features are affine in
        # (x0, x1), so thresholded predictions match the linear baseline.
        from qreservoir.regression import fit_linear, threshold_accuracy

        spec = EncodingSpec.for_classification(4)
        train_set = generate_circle_dataset(300, seed=21)
        test_set = generate_circle_dataset(300, seed=22)
        acc_identity = evaluate_qelm(
            test_set, train_qelm(train_set, None, spec), None, spec
        )
        design_train = np.column_stack([np.ones(300), train_set.inputs])
        design_test = np.column_stack([np.ones(300), test_set.inputs])
        linear = fit_linear(design_train, train_set.labels.astype(float))
        acc_linear = threshold_accuracy(linear.predict(design_test), test_set.labels)
        assert acc_identity == pytest.approx(acc_linear, abs=1e-12)
