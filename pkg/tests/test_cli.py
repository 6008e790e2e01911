"""Config validation, experiment orchestration, artifacts, and reproducibility."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from qreservoir.artifacts import read_csv
from qreservoir.cli import (
    EXIT_DIVERGENCE,
    EXIT_INVALID_CONFIG,
    EXIT_IO,
    EXIT_OK,
    ConfigError,
    main,
    validate_config,
)


def write_config(tmp_path: Path, name: str, payload: dict) -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def small_emulate_config(tmp_path: Path, out_name: str = "out") -> dict:
    return {
        "experiment": "qrc-emulate",
        "seed": 11,
        "output_dir": str(tmp_path / out_name),
        "params": {
            "system": "henon",
            "n_qubits": 3,
            "v_nodes": 4,
            "washout": 50,
            "train_steps": 300,
            "test_steps": 80,
            "autonomous_steps": 40,
            "transient": 200,
        },
    }


class TestValidation:
    def test_defaults_applied(self):
        config = validate_config({"experiment": "qelm-classify", "seed": 1})
        assert config["params"]["n_qubits"] == 8
        assert config["params"]["train_count"] == 1000

    def test_missing_experiment(self):
        with pytest.raises(ConfigError, match="experiment"):
            validate_config({"seed": 1})

    def test_missing_seed(self):
        with pytest.raises(ConfigError, match="seed"):
            validate_config({"experiment": "qelm-classify"})

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError, match="unknown experiment"):
            validate_config({"experiment": "nope", "seed": 1})

    def test_unknown_params_key_named(self):
        with pytest.raises(ConfigError, match="warp_speed"):
            validate_config(
                {"experiment": "qelm-classify", "seed": 1, "params": {"warp_speed": 9}}
            )

    def test_missing_required_params_key_named(self):
        with pytest.raises(ConfigError, match="system"):
            validate_config({"experiment": "qrc-emulate", "seed": 1})

    def test_type_check(self):
        with pytest.raises(ConfigError, match="n_qubits"):
            validate_config(
                {"experiment": "qelm-classify", "seed": 1, "params": {"n_qubits": "eight"}}
            )

    def test_parity_requires_binary(self):
        with pytest.raises(ConfigError, match="binary"):
            validate_config(
                {
                    "experiment": "qrc-capacity",
                    "seed": 1,
                    "params": {"task": "PARITY", "input_kind": "uniform"},
                }
            )

    def test_int_promoted_to_float(self):
        config = validate_config(
            {"experiment": "qrc-emulate", "seed": 1, "params": {"system": "henon", "tau": 4}}
        )
        assert config["params"]["tau"] == 4.0


class TestCommands:
    def test_list_experiments(self, capsys):
        assert main(["list-experiments"]) == EXIT_OK
        out = capsys.readouterr().out
        for kind in ("qelm-classify", "qrc-emulate", "qrc-capacity"):
            assert kind in out

    def test_validate_ok(self, tmp_path, capsys):
        path = write_config(tmp_path, "ok.json", small_emulate_config(tmp_path))
        assert main(["validate", str(path)]) == EXIT_OK

    def test_validate_bad_key_exit_2(self, tmp_path, capsys):
        payload = small_emulate_config(tmp_path)
        payload["params"]["bogus"] = 1
        path = write_config(tmp_path, "bad.json", payload)
        assert main(["validate", str(path)]) == EXIT_INVALID_CONFIG
        assert "bogus" in capsys.readouterr().err

    def test_missing_file_exit_4(self, capsys):
        assert main(["run", "/nonexistent/config.json"]) == EXIT_IO

    def test_malformed_json_exit_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["run", str(path)]) == EXIT_INVALID_CONFIG

    def test_emulate_run_writes_artifacts(self, tmp_path, capsys):
        payload = small_emulate_config(tmp_path)
        path = write_config(tmp_path, "emulate.json", payload)
        code = main(["run", str(path)])
        out_dir = Path(payload["output_dir"])
        assert (out_dir / "trajectory.csv").exists()
        assert (out_dir / "series.csv").exists()
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["seed"] == 11
        assert manifest["config"]["params"]["system"] == "henon"
        assert "teacher_test_nmse" in manifest["results"]
        # A tiny under-trained reservoir may legitimately diverge in closed
        # loop; that is reported as the divergence exit code.
        assert code in (EXIT_OK, EXIT_DIVERGENCE)
        header, rows = read_csv(out_dir / "trajectory.csv")
        assert header == ["step", "input", "target", "prediction", "mode"]
        modes = {row[4] for row in rows}
        assert modes <= {"teacher", "autonomous"}
        assert "teacher" in modes

    def test_reruns_are_byte_identical(self, tmp_path):
        payload = small_emulate_config(tmp_path, "first")
        path1 = write_config(tmp_path, "c1.json", payload)
        main(["run", str(path1)])
        payload2 = dict(payload, output_dir=str(tmp_path / "second"))
        path2 = write_config(tmp_path, "c2.json", payload2)
        main(["run", str(path2)])
        for name in ("trajectory.csv", "series.csv"):
            first = (tmp_path / "first" / name).read_bytes()
            second = (tmp_path / "second" / name).read_bytes()
            assert first == second

    def test_output_root_env(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("QRESERVOIR_OUTPUT_ROOT", str(tmp_path / "root"))
        payload = {
            "experiment": "qelm-surface",
            "seed": 3,
            "output_dir": "surface_out",
            "params": {"n_qubits": 3, "grid": 5},
        }
        path = write_config(tmp_path, "surface.json", payload)
        assert main(["run", str(path)]) == EXIT_OK
        assert (tmp_path / "root" / "surface_out" / "surface.csv").exists()

    def test_console_entry_point(self, tmp_path):
        env = dict(os.environ)
        result = subprocess.run(
            [sys.executable, "-m", "qreservoir", "list-experiments"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert result.returncode == 0
        assert "qrc-emulate" in result.stdout


class TestSmallExperiments:
    def test_qelm_classify_small(self, tmp_path):
        payload = {
            "experiment": "qelm-classify",
            "seed": 5,
            "output_dir": str(tmp_path / "clf"),
            "params": {"n_qubits": 4, "train_count": 120, "test_count": 80},
        }
        path = write_config(tmp_path, "clf.json", payload)
        assert main(["run", str(path)]) == EXIT_OK
        header, rows = read_csv(tmp_path / "clf" / "accuracy.csv")
        assert header == ["seed", "n_qubits", "circuit_kind", "train_acc", "test_acc"]
        kinds = [row[2] for row in rows]
        assert kinds == ["entangling", "identity", "linear"]
        header, rows = read_csv(tmp_path / "clf" / "predictions.csv")
        assert header == ["x0", "x1", "label", "readout", "prediction"]
        assert len(rows) == 80

    def test_qcl_fit_small(self, tmp_path):
        payload = {
            "experiment": "qcl-fit",
            "seed": 2,
            "output_dir": str(tmp_path / "qcl"),
            "params": {"n_qubits": 2, "layers": 1, "iters": 10, "train_count": 6},
        }
        path = write_config(tmp_path, "qcl.json", payload)
        assert main(["run", str(path)]) == EXIT_OK
        header, rows = read_csv(tmp_path / "qcl" / "trace.csv")
        assert header == ["iter", "loss", "grad_norm"]
        assert len(rows) == 11
        losses = [float(r[1]) for r in rows]
        assert losses[-1] <= losses[0]

    def test_qrc_capacity_small(self, tmp_path):
        payload = {
            "experiment": "qrc-capacity",
            "seed": 4,
            "output_dir": str(tmp_path / "cap"),
            "params": {
                "n_qubits": 3,
                "v_nodes": 3,
                "washout": 60,
                "max_delay": 3,
                "train_steps": 250,
                "test_steps": 120,
                "esn_nodes": 30,
            },
        }
        path = write_config(tmp_path, "cap.json", payload)
        assert main(["run", str(path)]) == EXIT_OK
        for name in ("qrc", "esn", "linear"):
            header, rows = read_csv(tmp_path / "cap" / f"capacity_{name}.csv")
            assert header == ["delay", "capacity"]
            assert len(rows) == 4
        manifest = json.loads((tmp_path / "cap" / "manifest.json").read_text())
        assert manifest["results"]["qrc_total"] > 0.5
