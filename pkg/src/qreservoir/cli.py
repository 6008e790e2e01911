"""Command-line entry point: validate and run experiment configs, emit CSV
artifacts plus a manifest.

Config files are JSON with three top-level keys: ``experiment`` (one of the
registered kinds), ``seed`` (integer), optional ``output_dir``, and a flat
``params`` object whose keys mirror the module config fields.  Unknown or
missing keys are rejected with the offending key named.

Exit codes: 0 success, 2 invalid config, 3 runtime divergence, 4 I/O failure.
The environment variable QRESERVOIR_OUTPUT_ROOT prefixes relative output
directories.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .artifacts import write_manifest
from .dynamics import DynamicsError
from .experiments import EMULATION_SYSTEMS, RUNNERS
from .quantum import QuantumError

EXIT_OK = 0
EXIT_INVALID_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4

_RESERVOIR_KEYS = {
    "n_qubits": (int, 5),
    "j_min": (float, -0.5),
    "j_max": (float, 0.5),
    "h_field": (float, 1.0),
    "tau": (float, 4.0),
    "v_nodes": (int, 10),
    "input_qubit": (int, 0),
    "washout": (int, 1000),
    "initial_state": (str, "mixed"),
    "include_bias": (bool, True),
}

# key -> (type, default); REQUIRED marks keys without a default.
REQUIRED = object()

SCHEMAS = {
    "qelm-classify": {
        "n_qubits": (int, 8),
        "train_count": (int, 1000),
        "test_count": (int, 1000),
        "sweeps": (int, 2),
    },
    "qelm-surface": {
        "n_qubits": (int, 8),
        "grid": (int, 41),
        "sweeps": (int, 2),
    },
    "qcl-fit": {
        "n_qubits": (int, 3),
        "layers": (int, 2),
        "alpha": (float, 0.05),
        "iters": (int, 300),
        "eps": (float, math.pi / 2.0),
        "train_count": (int, 20),
    },
    "qrc-emulate": {
        "system": (str, REQUIRED),
        **_RESERVOIR_KEYS,
        "train_steps": (int, 10000),
        "test_steps": (int, 1000),
        "autonomous_steps": (int, 1000),
        "dt": (float, 0.02),
        "transient": (int, 5000),
    },
    "qrc-capacity": {
        "task": (str, "STM"),
        "input_kind": (str, "uniform"),
        "max_delay": (int, 15),
        **{**_RESERVOIR_KEYS, "n_qubits": (int, 6)},
        "train_steps": (int, 2000),
        "test_steps": (int, 1000),
        "esn_nodes": (int, 100),
        "esn_spectral_radius": (float, 0.95),
        "esn_input_scale": (float, 1.0),
    },
}

EXPERIMENT_SUMMARIES = {
    "qelm-classify": "disk two-class benchmark with entangling/identity/linear readouts",
    "qelm-surface": "readout expectation over a grid of the unit square",
    "qcl-fit": "gradient-descent fit of y=(2x-1)^2 with a parameterized circuit",
    "qrc-emulate": "teacher-forced training and closed-loop run on a chaotic series",
    "qrc-capacity": "delay-capacity curves for reservoir, ESN, and linear baselines",
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def validate_config(raw: dict) -> dict:
    """Check keys and types, apply defaults; returns the normalized config."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    allowed_top = {"experiment", "seed", "output_dir", "params"}
    unknown = set(raw) - allowed_top
    if unknown:
        raise ConfigError(f"unknown top-level key {sorted(unknown)[0]!r}")
    if "experiment" not in raw:
        raise ConfigError("missing required key 'experiment'")
    kind = raw["experiment"]
    if kind not in SCHEMAS:
        raise ConfigError(
            f"unknown experiment {kind!r}; choose from {sorted(SCHEMAS)}"
        )
    if "seed" not in raw:
        raise ConfigError("missing required key 'seed'")
    if not isinstance(raw["seed"], int) or isinstance(raw["seed"], bool):
        raise ConfigError("key 'seed' must be an integer")
    schema = SCHEMAS[kind]
    params_in = raw.get("params", {})
    if not isinstance(params_in, dict):
        raise ConfigError("key 'params' must be an object")
    unknown = set(params_in) - set(schema)
    if unknown:
        raise ConfigError(f"unknown params key {sorted(unknown)[0]!r} for {kind}")
    params: dict = {}
    for key, (expected, default) in schema.items():
        if key in params_in:
            value = params_in[key]
            if expected is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            if expected is int and isinstance(value, bool):
                raise ConfigError(f"params key {key!r} must be {expected.__name__}")
            if not isinstance(value, expected):
                raise ConfigError(f"params key {key!r} must be {expected.__name__}")
            params[key] = value
        elif default is REQUIRED:
            raise ConfigError(f"missing required params key {key!r} for {kind}")
        else:
            params[key] = default
    if kind == "qrc-emulate" and params["system"] not in EMULATION_SYSTEMS:
        raise ConfigError(
            f"params key 'system' must be one of {sorted(EMULATION_SYSTEMS)}"
        )
    if kind == "qrc-capacity":
        if params["task"] not in ("STM", "PARITY"):
            raise ConfigError("params key 'task' must be 'STM' or 'PARITY'")
        if params["input_kind"] not in ("uniform", "binary"):
            raise ConfigError("params key 'input_kind' must be 'uniform' or 'binary'")
        if params["task"] == "PARITY" and params["input_kind"] != "binary":
            raise ConfigError("PARITY capacity requires params key 'input_kind'='binary'")
    output_dir = raw.get("output_dir", kind.replace("-", "_") + "_out")
    if not isinstance(output_dir, str):
        raise ConfigError("key 'output_dir' must be a string")
    return {
        "experiment": kind,
        "seed": raw["seed"],
        "output_dir": output_dir,
        "params": params,
    }


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return validate_config(raw)


def resolve_output_dir(config: dict, override: str = None) -> Path:
    out = Path(override) if override else Path(config["output_dir"])
    root = os.environ.get("QRESERVOIR_OUTPUT_ROOT")
    if root and not out.is_absolute():
        out = Path(root) / out
    return out


def _fail(message: str, code: int) -> int:
    print(json.dumps({"error": message, "exit_code": code}), file=sys.stderr)
    return code


def run_command(config_path: str, output_override: str = None) -> int:
    try:
        config = load_config(config_path)
    except FileNotFoundError as exc:
        return _fail(str(exc), EXIT_IO)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_INVALID_CONFIG)
    out_dir = resolve_output_dir(config, output_override)
    runner = RUNNERS[config["experiment"]]
    started = time.time()
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        results = runner(config["params"], config["seed"], out_dir)
    except (QuantumError, DynamicsError, ValueError) as exc:
        return _fail(f"runtime divergence or invalid state: {exc}", EXIT_DIVERGENCE)
    except OSError as exc:
        return _fail(f"I/O failure: {exc}", EXIT_IO)
    wall = time.time() - started
    try:
        write_manifest(out_dir / "manifest.json", config, wall, __version__, results)
    except OSError as exc:
        return _fail(f"I/O failure writing manifest: {exc}", EXIT_IO)
    diverged = bool(results.get("autonomous_diverged"))
    if diverged:
        return _fail(
            f"autonomous run diverged at step {results.get('autonomous_diverged_at')}",
            EXIT_DIVERGENCE,
        )
    print(json.dumps({"output_dir": str(out_dir), "results": results}, sort_keys=True))
    return EXIT_OK


def validate_command(config_path: str) -> int:
    try:
        config = load_config(config_path)
    except FileNotFoundError as exc:
        return _fail(str(exc), EXIT_IO)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_INVALID_CONFIG)
    print(json.dumps({"valid": True, "experiment": config["experiment"]}))
    return EXIT_OK


def list_command() -> int:
    for kind in sorted(SCHEMAS):
        print(f"{kind}: {EXPERIMENT_SUMMARIES[kind]}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qreservoir",
        description="Run quantum reservoir computing experiments from a JSON config.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run an experiment config")
    run_parser.add_argument("config", help="path to the JSON config file")
    run_parser.add_argument(
        "--output-dir", default=None, help="override the config's output directory"
    )
    validate_parser = sub.add_parser("validate", help="validate a config without running")
    validate_parser.add_argument("config", help="path to the JSON config file")
    sub.add_parser("list-experiments", help="list available experiment kinds")
    args = parser.parse_args(argv)
    if args.command == "run":
        return run_command(args.config, args.output_dir)
    if args.command == "validate":
        return validate_command(args.config)
    return list_command()


if __name__ == "__main__":
    sys.exit(main())
