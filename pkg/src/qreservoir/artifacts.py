"""CSV and manifest emission shared by all experiments.

CSV files are RFC-4180 (CRLF, UTF-8, '.' decimal) with floats written at full
shortest-roundtrip precision, so identical runs produce byte-identical files.
The manifest echoes the config and seed needed to re-run an experiment; its
wall-time field is the single non-reproducible output byte sequence.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def format_value(value) -> str:
    """Full-precision text for one CSV cell.

    Floats go through the builtin shortest-roundtrip repr; numpy scalars are
    normalized first so their version-dependent reprs never leak into files.
    """
    if isinstance(value, (bool, np.bool_)):
        return "true" if bool(value) else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def read_csv(path: Path) -> tuple:
    """Header and string rows of a CSV artifact."""
    with open(path, "r", newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path} is empty")
    return rows[0], rows[1:]


def write_manifest(
    path: Path,
    config: dict,
    wall_time_seconds: float,
    library_version: str,
    results: dict,
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": config,
        "seed": config.get("seed"),
        "wall_time_seconds": wall_time_seconds,
        "library_version": library_version,
        "results": results,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
