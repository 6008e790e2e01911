"""Deterministic derivation of per-component seeds from one global seed.

Each named stream hashes ``"{global_seed}:{name}"`` with SHA-256 and keeps the
first 8 bytes (big-endian) as a 64-bit seed.  Streams are therefore fully
independent: how many numbers one component draws can never shift another
component's sequence, and the mapping is stable across platforms and library
versions.
"""

from __future__ import annotations

import hashlib

# The standard component streams; arbitrary extra names are allowed.
COMPONENT_NAMES = ("circuit", "couplings", "dataset", "esn", "inputs", "params")


def derive_seed(global_seed: int, name: str) -> int:
    """64-bit sub-seed for one named component stream."""
    digest = hashlib.sha256(f"{int(global_seed)}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def seed_everything(global_seed: int) -> dict:
    """Sub-seeds for all standard component streams."""
    return {name: derive_seed(global_seed, name) for name in COMPONENT_NAMES}
