# runtime/seeds.py
"""
Labelled derivation of independent random streams from one master seed.

A stream is identified by a tuple of labels (party tag, purpose tag,
counter, ...). Labels are hashed to 32-bit words and used as the
`spawn_key` of a numpy SeedSequence, so streams never overlap and the
result does not depend on the order in which streams are requested.
"""
from __future__ import annotations

import hashlib

import numpy as np

from core.errors import ArgumentError

Label = str | int


def _label_word(label: Label) -> int:
    if isinstance(label, int) and not isinstance(label, bool):
        if label < 0:
            raise ArgumentError(f"integer labels must be >= 0, got {label}")
        token = f"i:{label}"
    else:
        token = f"s:{label}"
    return int.from_bytes(hashlib.sha256(token.encode()).digest()[:4], "big")


def seed_sequence(seed: int, *labels: Label) -> np.random.SeedSequence:
    if seed < 0:
        raise ArgumentError(f"seed must be >= 0, got {seed}")
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(_label_word(l) for l in labels))


def derive_rng(seed: int, *labels: Label) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *labels))


def derive_seed(seed: int, *labels: Label) -> int:
    """A 63-bit integer seed for a sub-run (e.g. one trial of an experiment)."""
    return int(seed_sequence(seed, *labels).generate_state(1, dtype=np.uint64)[0]) >> 1
