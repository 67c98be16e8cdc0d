# runtime/bits.py
"""
Bit-string helpers. Bit strings are plain `str` over {"0", "1"}; the
first character is bit x_1 and, when a string encodes an integer,
the most significant bit.
"""
from __future__ import annotations

from collections.abc import Iterator

import numpy as np

from core.errors import ArgumentError


def validate_bits(bits: str, length: int | None = None, name: str = "bits") -> str:
    if not isinstance(bits, str) or any(ch not in "01" for ch in bits):
        raise ArgumentError(f"{name} must be a bit string, got {bits!r}")
    if length is not None and len(bits) != length:
        raise ArgumentError(f"{name} must have length {length}, got {len(bits)}")
    return bits


def int_to_bits(value: int, width: int) -> str:
    """Big-endian encoding of `value` in exactly `width` bits."""
    if value < 0 or (width >= 0 and value >= 1 << width):
        raise ArgumentError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def bits_to_int(bits: str) -> int:
    validate_bits(bits)
    return int(bits, 2) if bits else 0


def hamming_weight(bits: str) -> int:
    return bits.count("1")


def hamming_distance(x: str, y: str) -> int:
    if len(x) != len(y):
        raise ArgumentError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(a != b for a, b in zip(x, y))


def all_bit_strings(n: int) -> Iterator[str]:
    """Every string of length n in increasing integer order."""
    for value in range(1 << n):
        yield int_to_bits(value, n)


def random_bits(rng: np.random.Generator, n: int) -> str:
    return "".join("1" if b else "0" for b in rng.integers(0, 2, size=n))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0
