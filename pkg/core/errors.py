# core/errors.py
"""
Exception hierarchy shared by every package.
"""
from __future__ import annotations


class QcommError(Exception):
    """Base class for all simulator errors."""


class ArgumentError(QcommError, ValueError):
    """Malformed input: bad index, length mismatch, value out of range."""


class CapacityError(QcommError):
    """A configured size bound would be exceeded."""

    def __init__(self, message: str, bound: int | float | None = None) -> None:
        super().__init__(message if bound is None else f"{message} (bound={bound})")
        self.bound = bound


class ProtocolMisuseError(QcommError):
    """A protocol broke the phase or alternation rules of the runtime."""

    def __init__(self, message: str, step: int | None = None) -> None:
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class OwnershipError(ProtocolMisuseError):
    """A party touched or sent a qubit it does not hold."""


class ProtocolInvariantError(QcommError):
    """An exact pre-measurement check on a protocol failed."""


class ConfigError(QcommError):
    """Unknown protocol, malformed experiment or task document."""

    def __init__(self, message: str, location: str | None = None) -> None:
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
