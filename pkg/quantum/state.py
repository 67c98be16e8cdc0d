# quantum/state.py
"""
Dense state-vector simulation of small multi-qubit registers.

Qubit 0 is the most significant bit of the basis index: the register
[q0, q1, ..., q_{k-1}] reads the integer whose binary digits are
q0 q1 ... q_{k-1}. Every operation returns a new StateVector; nothing
is mutated in place.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from core.config import get_settings
from core.errors import ArgumentError, CapacityError

logger = logging.getLogger(__name__)

NORM_ATOL = 1e-10
IDENTITY_ATOL = 1e-12

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


# ─────────────────────────────────────────────
# Value types
# ─────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised amplitude vector over `num_qubits` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ArgumentError(f"num_qubits must be >= 1, got {self.num_qubits}")
        cap = get_settings().max_qubits
        if self.num_qubits > cap:
            raise CapacityError(f"{self.num_qubits} qubits requested", bound=cap)

        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.num_qubits:
            raise ArgumentError(
                f"expected {1 << self.num_qubits} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ArgumentError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ArgumentError(f"state is not normalised (norm^2={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def allclose(self, other: StateVector, atol: float = IDENTITY_ATOL) -> bool:
        return self.num_qubits == other.num_qubits and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class SignVector:
    """Entries of a diagonal phase oracle; index i holds the sign for z = i."""

    signs: np.ndarray

    def __post_init__(self) -> None:
        signs = np.array(self.signs, dtype=np.int8).reshape(-1)
        length = signs.shape[0]
        if length < 1 or length & (length - 1):
            raise ArgumentError(f"sign vector length must be a power of two, got {length}")
        if not np.all((signs == 1) | (signs == -1)):
            raise ArgumentError("sign vector entries must be +1 or -1")
        signs.setflags(write=False)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_bits(cls, bits: str) -> SignVector:
        """(-1)^{x_i} for each character of `bits`, first character first."""
        if not bits or any(ch not in "01" for ch in bits):
            raise ArgumentError(f"not a bit string: {bits!r}")
        return cls(np.array([-1 if ch == "1" else 1 for ch in bits], dtype=np.int8))

    def __len__(self) -> int:
        return int(self.signs.shape[0])


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Born-rule probabilities indexed by basis state."""

    num_qubits: int
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probabilities, dtype=np.float64).reshape(-1)
        if probs.shape[0] != 1 << self.num_qubits:
            raise ArgumentError("distribution length does not match qubit count")
        if np.any(probs < -NORM_ATOL) or np.any(probs > 1.0 + NORM_ATOL):
            raise ArgumentError("probabilities must lie in [0, 1]")
        if abs(float(probs.sum()) - 1.0) > NORM_ATOL:
            raise ArgumentError("probabilities must sum to 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)

    def probability(self, bits: str) -> float:
        if len(bits) != self.num_qubits:
            raise ArgumentError(f"expected {self.num_qubits} bits, got {bits!r}")
        return float(self.probabilities[int(bits, 2)])


# ─────────────────────────────────────────────
# Helpers
# ─────────────────────────────────────────────
def _validate_qubits(state: StateVector, qubits: Iterable[int]) -> list[int]:
    listed = list(qubits)
    if len(set(listed)) != len(listed):
        raise ArgumentError(f"qubit indices must be distinct: {listed}")
    for q in listed:
        if not 0 <= q < state.num_qubits:
            raise ArgumentError(f"qubit {q} out of range for {state.num_qubits} qubits")
    return listed


def _register_values(num_qubits: int, register: Sequence[int]) -> np.ndarray:
    """Integer read by `register` on every basis index (register[0] is the high bit)."""
    index = np.arange(1 << num_qubits, dtype=np.int64)
    values = np.zeros_like(index)
    for q in register:
        values = (values << 1) | ((index >> (num_qubits - 1 - q)) & 1)
    return values


def _apply_single_qubit(state: StateVector, qubit: int, matrix: np.ndarray) -> np.ndarray:
    n = state.num_qubits
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.tensordot(matrix, psi, axes=([1], [qubit]))
    return np.moveaxis(psi, 0, qubit).reshape(-1)


def _sample_index(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    # inverse-CDF walk; side="right" never lands on a zero-probability entry
    cdf = np.cumsum(probabilities)
    u = rng.random() * cdf[-1]
    idx = int(np.searchsorted(cdf, u, side="right"))
    return min(idx, probabilities.shape[0] - 1)


# ─────────────────────────────────────────────
# Preparation
# ─────────────────────────────────────────────
def basis_state(num_qubits: int, index: int = 0) -> StateVector:
    if not 0 <= index < (1 << num_qubits):
        raise ArgumentError(f"basis index {index} out of range")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def new_entangled_pairs(k: int) -> StateVector:
    """
    Sum over z in {0,1}^k of 2^{-k/2} |z, z>: k shared pairs with the
    first party's qubits 0..k-1 and the second party's k..2k-1.
    """
    if k < 1:
        raise ArgumentError(f"k must be >= 1, got {k}")
    cap = get_settings().max_qubits
    if 2 * k > cap:
        raise CapacityError(f"{k} entangled pairs need {2 * k} qubits", bound=cap)
    amps = np.zeros(1 << (2 * k), dtype=np.complex128)
    weight = 2.0 ** (-k / 2)
    for z in range(1 << k):
        amps[(z << k) | z] = weight
    return StateVector(2 * k, amps)


def tensor(state: StateVector, extra_qubits: int) -> StateVector:
    """Append `extra_qubits` fresh |0> qubits as the new low-order qubits."""
    if extra_qubits < 0:
        raise ArgumentError("extra_qubits must be >= 0")
    if extra_qubits == 0:
        return state
    fresh = np.zeros(1 << extra_qubits, dtype=np.complex128)
    fresh[0] = 1.0
    return StateVector(state.num_qubits + extra_qubits, np.kron(state.amplitudes, fresh))


# ─────────────────────────────────────────────
# Gates
# ─────────────────────────────────────────────
def apply_hadamard(state: StateVector, qubits: Iterable[int]) -> StateVector:
    current = state
    for q in _validate_qubits(state, qubits):
        current = StateVector(state.num_qubits, _apply_single_qubit(current, q, _HADAMARD))
    return current


def apply_phase_oracle(
    state: StateVector,
    register: Sequence[int],
    signs: SignVector,
) -> StateVector:
    """Multiply each amplitude by signs[z], z being the value the register reads."""
    register = _validate_qubits(state, register)
    if len(signs) != 1 << len(register):
        raise ArgumentError(
            f"sign vector of length {len(signs)} does not fit a {len(register)}-qubit register"
        )
    values = _register_values(state.num_qubits, register)
    return StateVector(state.num_qubits, state.amplitudes * signs.signs[values])


def apply_rotation(state: StateVector, qubit: int, angle: float) -> StateVector:
    """
    Real-plane rotation by -angle: measuring at angle t is rotating by -t
    followed by a computational-basis measurement.
    """
    _validate_qubits(state, [qubit])
    if not math.isfinite(angle):
        raise ArgumentError(f"angle must be finite, got {angle!r}")
    theta = -angle
    matrix = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]],
        dtype=np.complex128,
    )
    return StateVector(state.num_qubits, _apply_single_qubit(state, qubit, matrix))


def apply_x_conditioned(
    state: StateVector,
    register: Sequence[int],
    target: int,
    bits: str,
) -> StateVector:
    """Flip `target` on every basis state whose register reads i with bits[i] == "1"."""
    register = _validate_qubits(state, register)
    if target in register:
        raise ArgumentError("target qubit must not belong to the control register")
    _validate_qubits(state, [target])
    if len(bits) != 1 << len(register) or any(ch not in "01" for ch in bits):
        raise ArgumentError(
            f"control table must be a bit string of length {1 << len(register)}"
        )
    n = state.num_qubits
    table = np.array([ch == "1" for ch in bits], dtype=bool)
    flip = table[_register_values(n, register)]
    index = np.arange(1 << n, dtype=np.int64)
    dest = np.where(flip, index ^ (1 << (n - 1 - target)), index)
    out = np.empty_like(state.amplitudes)
    out[dest] = state.amplitudes
    return StateVector(n, out)


# ─────────────────────────────────────────────
# Measurement
# ─────────────────────────────────────────────
def outcome_distribution(state: StateVector) -> OutcomeDistribution:
    probs = np.abs(state.amplitudes) ** 2
    return OutcomeDistribution(state.num_qubits, probs)


def register_distribution(
    distribution: OutcomeDistribution,
    qubits: Sequence[int],
) -> np.ndarray:
    """Marginal probabilities of the values read by `qubits`."""
    values = _register_values(distribution.num_qubits, list(qubits))
    return np.bincount(
        values, weights=distribution.probabilities, minlength=1 << len(qubits)
    )


def measure_all(state: StateVector, rng: np.random.Generator) -> str:
    probs = outcome_distribution(state).probabilities
    idx = _sample_index(probs, rng)
    return format(idx, f"0{state.num_qubits}b")


def measure_qubits(
    state: StateVector,
    qubits: Sequence[int],
    rng: np.random.Generator,
) -> tuple[str, StateVector]:
    """Measure `qubits` only; returns their bits and the collapsed state."""
    qubits = _validate_qubits(state, qubits)
    if not qubits:
        return "", state
    dist = outcome_distribution(state)
    marginal = register_distribution(dist, qubits)
    value = _sample_index(marginal, rng)
    keep = _register_values(state.num_qubits, qubits) == value
    collapsed = np.where(keep, state.amplitudes, 0.0)
    collapsed = collapsed / math.sqrt(float(np.vdot(collapsed, collapsed).real))
    logger.debug("measured qubits %s -> %d", qubits, value)
    return format(value, f"0{len(qubits)}b"), StateVector(state.num_qubits, collapsed)
