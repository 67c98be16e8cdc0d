# protocols/quantum.py
"""
Protocols that use entanglement or quantum communication: the EPR
angle task, Deutsch-Jozsa pseudo-telepathy, the k-qubit promise
equality protocol and shared coins drawn from ebits.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.errors import ArgumentError, ProtocolInvariantError
from protocols.classical import Confidence, EqualityVerdict, Verdict
from quantum.state import (
    SignVector,
    apply_hadamard,
    apply_phase_oracle,
    apply_rotation,
    register_distribution,
)
from runtime.bits import hamming_distance, is_power_of_two, validate_bits
from runtime.context import ProtocolContext
from runtime.runner import Protocol, ProtocolOutcome, run
from runtime.setup import SetupSpec
from runtime.transcript import Party

logger = logging.getLogger(__name__)

ALICE, BOB = Party.ALICE, Party.BOB

EXACT_ATOL = 1e-9
MARGINAL_ATOL = 1e-12
FORBIDDEN_ATOL = 1e-12


# ─────────────────────────────────────────────
# EPR angle task
# ─────────────────────────────────────────────
def _validate_angles(x: float, y: float) -> None:
    for name, value in (("x", x), ("y", y)):
        if not isinstance(value, (int, float)) or not 0.0 <= value <= math.pi:
            raise ArgumentError(f"{name} must lie in [0, pi], got {value!r}")


def _epr_quantum_body(ctx: ProtocolContext, x: float, y: float) -> None:
    alice_q, = ctx.shared.owned_by(ALICE)
    bob_q, = ctx.shared.owned_by(BOB)
    ctx.local_op(ALICE, [alice_q], lambda s: apply_rotation(s, alice_q, x), label=f"rotate {x:.6g}")
    ctx.local_op(BOB, [bob_q], lambda s: apply_rotation(s, bob_q, y), label=f"rotate {y:.6g}")

    dist = ctx.exact_distribution()
    p_equal = dist.probability("00") + dist.probability("11")
    p_a0 = float(register_distribution(dist, [alice_q])[0])
    p_b0 = float(register_distribution(dist, [bob_q])[0])
    target = math.cos(x - y) ** 2
    if abs(p_equal - target) > EXACT_ATOL:
        raise ProtocolInvariantError(f"P(a=b)={p_equal} differs from cos^2(x-y)={target}")
    if abs(p_a0 - 0.5) > MARGINAL_ATOL or abs(p_b0 - 0.5) > MARGINAL_ATOL:
        raise ProtocolInvariantError(f"marginals {p_a0}, {p_b0} are not uniform")
    ctx.exact.update(p_equal=p_equal, p_a0=p_a0, p_b0=p_b0)

    ctx.output(ALICE, int(ctx.measure(ALICE, [alice_q], label="a")))
    ctx.output(BOB, int(ctx.measure(BOB, [bob_q], label="b")))


EPR_QUANTUM = Protocol(
    name="epr-quantum",
    setup_spec=lambda x, y: SetupSpec(ebits=1),
    body=_epr_quantum_body,
    zero_communication=True,
    validate=_validate_angles,
    description="one ebit; each party measures at its own angle",
)


def epr_task_quantum(x: float, y: float, seed: int) -> ProtocolOutcome:
    return run(EPR_QUANTUM, x, y, seed)


# ─────────────────────────────────────────────
# Deutsch-Jozsa
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class DjInstance:
    k: int
    x: str
    y: str

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ArgumentError(f"k must be >= 1, got {self.k}")
        validate_bits(self.x, length=self.n, name="x")
        validate_bits(self.y, length=self.n, name="y")

    @property
    def n(self) -> int:
        return 1 << self.k

    @property
    def delta(self) -> int:
        return hamming_distance(self.x, self.y)

    @property
    def promise(self) -> bool:
        return self.delta in (0, self.n // 2)

    @classmethod
    def from_pair(cls, x: str, y: str) -> DjInstance:
        if not is_power_of_two(len(x)) or len(x) < 2:
            raise ArgumentError(f"input length must be a power of two >= 2, got {len(x)}")
        return cls(len(x).bit_length() - 1, x, y)


def dj_relation(x: str, y: str, a: str, b: str) -> bool:
    """x = y forces a = b; distance n/2 forces a != b; anything goes off the promise."""
    delta = hamming_distance(x, y)
    if delta == 0:
        return a == b
    if 2 * delta == len(x):
        return a != b
    return True


def _dj_validate(x: str, y: str) -> None:
    DjInstance.from_pair(x, y)


def _dj_promise(x: str, y: str) -> bool:
    return DjInstance.from_pair(x, y).promise


def forbidden_mass(joint: np.ndarray, instance: DjInstance) -> float:
    """Probability of outcome pairs the relation rules out; `joint` is indexed [a, b]."""
    if instance.delta == 0:
        return float(joint.sum() - np.trace(joint))
    if 2 * instance.delta == instance.n:
        return float(np.trace(joint))
    return 0.0


def _dj_telepathy_body(ctx: ProtocolContext, x: str, y: str) -> None:
    instance = DjInstance.from_pair(x, y)
    k = instance.k
    alice_reg = ctx.shared.owned_by(ALICE)
    bob_reg = ctx.shared.owned_by(BOB)
    if len(alice_reg) != k or len(bob_reg) != k:
        raise ArgumentError(f"setup holds {len(alice_reg)} ebits, instance needs {k}")

    ctx.local_op(ALICE, alice_reg, lambda s: apply_phase_oracle(s, alice_reg, SignVector.from_bits(x)), "oracle x")
    ctx.local_op(BOB, bob_reg, lambda s: apply_phase_oracle(s, bob_reg, SignVector.from_bits(y)), "oracle y")
    ctx.local_op(ALICE, alice_reg, lambda s: apply_hadamard(s, alice_reg), "walsh-hadamard")
    ctx.local_op(BOB, bob_reg, lambda s: apply_hadamard(s, bob_reg), "walsh-hadamard")

    joint = ctx.exact_distribution().probabilities.reshape(1 << k, 1 << k)
    forbidden = forbidden_mass(joint, instance)
    if instance.promise and forbidden >= FORBIDDEN_ATOL:
        raise ProtocolInvariantError(f"forbidden mass {forbidden:.3e} on promise pair")
    if instance.promise:
        ctx.exact["p_relation"] = 1.0 - forbidden
    ctx.details["forbidden_mass"] = forbidden

    ctx.output(ALICE, ctx.measure(ALICE, alice_reg, label="a"))
    ctx.output(BOB, ctx.measure(BOB, bob_reg, label="b"))


DJ_PSEUDO_TELEPATHY = Protocol(
    name="dj-pseudo-telepathy",
    setup_spec=lambda x, y: SetupSpec(ebits=len(x).bit_length() - 1),
    body=_dj_telepathy_body,
    zero_communication=True,
    promise=_dj_promise,
    validate=_dj_validate,
    description="k ebits; phase oracles then Walsh-Hadamard on each side",
)


def dj_pseudo_telepathy(instance: DjInstance, seed: int = 0) -> ProtocolOutcome:
    return run(DJ_PSEUDO_TELEPATHY, instance.x, instance.y, seed)


def _dj_qubit_body(ctx: ProtocolContext, x: str, y: str) -> None:
    instance = DjInstance.from_pair(x, y)
    register = ctx.prepare(ALICE, instance.k, label="prepare")
    ctx.local_op(ALICE, register, lambda s: apply_hadamard(s, register), "walsh-hadamard")
    ctx.local_op(ALICE, register, lambda s: apply_phase_oracle(s, register, SignVector.from_bits(x)), "oracle x")
    ctx.send_qubits(ALICE, register, label="register")
    ctx.output(ALICE, None)

    ctx.local_op(BOB, register, lambda s: apply_phase_oracle(s, register, SignVector.from_bits(y)), "oracle y")
    ctx.local_op(BOB, register, lambda s: apply_hadamard(s, register), "walsh-hadamard")
    p_zero = float(register_distribution(ctx.exact_distribution(), register)[0])
    if instance.promise:
        p_correct = p_zero if instance.delta == 0 else 1.0 - p_zero
        if p_correct < 1.0 - FORBIDDEN_ATOL:
            raise ProtocolInvariantError(f"verdict correct with probability {p_correct}")
        ctx.exact["p_correct"] = p_correct
    ctx.exact["p_equal_verdict"] = p_zero

    outcome = ctx.measure(BOB, register, label="outcome")
    verdict = Verdict.EQUAL if outcome == "0" * instance.k else Verdict.DIFFERENT
    ctx.output(BOB, EqualityVerdict(verdict, Confidence.EXACT))


DJ_QUBIT = Protocol(
    name="dj-qubit",
    setup_spec=lambda x, y: SetupSpec(),
    body=_dj_qubit_body,
    promise=_dj_promise,
    validate=_dj_validate,
    description="Alice sends k phase-encoded qubits; Bob decides Equal iff he reads 0^k",
)


def dj_qubit_protocol(instance: DjInstance, seed: int = 0) -> ProtocolOutcome:
    return run(DJ_QUBIT, instance.x, instance.y, seed)


# ─────────────────────────────────────────────
# Shared coins from ebits
# ─────────────────────────────────────────────
def entangled_coins_protocol(k: int) -> Protocol:
    if k < 1:
        raise ArgumentError(f"k must be >= 1, got {k}")

    def body(ctx: ProtocolContext, x: object, y: object) -> None:
        alice_reg = ctx.shared.owned_by(ALICE)
        bob_reg = ctx.shared.owned_by(BOB)
        dist = ctx.exact_distribution().probabilities.reshape(1 << k, 1 << k)
        ctx.exact["p_equal"] = float(np.trace(dist))
        ctx.output(ALICE, ctx.measure(ALICE, alice_reg, label="a"))
        ctx.output(BOB, ctx.measure(BOB, bob_reg, label="b"))

    return Protocol(
        name="entangled-coins",
        setup_spec=lambda x, y: SetupSpec(ebits=k),
        body=body,
        zero_communication=True,
        description="both parties measure their halves of k ebits",
    )


def entangled_shared_randomness(k: int, seed: int) -> ProtocolOutcome:
    """Identical uniform k-bit strings on both sides, no communication."""
    return run(entangled_coins_protocol(k), None, None, seed)
