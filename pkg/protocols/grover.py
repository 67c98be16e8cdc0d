# protocols/grover.py
"""
Distributed search for a common free day.

The register (lg n index qubits plus one marking qubit) shuttles between
the parties once per oracle call: Alice toggles the marking qubit on
x_i, Bob flips the phase where the mark is set and y_i = 1, Alice
untoggles and applies the diffusion. Iteration counts are drawn fresh
each round since the number of common days is unknown; every candidate
is checked classically (the day index with x_i, then y_i) before it is
returned.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from core.errors import ArgumentError
from quantum.state import (
    SignVector,
    apply_hadamard,
    apply_phase_oracle,
    apply_x_conditioned,
    register_distribution,
)
from runtime.bits import bits_to_int, int_to_bits, is_power_of_two, validate_bits
from runtime.context import ProtocolContext
from runtime.runner import Protocol, ProtocolOutcome, run
from runtime.setup import SetupSpec
from runtime.transcript import Party

logger = logging.getLogger(__name__)

ALICE, BOB = Party.ALICE, Party.BOB


@dataclass(frozen=True)
class ScheduleInstance:
    n: int
    x: str
    y: str

    def __post_init__(self) -> None:
        if not is_power_of_two(self.n) or self.n < 2:
            raise ArgumentError(f"n must be a power of two >= 2, got {self.n}")
        validate_bits(self.x, length=self.n, name="x")
        validate_bits(self.y, length=self.n, name="y")

    @property
    def index_qubits(self) -> int:
        return self.n.bit_length() - 1

    @property
    def common_days(self) -> list[int]:
        """1-based days free for both."""
        return [i + 1 for i, (a, b) in enumerate(zip(self.x, self.y)) if a == b == "1"]


def rounds_for(n: int) -> int:
    return max(1, math.ceil(3 * math.log2(n)))


def max_iterations(n: int) -> int:
    return math.ceil(math.sqrt(n))


def grover_success_probability(n: int, marked: int, iterations: int) -> float:
    """Probability of reading a marked index after `iterations` amplification steps."""
    if not 0 <= marked <= n:
        raise ArgumentError(f"marked must lie in [0, {n}], got {marked}")
    if marked == 0:
        return 0.0
    theta = math.asin(math.sqrt(marked / n))
    return math.sin((2 * iterations + 1) * theta) ** 2


def _bob_phase_bits(y: str) -> str:
    # register value (i << 1) | mark
    return "".join("1" if mark and day == "1" else "0" for day in y for mark in (0, 1))


def _schedule_body(ctx: ProtocolContext, x: str, y: str) -> None:
    instance = ScheduleInstance(len(x), x, y)
    n, q = instance.n, instance.index_qubits
    rounds = rounds_for(n)
    bob_signs = SignVector.from_bits(_bob_phase_bits(y))
    reflect_zero = SignVector.from_bits("0" + "1" * (n - 1))
    marked = {i - 1 for i in instance.common_days}

    iterations_used: list[int] = []
    round_success: list[float] = []
    answer: int | None = None
    bob_answer: int | None = None

    for round_index in range(rounds):
        m = int(ctx.rng(ALICE, "grover-iterations").integers(1, max_iterations(n) + 1))
        iterations_used.append(m)

        qubits = ctx.prepare(ALICE, q + 1, label=f"round {round_index}")
        index, mark = qubits[:q], qubits[q]
        ctx.local_op(ALICE, index, lambda s: apply_hadamard(s, index), "uniform superposition")

        for _ in range(m):
            ctx.local_op(ALICE, qubits, lambda s: apply_x_conditioned(s, index, mark, x), "toggle on x")
            ctx.send_qubits(ALICE, qubits, label="register")
            ctx.local_op(BOB, qubits, lambda s: apply_phase_oracle(s, qubits, bob_signs), "phase on mark and y")
            ctx.send_qubits(BOB, qubits, label="register")
            ctx.local_op(ALICE, qubits, lambda s: apply_x_conditioned(s, index, mark, x), "untoggle on x")
            ctx.local_op(ALICE, index, lambda s: apply_hadamard(s, index), "diffusion H")
            ctx.local_op(ALICE, index, lambda s: apply_phase_oracle(s, index, reflect_zero), "diffusion reflect")
            ctx.local_op(ALICE, index, lambda s: apply_hadamard(s, index), "diffusion H")

        marginal = register_distribution(ctx.exact_distribution(), index)
        round_success.append(float(sum(marginal[i] for i in marked)))

        candidate = int(ctx.measure(ALICE, index, label="candidate"), 2)
        ctx.discard_state(ALICE)

        # Bob learns the candidate day along with x_i
        ctx.send_bits(ALICE, int_to_bits(candidate, q) + x[candidate], label="i|x_i")
        message = ctx.receive_bits(BOB)
        day, x_bit = bits_to_int(message[:q]), message[q]
        ctx.send_bits(BOB, y[day], label="y_i")
        y_bit = ctx.receive_bits(ALICE)
        if x_bit == "1" and y_bit == "1":
            answer = candidate + 1
            bob_answer = day + 1
            break

    qubits_sent = ctx.channel.qubits_sent
    scale = math.sqrt(n) * math.log2(n)
    ctx.details.update(
        rounds=len(iterations_used),
        max_rounds=rounds,
        iterations=iterations_used,
        qubits_per_oracle_call=2 * (q + 1),
        constant_d=qubits_sent / scale,
        round_success=round_success,
    )
    logger.debug("schedule n=%d answer=%s rounds=%d qubits=%d", n, answer, len(iterations_used), qubits_sent)
    ctx.output(ALICE, answer)
    ctx.output(BOB, bob_answer)


def _validate_schedule(x: str, y: str) -> None:
    ScheduleInstance(len(x), x, y)


GROVER_SCHEDULE = Protocol(
    name="grover-schedule",
    setup_spec=lambda x, y: SetupSpec(),
    body=_schedule_body,
    validate=_validate_schedule,
    description="distributed amplitude amplification over x AND y with verified candidates",
)


def distributed_grover_schedule(instance: ScheduleInstance, seed: int) -> ProtocolOutcome:
    return run(GROVER_SCHEDULE, instance.x, instance.y, seed)
