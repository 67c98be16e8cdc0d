# runtime/context.py
"""
Per-run execution handle. Every action a protocol takes goes through a
ProtocolContext, tagged with the acting party, so ownership, phase and
alternation rules are checked at the step where they could be broken.
"""
from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np

from core.errors import OwnershipError, ProtocolMisuseError
from quantum.state import (
    OutcomeDistribution,
    StateVector,
    basis_state,
    measure_qubits,
    outcome_distribution,
    tensor,
)
from runtime.channel import Channel, send_bits
from runtime.seeds import derive_rng
from runtime.setup import SharedSetup, send_qubits
from runtime.transcript import EventKind, Party

logger = logging.getLogger(__name__)


class ProtocolContext:
    def __init__(self, shared: SharedSetup, channel: Channel, seed: int) -> None:
        self.shared = shared
        self.channel = channel
        self.seed = seed
        self.state: StateVector | None = shared.entangled_state
        self.outputs: dict[Party, Any] = {}
        self.exact: dict[str, float] = {}
        self.details: dict[str, Any] = {}
        self._inbox: dict[Party, deque[str]] = {p: deque() for p in Party}
        self._stream_counters: dict[tuple[Party, str], int] = {}

    @property
    def step(self) -> int:
        return self.channel.transcript.next_step

    # ─────────────────────────────────────────────
    # Randomness
    # ─────────────────────────────────────────────
    def rng(self, party: Party, purpose: str) -> np.random.Generator:
        """Fresh private stream labelled party | purpose | counter."""
        key = (party, purpose)
        counter = self._stream_counters.get(key, 0)
        self._stream_counters[key] = counter + 1
        return derive_rng(self.seed, party.value, purpose, counter)

    # ─────────────────────────────────────────────
    # Quantum actions
    # ─────────────────────────────────────────────
    def _require_owned(self, party: Party, qubits: Sequence[int]) -> None:
        for q in qubits:
            owner = self.shared.ownership.get(q)
            if owner is not party:
                raise OwnershipError(
                    f"{party.value} acted on qubit {q} held by "
                    f"{owner.value if owner else 'nobody'}",
                    self.step,
                )

    def prepare(self, party: Party, num_qubits: int, label: str = "prepare") -> list[int]:
        """Fresh |0...0> qubits held by `party`; returns their indices."""
        if self.state is None:
            self.state = basis_state(num_qubits, 0)
            new = list(range(num_qubits))
        else:
            start = self.state.num_qubits
            self.state = tensor(self.state, num_qubits)
            new = list(range(start, start + num_qubits))
        for q in new:
            self.shared.ownership[q] = party
        self.channel.record(EventKind.LOCAL_OP, party, qubits=tuple(new), label=label)
        return new

    def local_op(
        self,
        party: Party,
        qubits: Sequence[int],
        op: Callable[[StateVector], StateVector],
        label: str = "",
    ) -> None:
        if self.state is None:
            raise ProtocolMisuseError("no quantum state to act on", self.step)
        self._require_owned(party, qubits)
        self.state = op(self.state)
        self.channel.record(EventKind.LOCAL_OP, party, qubits=tuple(qubits), label=label)

    def measure(self, party: Party, qubits: Sequence[int], label: str = "") -> str:
        if self.state is None:
            raise ProtocolMisuseError("no quantum state to measure", self.step)
        self._require_owned(party, qubits)
        bits, self.state = measure_qubits(self.state, qubits, self.rng(party, "measure"))
        self.channel.record(EventKind.MEASURE, party, qubits=tuple(qubits), label=label)
        return bits

    def exact_distribution(self) -> OutcomeDistribution:
        """Simulator-side view of the joint state; not a party action."""
        if self.state is None:
            raise ProtocolMisuseError("no quantum state", self.step)
        return outcome_distribution(self.state)

    def discard_state(self, party: Party) -> None:
        """Drop the whole register once `party` holds every qubit of it."""
        if self.state is None:
            return
        self._require_owned(party, range(self.state.num_qubits))
        self.state = None
        self.shared.ownership.clear()

    # ─────────────────────────────────────────────
    # Communication
    # ─────────────────────────────────────────────
    def send_bits(self, party: Party, payload: str, label: str = "") -> None:
        send_bits(self.channel, party, payload, label=label)
        self._inbox[party.other].append(payload)

    def receive_bits(self, party: Party) -> str:
        if not self._inbox[party]:
            raise ProtocolMisuseError(
                f"{party.value} reads a message that was never sent", self.step
            )
        return self._inbox[party].popleft()

    def send_qubits(self, party: Party, qubits: Sequence[int], label: str = "") -> None:
        send_qubits(self.shared, self.channel, party, list(qubits), label=label)

    # ─────────────────────────────────────────────
    # Outputs
    # ─────────────────────────────────────────────
    def output(self, party: Party, value: Any) -> None:
        if party in self.outputs:
            raise ProtocolMisuseError(f"{party.value} already produced an output", self.step)
        self.outputs[party] = value
        self.channel.record(EventKind.OUTPUT, party, label=str(value))
