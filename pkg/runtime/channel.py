# runtime/channel.py
"""
The accounted channel between the two parties.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from core.errors import ArgumentError, ProtocolMisuseError
from runtime.bits import validate_bits
from runtime.observability import log_event
from runtime.transcript import EventKind, Party, Phase, Transcript


@dataclass(frozen=True)
class ChannelSnapshot:
    classical_bits_sent: int
    qubits_sent: int
    ebits: int
    shared_random_bits: int
    bits_by_party: dict[str, int]
    qubits_by_party: dict[str, int]


@dataclass
class Channel:
    """
    Monotone resource counters. Traffic of the initialization phase is
    not accounted for, so the send operations refuse to run before the
    main phase opens.
    """

    phase: Phase = Phase.INITIALIZATION
    classical_bits_sent: int = 0
    qubits_sent: int = 0
    bits_by_party: dict[Party, int] = field(default_factory=lambda: {p: 0 for p in Party})
    qubits_by_party: dict[Party, int] = field(default_factory=lambda: {p: 0 for p in Party})
    transcript: Transcript = field(default_factory=Transcript)

    def open(self) -> None:
        self.phase = Phase.MAIN

    def require_main_phase(self, what: str) -> None:
        if self.phase is not Phase.MAIN:
            raise ProtocolMisuseError(
                f"{what} is not allowed during the initialization phase",
                self.transcript.next_step,
            )

    @property
    def counters(self) -> tuple[int, int]:
        return self.classical_bits_sent, self.qubits_sent

    def record(
        self,
        kind: EventKind,
        actor: Party,
        qubits: tuple[int, ...] = (),
        label: str = "",
    ) -> None:
        """Log a non-communicating event (local op, measurement, output)."""
        log_event(self.transcript, kind, actor, qubits=qubits, label=label, counters=self.counters)

    def snapshot(self, ebits: int = 0, shared_random_bits: int = 0) -> ChannelSnapshot:
        return ChannelSnapshot(
            classical_bits_sent=self.classical_bits_sent,
            qubits_sent=self.qubits_sent,
            ebits=ebits,
            shared_random_bits=shared_random_bits,
            bits_by_party={p.value: n for p, n in self.bits_by_party.items()},
            qubits_by_party={p.value: n for p, n in self.qubits_by_party.items()},
        )


def send_bits(channel: Channel, sender: Party, payload: str, label: str = "") -> Channel:
    """Account for `payload` and record the event; an empty payload is still recorded."""
    channel.require_main_phase("send_bits")
    validate_bits(payload, name="payload")
    channel.classical_bits_sent += len(payload)
    channel.bits_by_party[sender] += len(payload)
    log_event(
        channel.transcript,
        EventKind.SEND_BITS,
        sender,
        payload_bits=len(payload),
        label=label,
        counters=channel.counters,
    )
    return channel


def account_qubits(channel: Channel, sender: Party, qubits: list[int], label: str = "") -> Channel:
    channel.require_main_phase("send_qubits")
    if not qubits:
        raise ArgumentError("send_qubits needs at least one qubit")
    channel.qubits_sent += len(qubits)
    channel.qubits_by_party[sender] += len(qubits)
    log_event(
        channel.transcript,
        EventKind.SEND_QUBITS,
        sender,
        qubits=tuple(qubits),
        label=label,
        counters=channel.counters,
    )
    return channel
