# runtime/transcript.py
"""
Parties, run phases and the ordered event log of a protocol run.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from core.errors import ProtocolMisuseError


class Party(str, Enum):
    ALICE = "alice"
    BOB = "bob"

    @property
    def other(self) -> Party:
        return Party.BOB if self is Party.ALICE else Party.ALICE


class Phase(str, Enum):
    INITIALIZATION = "initialization"
    MAIN = "main"


class EventKind(str, Enum):
    SEND_BITS = "send_bits"
    SEND_QUBITS = "send_qubits"
    LOCAL_OP = "local_op"
    MEASURE = "measure"
    OUTPUT = "output"


@dataclass(frozen=True)
class TranscriptEvent:
    step: int
    actor: Party
    kind: EventKind
    payload_bits: int = 0
    qubits: tuple[int, ...] = ()
    label: str = ""
    classical_bits_sent: int = 0
    qubits_sent: int = 0

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "actor": self.actor.value,
            "kind": self.kind.value,
            "payload_bits": self.payload_bits,
            "qubits": list(self.qubits),
            "label": self.label,
            "counters": {
                "classical_bits_sent": self.classical_bits_sent,
                "qubits_sent": self.qubits_sent,
            },
        }


@dataclass
class Transcript:
    events: list[TranscriptEvent] = field(default_factory=list)

    @property
    def next_step(self) -> int:
        return len(self.events)

    def append(self, event: TranscriptEvent) -> None:
        if event.step != self.next_step:
            raise ProtocolMisuseError("transcript events must be appended in order", event.step)
        self.events.append(event)

    def of_kind(self, kind: EventKind) -> list[TranscriptEvent]:
        return [e for e in self.events if e.kind is kind]

    def recount(self) -> tuple[int, int]:
        """(classical bits, qubits) recomputed from the event log alone."""
        bits = sum(e.payload_bits for e in self.of_kind(EventKind.SEND_BITS))
        qubits = sum(len(e.qubits) for e in self.of_kind(EventKind.SEND_QUBITS))
        return bits, qubits

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in self.events)
