# runtime/observability.py
"""
Structured event logging to the run transcript.
"""
from __future__ import annotations

import logging

from runtime.transcript import EventKind, Party, Transcript, TranscriptEvent

logger = logging.getLogger(__name__)


def log_event(
    transcript: Transcript,
    kind: EventKind,
    actor: Party,
    payload_bits: int = 0,
    qubits: tuple[int, ...] = (),
    label: str = "",
    counters: tuple[int, int] = (0, 0),
    level: str = "debug",
) -> TranscriptEvent:
    """Append a structured event to the transcript and mirror it to the log."""
    event = TranscriptEvent(
        step=transcript.next_step,
        actor=actor,
        kind=kind,
        payload_bits=payload_bits,
        qubits=qubits,
        label=label,
        classical_bits_sent=counters[0],
        qubits_sent=counters[1],
    )
    transcript.append(event)
    logger.log(
        getattr(logging, level.upper(), logging.DEBUG),
        "[%s] %s: step=%d bits=%d qubits=%s %s",
        kind.value,
        actor.value,
        event.step,
        payload_bits,
        list(qubits),
        label,
    )
    return event
