# runtime/runner.py
"""
Protocol descriptions and the two-phase runner.
"""
from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from core.errors import ProtocolMisuseError
from runtime.channel import Channel, ChannelSnapshot
from runtime.context import ProtocolContext
from runtime.setup import SetupSpec, SharedSetup, setup
from runtime.transcript import Party, Transcript

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Protocol:
    name: str
    setup_spec: Callable[[Any, Any], SetupSpec]
    body: Callable[[ProtocolContext, Any, Any], None]
    zero_communication: bool = False
    promise: Callable[[Any, Any], bool] | None = None
    validate: Callable[[Any, Any], None] | None = None
    description: str = ""


@dataclass
class ProtocolOutcome:
    protocol: str
    x: Any
    y: Any
    a: Any
    b: Any
    channel: ChannelSnapshot
    transcript: Transcript
    seed: int
    promise: bool | None = None
    exact: dict[str, float] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "x": self.x,
            "y": self.y,
            "a": self.a,
            "b": self.b,
            "seed": self.seed,
            "promise": self.promise,
            "classical_bits_sent": self.channel.classical_bits_sent,
            "qubits_sent": self.channel.qubits_sent,
            "ebits": self.channel.ebits,
            "shared_random_bits": self.channel.shared_random_bits,
            "exact": dict(self.exact),
        }


def run(protocol: Protocol, x: Any, y: Any, seed: int) -> ProtocolOutcome:
    """Initialization phase from `seed`, then the main phase; deterministic in its arguments."""
    if protocol.validate is not None:
        protocol.validate(x, y)
    shared = setup(protocol.setup_spec(x, y), seed)
    return run_with_setup(protocol, x, y, shared, seed)


def run_with_setup(
    protocol: Protocol,
    x: Any,
    y: Any,
    shared: SharedSetup,
    seed: int = 0,
) -> ProtocolOutcome:
    """Main phase on an explicitly supplied setup; the setup itself is left untouched."""
    if protocol.validate is not None:
        protocol.validate(x, y)
    promise = protocol.promise(x, y) if protocol.promise is not None else None

    channel = Channel()
    channel.open()
    ctx = ProtocolContext(shared.fork(), channel, seed)
    protocol.body(ctx, x, y)

    missing = [p.value for p in Party if p not in ctx.outputs]
    if missing:
        raise ProtocolMisuseError(f"{protocol.name}: no output from {', '.join(missing)}", ctx.step)
    if protocol.zero_communication and (channel.classical_bits_sent or channel.qubits_sent):
        raise ProtocolMisuseError(f"{protocol.name} is declared zero-communication", ctx.step)

    logger.debug(
        "run %s finished: bits=%d qubits=%d promise=%s",
        protocol.name,
        channel.classical_bits_sent,
        channel.qubits_sent,
        promise,
    )
    return ProtocolOutcome(
        protocol=protocol.name,
        x=x,
        y=y,
        a=ctx.outputs[Party.ALICE],
        b=ctx.outputs[Party.BOB],
        channel=channel.snapshot(ebits=shared.ebits, shared_random_bits=shared.shared_random_bits),
        transcript=channel.transcript,
        seed=seed,
        promise=promise,
        exact=ctx.exact,
        details=ctx.details,
    )
