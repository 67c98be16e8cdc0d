# runtime/setup.py
"""
Initialization phase: shared random strings, shared reals and shared
entanglement, established before the inputs are handed out.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from core.errors import ArgumentError, OwnershipError
from quantum.state import StateVector, new_entangled_pairs
from runtime.bits import random_bits, validate_bits
from runtime.channel import Channel, account_qubits
from runtime.seeds import derive_rng
from runtime.transcript import Party

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SetupSpec:
    """What the parties agree on before they are separated."""

    string_count: int = 0
    string_length: int = 0
    real_count: int = 0
    real_interval: tuple[float, float] = (0.0, 1.0)
    ebits: int = 0

    def __post_init__(self) -> None:
        if min(self.string_count, self.string_length, self.real_count, self.ebits) < 0:
            raise ArgumentError("setup counts must be non-negative")
        lo, hi = self.real_interval
        if not lo < hi:
            raise ArgumentError(f"empty real interval {self.real_interval}")


@dataclass
class SharedSetup:
    shared_bits: tuple[str, ...] = ()
    shared_reals: tuple[float, ...] = ()
    entangled_state: StateVector | None = None
    ownership: dict[int, Party] = field(default_factory=dict)
    ebits: int = 0

    def __post_init__(self) -> None:
        for s in self.shared_bits:
            validate_bits(s, name="shared string")
        if self.entangled_state is not None:
            expected = set(range(self.entangled_state.num_qubits))
            if set(self.ownership) != expected:
                raise ArgumentError("ownership must cover every entangled qubit exactly once")

    @property
    def shared_random_bits(self) -> int:
        return sum(len(s) for s in self.shared_bits)

    def owned_by(self, party: Party) -> list[int]:
        return sorted(q for q, owner in self.ownership.items() if owner is party)

    def fork(self) -> SharedSetup:
        """Independent copy whose ownership map can be mutated by one run."""
        return replace(self, ownership=dict(self.ownership))

    @classmethod
    def build(
        cls,
        strings: tuple[str, ...] | list[str] = (),
        reals: tuple[float, ...] | list[float] = (),
        ebits: int = 0,
    ) -> SharedSetup:
        """Setup with explicitly chosen shared values (used by exhaustive enumeration)."""
        state = new_entangled_pairs(ebits) if ebits > 0 else None
        ownership = {q: (Party.ALICE if q < ebits else Party.BOB) for q in range(2 * ebits)}
        return cls(
            shared_bits=tuple(strings),
            shared_reals=tuple(float(r) for r in reals),
            entangled_state=state,
            ownership=ownership,
            ebits=ebits,
        )


def setup(spec: SetupSpec, seed: int) -> SharedSetup:
    """Deterministic function of (spec, seed)."""
    rng = derive_rng(seed, "setup")
    strings = tuple(random_bits(rng, spec.string_length) for _ in range(spec.string_count))

    lo, hi = spec.real_interval
    reals: list[float] = []
    for _ in range(spec.real_count):
        r = float(rng.uniform(lo, hi))
        while r == lo:  # keep the interval open
            r = float(rng.uniform(lo, hi))
        reals.append(r)

    shared = SharedSetup.build(strings, reals, spec.ebits)
    logger.debug(
        "setup: %d strings x %d bits, %d reals, %d ebits",
        spec.string_count,
        spec.string_length,
        spec.real_count,
        spec.ebits,
    )
    return shared


def send_qubits(
    shared: SharedSetup,
    channel: Channel,
    sender: Party,
    qubits: list[int],
    label: str = "",
) -> Channel:
    """Hand `qubits` to the other party; refuses qubits the sender does not hold."""
    for q in qubits:
        owner = shared.ownership.get(q)
        if owner is not sender:
            raise OwnershipError(
                f"{sender.value} cannot send qubit {q} held by "
                f"{owner.value if owner else 'nobody'}",
                channel.transcript.next_step,
            )
    account_qubits(channel, sender, list(qubits), label=label)
    for q in qubits:
        shared.ownership[q] = sender.other
    return channel
