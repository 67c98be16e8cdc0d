# protocols/registry.py
"""
Name -> entry table for every runnable protocol.

An entry knows how to build the protocol from experiment parameters,
which input domain it runs over, what counts as a successful trial and,
where one exists, the exact success probability for a given input.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np

from core.config import get_settings
from core.errors import ArgumentError, CapacityError, ConfigError
from protocols import classical, grover, quantum
from runtime.bits import all_bit_strings, hamming_distance, random_bits
from runtime.runner import Protocol, ProtocolOutcome

logger = logging.getLogger(__name__)


class InputDomain(str, Enum):
    BITS = "bits"
    DJ = "dj"
    UNIT_ANGLES = "unit-angles"
    ANGLES = "angles"
    NONE = "none"


@dataclass(frozen=True)
class InputCase:
    input_id: str
    x: Any
    y: Any


@dataclass(frozen=True)
class ProtocolEntry:
    name: str
    summary: str
    domain: InputDomain
    build: Callable[[dict[str, Any]], Protocol]
    success: Callable[[ProtocolOutcome], bool]
    exact: Callable[[Any, Any, dict[str, Any]], float | None] = lambda x, y, p: None
    batch: Callable[[Any, Any, int, np.random.Generator], int] | None = None
    defaults: dict[str, Any] = field(default_factory=dict)
    estimate: str = "P(success)"

    def params(self, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
        merged = dict(self.defaults)
        for key, value in (overrides or {}).items():
            if key not in self.defaults:
                raise ConfigError(f"unknown parameter {key!r} for {self.name}", location=f"params.{key}")
            kind = type(self.defaults[key])
            try:
                merged[key] = kind(str(value)) if kind is Fraction else kind(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(str(exc), location=f"params.{key}") from exc
        return merged


# ─────────────────────────────────────────────
# Success predicates
# ─────────────────────────────────────────────
def _equality_correct(outcome: ProtocolOutcome) -> bool:
    return outcome.b.equal == (outcome.x == outcome.y)


def _agree(outcome: ProtocolOutcome) -> bool:
    return outcome.a == outcome.b


def _dj_relation_holds(outcome: ProtocolOutcome) -> bool:
    return quantum.dj_relation(outcome.x, outcome.y, outcome.a, outcome.b)


def _hamming_correct(outcome: ProtocolOutcome) -> bool:
    same = outcome.x.count("1") == outcome.y.count("1")
    return outcome.b == (0 if same else 1)


def _schedule_correct(outcome: ProtocolOutcome) -> bool:
    common = grover.ScheduleInstance(len(outcome.x), outcome.x, outcome.y).common_days
    if outcome.a is None:
        return not common
    return outcome.a in common and outcome.b == outcome.a


# ─────────────────────────────────────────────
# Exact values
# ─────────────────────────────────────────────
def _fingerprint_exact(x: str, y: str, params: dict[str, Any]) -> float:
    if x == y:
        return 1.0
    p = classical.smallest_prime_above(Fraction(len(x)) / Fraction(params["epsilon"]))
    return 1.0 - classical.fingerprint_collisions(x, y, p) / p


def _shared_exact(x: str, y: str, params: dict[str, Any]) -> float:
    return 1.0 if x == y else 1.0 - 2.0 ** -params["m"]


def _cos2(x: float, y: float, params: dict[str, Any]) -> float:
    return math.cos(x - y) ** 2


def _fake_dj_exact(x: str, y: str, params: dict[str, Any]) -> float:
    delta = hamming_distance(x, y)
    k = len(x).bit_length() - 1
    return 1.0 - 2.0 ** -k if 2 * delta == len(x) else 1.0


def _one(x: Any, y: Any, params: dict[str, Any]) -> float:
    return 1.0


def _epr_batch(x: float, y: float, trials: int, rng: np.random.Generator) -> int:
    return classical.sample_epr_agreement(x, y, trials, rng).agreements


# ─────────────────────────────────────────────
# Registry
# ─────────────────────────────────────────────
PROTOCOLS: dict[str, ProtocolEntry] = {
    entry.name: entry
    for entry in (
        ProtocolEntry(
            name="fingerprint-equality",
            summary="random evaluation point of the input polynomial over F_p",
            domain=InputDomain.BITS,
            build=lambda p: classical.fingerprint_protocol(p["epsilon"]),
            success=_equality_correct,
            exact=_fingerprint_exact,
            defaults={"n": 16, "epsilon": Fraction(1, 4)},
        ),
        ProtocolEntry(
            name="shared-equality",
            summary="m inner products with shared random strings",
            domain=InputDomain.BITS,
            build=lambda p: classical.shared_equality_protocol(p["m"]),
            success=_equality_correct,
            exact=_shared_exact,
            defaults={"n": 4, "m": 2},
        ),
        ProtocolEntry(
            name="epr-classical",
            summary="one-bit simulation of the EPR task on angles in (0,1)",
            domain=InputDomain.UNIT_ANGLES,
            build=lambda p: classical.EPR_ONE_BIT,
            success=_agree,
            exact=_cos2,
            batch=_epr_batch,
            estimate="P(a=b)",
        ),
        ProtocolEntry(
            name="fake-dj",
            summary="zero-communication faking of the Deutsch-Jozsa relation",
            domain=InputDomain.DJ,
            build=lambda p: classical.FAKE_DJ,
            success=_dj_relation_holds,
            exact=_fake_dj_exact,
            defaults={"k": 2},
            estimate="P(relation)",
        ),
        ProtocolEntry(
            name="epr-quantum",
            summary="one ebit measured at angles x and y",
            domain=InputDomain.ANGLES,
            build=lambda p: quantum.EPR_QUANTUM,
            success=_agree,
            exact=_cos2,
            estimate="P(a=b)",
        ),
        ProtocolEntry(
            name="dj-pseudo-telepathy",
            summary="Deutsch-Jozsa relation from k ebits, no communication",
            domain=InputDomain.DJ,
            build=lambda p: quantum.DJ_PSEUDO_TELEPATHY,
            success=_dj_relation_holds,
            exact=_one,
            defaults={"k": 2},
            estimate="P(relation)",
        ),
        ProtocolEntry(
            name="dj-qubit",
            summary="promise equality with k qubits of communication",
            domain=InputDomain.DJ,
            build=lambda p: quantum.DJ_QUBIT,
            success=_equality_correct,
            exact=_one,
            defaults={"k": 2},
        ),
        ProtocolEntry(
            name="grover-schedule",
            summary="distributed search for a common free day",
            domain=InputDomain.BITS,
            build=lambda p: grover.GROVER_SCHEDULE,
            success=_schedule_correct,
            defaults={"n": 16},
        ),
        ProtocolEntry(
            name="hamming-weight",
            summary="Alice sends her Hamming weight",
            domain=InputDomain.BITS,
            build=lambda p: classical.HAMMING_WEIGHT,
            success=_hamming_correct,
            exact=_one,
            defaults={"n": 8},
        ),
        ProtocolEntry(
            name="trivial-equality",
            summary="Alice sends her whole input",
            domain=InputDomain.BITS,
            build=lambda p: classical.TRIVIAL_EQUALITY,
            success=_equality_correct,
            exact=_one,
            defaults={"n": 8},
        ),
        ProtocolEntry(
            name="entangled-coins",
            summary="shared random bits read off k ebits",
            domain=InputDomain.NONE,
            build=lambda p: quantum.entangled_coins_protocol(p["k"]),
            success=_agree,
            exact=_one,
            defaults={"k": 2},
            estimate="P(a=b)",
        ),
    )
}


def get_entry(name: str) -> ProtocolEntry:
    try:
        return PROTOCOLS[name]
    except KeyError:
        known = ", ".join(sorted(PROTOCOLS))
        raise ConfigError(f"unknown protocol {name!r} (known: {known})", location="protocol") from None


# ─────────────────────────────────────────────
# Input generation
# ─────────────────────────────────────────────
def format_input_id(x: Any, y: Any) -> str:
    if x is None and y is None:
        return "-"
    if isinstance(x, float) or isinstance(y, float):
        return f"x={x:.6f},y={y:.6f}"
    return f"x={x},y={y}"


def _case(x: Any, y: Any) -> InputCase:
    return InputCase(format_input_id(x, y), x, y)


def _input_length(entry: ProtocolEntry, params: dict[str, Any]) -> int:
    if entry.domain is InputDomain.DJ:
        return 1 << params["k"]
    return params["n"]


def _check_enumeration(size: int) -> None:
    bound = get_settings().search_max_strategies
    if size > bound:
        raise CapacityError(f"{size} input pairs", bound=bound)


def _parse_explicit(entry: ProtocolEntry, token: str, index: int) -> InputCase:
    location = f"inputs[{index}]"
    parts = [part.strip() for part in token.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"expected 'x,y', got {token!r}", location=location)
    try:
        if entry.domain in (InputDomain.UNIT_ANGLES, InputDomain.ANGLES):
            return _case(float(parts[0]), float(parts[1]))
        return _case(parts[0], parts[1])
    except ValueError as exc:
        raise ConfigError(str(exc), location=location) from exc


def _grid_shape(grid: str | int) -> tuple[int, int]:
    text = str(grid).lower()
    try:
        rows, _, cols = text.partition("x")
        shape = (int(rows), int(cols or rows))
    except ValueError:
        raise ConfigError(f"grid must look like G or GxH, got {grid!r}", location="grid") from None
    if min(shape) < 1:
        raise ConfigError("grid dimensions must be >= 1", location="grid")
    return shape


def _axis(domain: InputDomain, size: int) -> list[float]:
    if domain is InputDomain.UNIT_ANGLES:
        return [(i + 1) / (size + 1) for i in range(size)]
    if size == 1:
        return [0.0]
    return [i * math.pi / (size - 1) for i in range(size)]


def _dj_promise_pairs(n: int) -> list[tuple[str, str]]:
    strings = list(all_bit_strings(n))
    return [(x, y) for x in strings for y in strings if hamming_distance(x, y) in (0, n // 2)]


def _random_pair(entry: ProtocolEntry, length: int, rng: np.random.Generator, i: int) -> tuple[Any, Any]:
    if entry.domain is InputDomain.UNIT_ANGLES:
        lo = np.nextafter(0.0, 1.0)
        return float(rng.uniform(lo, 1.0)), float(rng.uniform(lo, 1.0))
    if entry.domain is InputDomain.ANGLES:
        return float(rng.uniform(0.0, math.pi)), float(rng.uniform(0.0, math.pi))
    x = random_bits(rng, length)
    if entry.domain is InputDomain.DJ:
        if i % 2 == 0:
            return x, x
        flips = set(int(j) for j in rng.choice(length, size=length // 2, replace=False))
        return x, "".join(("1" if b == "0" else "0") if j in flips else b for j, b in enumerate(x))
    # every other pair equal so equality protocols see both answers
    return (x, x) if i % 2 == 0 else (x, random_bits(rng, length))


def generate_inputs(
    entry: ProtocolEntry,
    mode: str,
    params: dict[str, Any],
    rng: np.random.Generator,
    explicit: list[str] | None = None,
    grid: str | int | None = None,
    count: int = 0,
) -> list[InputCase]:
    """Input cases for `mode` in {explicit, grid, exhaustive, random}."""
    if entry.domain is InputDomain.NONE:
        return [InputCase(f"k={params['k']}", None, None)]

    if mode == "explicit":
        if not explicit:
            raise ConfigError("explicit mode needs at least one input", location="inputs")
        cases = [_parse_explicit(entry, token, i) for i, token in enumerate(explicit)]
    elif mode == "grid":
        if entry.domain not in (InputDomain.UNIT_ANGLES, InputDomain.ANGLES):
            raise ConfigError(f"{entry.name} takes bit strings; grid mode needs angles", location="mode")
        rows, cols = _grid_shape(grid if grid is not None else 5)
        cases = [
            _case(x, y)
            for x, y in itertools.product(_axis(entry.domain, rows), _axis(entry.domain, cols))
        ]
    elif mode == "exhaustive":
        if entry.domain in (InputDomain.UNIT_ANGLES, InputDomain.ANGLES):
            raise ConfigError(f"{entry.name} has a continuous input domain", location="mode")
        n = _input_length(entry, params)
        _check_enumeration(1 << (2 * n))
        if entry.domain is InputDomain.DJ:
            cases = [_case(x, y) for x, y in _dj_promise_pairs(n)]
        else:
            strings = list(all_bit_strings(n))
            cases = [_case(x, y) for x in strings for y in strings]
    elif mode == "random":
        if count < 1:
            raise ConfigError("random mode needs count >= 1", location="count")
        length = _input_length(entry, params) if entry.domain in (InputDomain.BITS, InputDomain.DJ) else 0
        cases = [_case(*_random_pair(entry, length, rng, i)) for i in range(count)]
    else:
        raise ConfigError(f"unknown input mode {mode!r}", location="mode")

    for case in cases:
        _validate_case(entry, case, params)
    return cases


def _validate_case(entry: ProtocolEntry, case: InputCase, params: dict[str, Any]) -> None:
    validate = entry.build(params).validate
    if validate is None:
        return
    try:
        validate(case.x, case.y)
    except ArgumentError as exc:
        raise ConfigError(str(exc), location=f"input {case.input_id}") from exc


def describe() -> list[dict[str, str]]:
    return [
        {"name": e.name, "domain": e.domain.value, "estimate": e.estimate, "summary": e.summary}
        for e in sorted(PROTOCOLS.values(), key=lambda e: e.name)
    ]

