# protocols/classical.py
"""
Fully classical protocols: polynomial fingerprinting and shared-string
inner products for equality, the one-bit simulation of the EPR task on
restricted angles, the faking strategy for the Deutsch-Jozsa relation,
plus the two baseline protocols (Hamming weight, send-everything).
"""
from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy import integrate

from core.config import get_settings
from core.errors import ArgumentError, CapacityError, ProtocolInvariantError
from runtime.bits import (
    bits_to_int,
    hamming_distance,
    hamming_weight,
    int_to_bits,
    is_power_of_two,
    validate_bits,
)
from runtime.context import ProtocolContext
from runtime.runner import Protocol, ProtocolOutcome, run, run_with_setup
from runtime.setup import SetupSpec, SharedSetup
from runtime.transcript import Party

logger = logging.getLogger(__name__)

ALICE, BOB = Party.ALICE, Party.BOB


# ─────────────────────────────────────────────
# Shared types
# ─────────────────────────────────────────────
class Verdict(str, Enum):
    EQUAL = "equal"
    DIFFERENT = "different"


class Confidence(str, Enum):
    EXACT = "exact"
    PROBABILISTIC = "probabilistic"


@dataclass(frozen=True)
class EqualityVerdict:
    """Different is only ever emitted on certain evidence."""

    verdict: Verdict
    confidence: Confidence

    @property
    def equal(self) -> bool:
        return self.verdict is Verdict.EQUAL

    def __str__(self) -> str:
        return f"{self.verdict.value} ({self.confidence.value})"


@dataclass(frozen=True)
class EnumerationCount:
    hits: int
    total: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.hits, self.total)


def _validate_pair(x: str, y: str) -> None:
    validate_bits(x, name="x")
    validate_bits(y, length=len(x), name="y")
    if not x:
        raise ArgumentError("inputs must have length >= 1")


def inner_product(x: str, a: str) -> int:
    """Parity of the positions where both strings hold a 1."""
    validate_bits(x, name="x")
    validate_bits(a, length=len(x), name="a")
    return sum(1 for xi, ai in zip(x, a) if xi == "1" and ai == "1") & 1


@functools.lru_cache(maxsize=16)
def _parity_table(n: int) -> np.ndarray:
    return np.array([bin(v).count("1") & 1 for v in range(1 << n)], dtype=np.int8)


def _parities(x: str) -> np.ndarray:
    """x . t for every t in {0,1}^n, indexed by the integer value of t."""
    n = len(x)
    return _parity_table(n)[np.arange(1 << n) & bits_to_int(x)]


def _count_agreeing_tuples(agree: np.ndarray, k: int) -> int:
    """Number of k-tuples (t_1..t_k) with agree[t_i] for every i, enumerated tuple by tuple."""
    if k == 0:
        return 1
    size = agree.shape[0]
    bound = get_settings().search_max_strategies
    if size ** (k - 1) > bound:
        raise CapacityError(f"{size}^{k} shared-string tuples", bound=bound)
    inner = int(agree.sum())
    count = 0
    for prefix in itertools.product(range(size), repeat=k - 1):
        if all(agree[t] for t in prefix):
            count += inner
    return count


# ─────────────────────────────────────────────
# Prime field
# ─────────────────────────────────────────────
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def smallest_prime_above(t: int | float | Fraction) -> int:
    """Smallest prime p > t, checked to satisfy p <= 2t."""
    t = Fraction(t)
    if t < 1:
        raise ArgumentError(f"t must be >= 1, got {t}")
    cap = get_settings().prime_search_cap
    if t >= cap:
        raise CapacityError(f"prime search above {float(t)}", bound=cap)
    candidate = math.floor(t) + 1
    while not is_prime(candidate):
        candidate += 1
        if candidate > cap:
            raise CapacityError(f"prime search above {float(t)}", bound=cap)
    if candidate > 2 * t:
        raise ProtocolInvariantError(f"no prime in ({t}, {2 * t}]; found {candidate}")
    return candidate


def field_width(p: int) -> int:
    """Bits per element of F_p on the wire (ceil(lg p))."""
    return max(1, (p - 1).bit_length())


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise ArgumentError(f"modulus {self.modulus} is not prime")
        if not 0 <= self.value < self.modulus:
            raise ArgumentError(f"{self.value} is not an element of F_{self.modulus}")

    def encode(self) -> str:
        return int_to_bits(self.value, field_width(self.modulus))


def poly_eval(coefficients: str, w: int, p: int) -> int:
    """x_1 + x_2 w + ... + x_n w^{n-1} mod p, by Horner's rule."""
    acc = 0
    for bit in reversed(coefficients):
        acc = (acc * w + (bit == "1")) % p
    return acc


def fingerprint_collisions(x: str, y: str, p: int) -> int:
    """Number of points w of F_p where the two fingerprint polynomials agree."""
    _validate_pair(x, y)
    return sum(1 for w in range(p) if poly_eval(x, w, p) == poly_eval(y, w, p))


# ─────────────────────────────────────────────
# Fingerprint equality
# ─────────────────────────────────────────────
def _check_epsilon(epsilon: float | Fraction) -> Fraction:
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ArgumentError(f"epsilon must lie in (0, 1), got {epsilon}")
    return eps


def fingerprint_protocol(epsilon: float | Fraction = Fraction(1, 4)) -> Protocol:
    eps = _check_epsilon(epsilon)

    def body(ctx: ProtocolContext, x: str, y: str) -> None:
        p = smallest_prime_above(Fraction(len(x)) / eps)
        width = field_width(p)
        w = FieldElement(int(ctx.rng(ALICE, "fingerprint-point").integers(0, p)), p)
        v = FieldElement(poly_eval(x, w.value, p), p)
        ctx.send_bits(ALICE, w.encode() + v.encode(), label="w|v")
        ctx.output(ALICE, None)

        message = ctx.receive_bits(BOB)
        w_received = bits_to_int(message[:width])
        v_received = bits_to_int(message[width:])
        same = poly_eval(y, w_received, p) == v_received
        ctx.output(
            BOB,
            EqualityVerdict(Verdict.EQUAL if same else Verdict.DIFFERENT, Confidence.PROBABILISTIC),
        )
        ctx.details.update(p=p, field_width=width)

    return Protocol(
        name="fingerprint-equality",
        setup_spec=lambda x, y: SetupSpec(),
        body=body,
        validate=_validate_pair,
        description="Alice sends a random point w and P(w) over F_p, p the smallest prime above n/epsilon",
    )


def fingerprint_equality(
    x: str,
    y: str,
    epsilon: float | Fraction,
    seed: int,
) -> ProtocolOutcome:
    return run(fingerprint_protocol(epsilon), x, y, seed)


# ─────────────────────────────────────────────
# Shared-randomness equality
# ─────────────────────────────────────────────
def _check_strings(shared_bits: tuple[str, ...], count: int, length: int) -> None:
    if len(shared_bits) != count or any(len(s) != length for s in shared_bits):
        raise ArgumentError(
            f"setup must hold exactly {count} shared strings of length {length}"
        )


def shared_equality_verdict(x: str, y: str, strings: tuple[str, ...]) -> Verdict:
    for a in strings:
        if inner_product(x, a) != inner_product(y, a):
            return Verdict.DIFFERENT
    return Verdict.EQUAL


def shared_equality_protocol(m: int) -> Protocol:
    if m < 1:
        raise ArgumentError(f"m must be >= 1, got {m}")

    def body(ctx: ProtocolContext, x: str, y: str) -> None:
        strings = ctx.shared.shared_bits
        _check_strings(strings, m, len(x))
        payload = "".join(str(inner_product(x, a)) for a in strings)
        ctx.send_bits(ALICE, payload, label="b_1..b_m")
        ctx.output(ALICE, None)

        received = ctx.receive_bits(BOB)
        different = any(int(b) != inner_product(y, a) for b, a in zip(received, strings))
        ctx.output(
            BOB,
            EqualityVerdict(
                Verdict.DIFFERENT if different else Verdict.EQUAL, Confidence.PROBABILISTIC
            ),
        )

    return Protocol(
        name="shared-equality",
        setup_spec=lambda x, y: SetupSpec(string_count=m, string_length=len(x)),
        body=body,
        validate=_validate_pair,
        description="Alice sends x . a_i for m shared strings a_i",
    )


def shared_randomness_equality(
    x: str,
    y: str,
    m: int,
    shared: SharedSetup,
    seed: int = 0,
) -> ProtocolOutcome:
    _validate_pair(x, y)
    _check_strings(shared.shared_bits, m, len(x))
    return run_with_setup(shared_equality_protocol(m), x, y, shared, seed)


def shared_equality_false_equal_rate(x: str, y: str, m: int) -> EnumerationCount:
    """Equal verdicts over every m-tuple of shared strings."""
    _validate_pair(x, y)
    agree = _parities(x) == _parities(y)
    hits = _count_agreeing_tuples(agree, m)
    return EnumerationCount(hits, 1 << (len(x) * m))


# ─────────────────────────────────────────────
# Baselines
# ─────────────────────────────────────────────
def _hamming_body(ctx: ProtocolContext, x: str, y: str) -> None:
    width = len(x).bit_length()
    ctx.send_bits(ALICE, int_to_bits(hamming_weight(x), width), label="|x|")
    ctx.output(ALICE, None)
    weight = bits_to_int(ctx.receive_bits(BOB))
    ctx.output(BOB, 0 if weight == hamming_weight(y) else 1)


HAMMING_WEIGHT = Protocol(
    name="hamming-weight",
    setup_spec=lambda x, y: SetupSpec(),
    body=_hamming_body,
    validate=_validate_pair,
    description="f(x,y)=0 iff equal Hamming weights; Alice sends |x| in ceil(lg(n+1)) bits",
)


def _trivial_body(ctx: ProtocolContext, x: str, y: str) -> None:
    ctx.send_bits(ALICE, x, label="x")
    ctx.output(ALICE, None)
    received = ctx.receive_bits(BOB)
    verdict = Verdict.EQUAL if received == y else Verdict.DIFFERENT
    ctx.output(BOB, EqualityVerdict(verdict, Confidence.EXACT))


TRIVIAL_EQUALITY = Protocol(
    name="trivial-equality",
    setup_spec=lambda x, y: SetupSpec(),
    body=_trivial_body,
    validate=_validate_pair,
    description="Alice sends all n bits of x",
)


# ─────────────────────────────────────────────
# One-bit simulation of the EPR task
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class EprInputs:
    x: float
    y: float

    def __post_init__(self) -> None:
        for name, value in (("x", self.x), ("y", self.y)):
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise ArgumentError(f"{name} must lie strictly inside (0, 1), got {value!r}")


def _validate_epr(x: float, y: float) -> None:
    EprInputs(x, y)


def _epr_one_bit_body(ctx: ProtocolContext, x: float, y: float) -> None:
    if len(ctx.shared.shared_bits) != 1 or len(ctx.shared.shared_bits[0]) != 1:
        raise ArgumentError("setup must hold the shared bit c")
    if len(ctx.shared.shared_reals) != 1:
        raise ArgumentError("setup must hold the shared real r")
    c = int(ctx.shared.shared_bits[0])
    r = ctx.shared.shared_reals[0]

    ctx.output(ALICE, c)
    ctx.send_bits(ALICE, "1" if r < x else "0", label="[r<x]")

    below_x = ctx.receive_bits(BOB) == "1"
    between = below_x != (r < y)
    b = c
    if between and ctx.rng(BOB, "epr-flip").random() < math.sin(2.0 * abs(y - r)):
        b = 1 - c
    ctx.details["between"] = between
    ctx.output(BOB, b)


EPR_ONE_BIT = Protocol(
    name="epr-classical",
    setup_spec=lambda x, y: SetupSpec(string_count=1, string_length=1, real_count=1),
    body=_epr_one_bit_body,
    validate=_validate_epr,
    description="shared bit c and real r; Alice sends [r<x]; Bob flips with probability sin(2|y-r|)",
)


def simulate_epr_one_bit(inputs: EprInputs, shared: SharedSetup, seed: int = 0) -> ProtocolOutcome:
    return run_with_setup(EPR_ONE_BIT, inputs.x, inputs.y, shared, seed)


@dataclass(frozen=True)
class EprSample:
    trials: int
    agreements: int
    b_zeros: int

    @property
    def p_equal(self) -> float:
        return self.agreements / self.trials


def sample_epr_agreement(x: float, y: float, trials: int, rng: np.random.Generator) -> EprSample:
    """Vectorised form of the same decision rule, for large trial counts."""
    EprInputs(x, y)
    c = rng.integers(0, 2, size=trials)
    r = rng.random(trials)
    u = rng.random(trials)
    between = (r < x) != (r < y)
    flip = between & (u < np.sin(2.0 * np.abs(y - r)))
    b = np.where(flip, 1 - c, c)
    return EprSample(trials, int(trials - flip.sum()), int((b == 0).sum()))


def epr_agreement_integral(x: float, y: float) -> float:
    """Integral over r in (0,1) of the probability that a = b given r."""
    EprInputs(x, y)
    lo, hi = min(x, y), max(x, y)

    def density(r: float) -> float:
        return 1.0 - math.sin(2.0 * abs(y - r)) if lo < r < hi else 1.0

    value, _ = integrate.quad(
        density, 0.0, 1.0, points=sorted({lo, hi}), epsabs=1e-13, epsrel=1e-13, limit=200
    )
    return value


@dataclass(frozen=True)
class FlipWeightDiagnostic:
    max_angle: float
    min_weight: float
    max_weight: float
    first_violation: float | None
    violating_fraction: float

    @property
    def valid(self) -> bool:
        return self.first_violation is None


def flip_weight_diagnostic(max_angle: float, samples: int = 10_001) -> FlipWeightDiagnostic:
    """
    For exact cos^2 correlation the flip probability at angle gap d must
    be d/dd sin^2(d) = sin(2d); report where it stops being a probability
    once gaps up to `max_angle` are allowed.
    """
    if max_angle <= 0:
        raise ArgumentError("max_angle must be positive")
    gaps = np.linspace(0.0, max_angle, samples)
    weights = np.sin(2.0 * gaps)
    bad = (weights < -1e-12) | (weights > 1.0 + 1e-12)
    first = float(gaps[np.argmax(bad)]) if bad.any() else None
    if first is not None:
        logger.info("flip weight leaves [0,1] at gap %.6f (max_angle=%.6f)", first, max_angle)
    return FlipWeightDiagnostic(
        max_angle=max_angle,
        min_weight=float(weights.min()),
        max_weight=float(weights.max()),
        first_violation=first,
        violating_fraction=float(bad.mean()),
    )


# ─────────────────────────────────────────────
# Faking the Deutsch-Jozsa relation
# ─────────────────────────────────────────────
def _dj_k(n: int) -> int:
    if not is_power_of_two(n):
        raise ArgumentError(f"input length must be a power of two, got {n}")
    return n.bit_length() - 1


def fake_dj_outputs(x: str, strings: tuple[str, ...]) -> str:
    return "".join(str(inner_product(x, t)) for t in strings)


def fake_dj(x: str, y: str, shared: SharedSetup) -> tuple[str, str]:
    """a_i = x . t_i and b_i = y . t_i; no communication."""
    _validate_pair(x, y)
    k = _dj_k(len(x))
    _check_strings(shared.shared_bits, k, len(x))
    return fake_dj_outputs(x, shared.shared_bits), fake_dj_outputs(y, shared.shared_bits)


def _fake_dj_body(ctx: ProtocolContext, x: str, y: str) -> None:
    _check_strings(ctx.shared.shared_bits, _dj_k(len(x)), len(x))
    ctx.output(ALICE, fake_dj_outputs(x, ctx.shared.shared_bits))
    ctx.output(BOB, fake_dj_outputs(y, ctx.shared.shared_bits))


def _validate_dj_pair(x: str, y: str) -> None:
    _validate_pair(x, y)
    _dj_k(len(x))


def _dj_promise(x: str, y: str) -> bool:
    return hamming_distance(x, y) in (0, len(x) // 2)


FAKE_DJ = Protocol(
    name="fake-dj",
    setup_spec=lambda x, y: SetupSpec(string_count=_dj_k(len(x)), string_length=len(x)),
    body=_fake_dj_body,
    zero_communication=True,
    promise=_dj_promise,
    validate=_validate_dj_pair,
    description="k shared strings t_i; outputs are inner products with x and y",
)


def fake_dj_agreement_rate(x: str, y: str, k: int | None = None) -> EnumerationCount:
    """Tuples (t_1..t_k) giving a = b, over every tuple of length-n strings."""
    _validate_pair(x, y)
    k = _dj_k(len(x)) if k is None else k
    if k < 1:
        raise ArgumentError(f"k must be >= 1, got {k}")
    agree = _parities(x) == _parities(y)
    return EnumerationCount(_count_agreeing_tuples(agree, k), 1 << (len(x) * k))


