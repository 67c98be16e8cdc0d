# search/chsh.py
"""
Exact membership test for the local polytope of two-input, binary-output
correlations. A required vector of agreement probabilities is local iff
no CHSH variant exceeds 2 in absolute value; local vectors come with an
explicit convex combination of deterministic strategies, non-local ones
with the violated inequality.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import sympy

from core.errors import ArgumentError, ProtocolInvariantError

logger = logging.getLogger(__name__)

CHSH_BOUND = Fraction(2)

RESTRICTED_ALICE_ANGLES = (0.0, math.pi / 6)
RESTRICTED_BOB_ANGLES = (0.0, 5 * math.pi / 6)
_EXACT_ALICE_ANGLES = (sympy.Integer(0), sympy.pi / 6)
_EXACT_BOB_ANGLES = (sympy.Integer(0), 5 * sympy.pi / 6)

# input pairs in vector order
PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class CorrelationVector:
    """P(a = b | x_i, y_j) in the order (1,1), (1,2), (2,1), (2,2)."""

    agreements: tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self) -> None:
        values = tuple(self.agreements)
        if len(values) != 4:
            raise ArgumentError(f"need 4 agreement probabilities, got {len(values)}")
        try:
            exact = tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)
        except (TypeError, ValueError) as exc:
            raise ArgumentError(f"agreement probabilities must be numbers: {exc}") from exc
        if any(not 0 <= v <= 1 for v in exact):
            raise ArgumentError(f"agreement probabilities must lie in [0, 1]: {values}")
        object.__setattr__(self, "agreements", exact)

    @classmethod
    def of(cls, values: Sequence[Fraction | float | int | str] | Sequence[Sequence]) -> CorrelationVector:
        flat = list(values)
        if len(flat) == 2 and all(isinstance(row, (list, tuple)) for row in flat):
            if any(len(row) != 2 for row in flat):
                raise ArgumentError("a 2x2 table needs two entries per row")
            flat = [flat[0][0], flat[0][1], flat[1][0], flat[1][1]]
        return cls(tuple(Fraction(str(v)) if isinstance(v, (str, float)) else Fraction(v) for v in flat))

    @property
    def correlators(self) -> tuple[Fraction, ...]:
        return tuple(2 * p - 1 for p in self.agreements)


def restricted_epr_correlations() -> tuple[Fraction, ...]:
    """cos^2(x - y) at the restricted angles, evaluated symbolically."""
    values = []
    for i, j in PAIRS:
        value = sympy.simplify(sympy.cos(_EXACT_ALICE_ANGLES[i] - _EXACT_BOB_ANGLES[j]) ** 2)
        if not value.is_Rational:
            raise ProtocolInvariantError(f"cos^2 at pair {(i, j)} is not rational: {value}")
        values.append(_to_fraction(value))
    return tuple(values)


def chsh_variants(correlators: Sequence[Fraction]) -> list[Fraction]:
    """Sum of the four correlators with the minus sign on position 0..3."""
    total = sum(correlators, Fraction(0))
    return [total - 2 * correlators[j] for j in range(4)]


def chsh_value(required: CorrelationVector) -> Fraction:
    return max(abs(s) for s in chsh_variants(required.correlators))


# ─────────────────────────────────────────────
# Deterministic strategies
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class DeterministicStrategy:
    alice: tuple[int, int]
    bob: tuple[int, int]

    def agreements(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(self.alice[i] == self.bob[j])) for i, j in PAIRS)

    @property
    def chsh(self) -> Fraction:
        """E11 + E12 + E21 - E22."""
        return chsh_variants([2 * p - 1 for p in self.agreements()])[3]


def deterministic_strategies() -> list[DeterministicStrategy]:
    bits = list(itertools.product((0, 1), repeat=2))
    return [DeterministicStrategy(a, b) for a in bits for b in bits]


def deterministic_chsh_values() -> list[tuple[DeterministicStrategy, Fraction]]:
    return [(s, s.chsh) for s in deterministic_strategies()]


def _vertices() -> list[DeterministicStrategy]:
    seen: dict[tuple[Fraction, ...], DeterministicStrategy] = {}
    for strategy in deterministic_strategies():
        seen.setdefault(strategy.agreements(), strategy)
    return list(seen.values())


# ─────────────────────────────────────────────
# Certificates
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class ViolatedInequality:
    minus_position: int
    value: Fraction
    bound: Fraction = CHSH_BOUND

    def describe(self) -> str:
        terms = [
            f"{'-' if j == self.minus_position else '+'}E{i + 1}{k + 1}"
            for j, (i, k) in enumerate(PAIRS)
        ]
        return f"|{' '.join(terms).lstrip('+')}| = {self.value} > {self.bound}"


@dataclass(frozen=True)
class ConvexCombination:
    terms: tuple[tuple[DeterministicStrategy, Fraction], ...]

    def point(self) -> tuple[Fraction, ...]:
        acc = [Fraction(0)] * 4
        for strategy, weight in self.terms:
            for idx, p in enumerate(strategy.agreements()):
                acc[idx] += weight * p
        return tuple(acc)

    def describe(self) -> str:
        return " + ".join(f"{w}*[a={s.alice},b={s.bob}]" for s, w in self.terms)


@dataclass(frozen=True)
class FeasibilityResult:
    required: CorrelationVector
    feasible: bool
    max_chsh: Fraction
    certificate: ConvexCombination | ViolatedInequality


def _to_fraction(value: sympy.Rational) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _convex_combination(required: CorrelationVector) -> ConvexCombination | None:
    target = sympy.Matrix([sympy.Rational(p.numerator, p.denominator) for p in required.agreements] + [1])
    vertices = _vertices()
    # at most dim + 1 = 5 affinely independent vertices are ever needed
    for size in range(1, 6):
        for subset in itertools.combinations(vertices, size):
            columns = [
                [sympy.Rational(p.numerator, p.denominator) for p in v.agreements()] + [1]
                for v in subset
            ]
            matrix = sympy.Matrix(columns).T
            try:
                solution, params = matrix.gauss_jordan_solve(target)
            except ValueError:
                continue
            if params.shape[0]:
                continue
            weights = [_to_fraction(w) for w in solution]
            if all(w >= 0 for w in weights):
                return ConvexCombination(tuple((v, w) for v, w in zip(subset, weights) if w > 0))
    return None


def chsh_feasibility(required: CorrelationVector | Sequence) -> FeasibilityResult:
    if not isinstance(required, CorrelationVector):
        required = CorrelationVector.of(required)
    variants = chsh_variants(required.correlators)
    value = max(abs(s) for s in variants)

    if value > CHSH_BOUND:
        position = max(range(4), key=lambda j: (abs(variants[j]), -j))
        certificate = ViolatedInequality(position, abs(variants[position]))
        logger.info("correlations %s are non-local: %s", required.agreements, certificate.describe())
        return FeasibilityResult(required, False, value, certificate)

    combination = _convex_combination(required)
    if combination is None or combination.point() != required.agreements:
        raise ProtocolInvariantError(f"no convex combination found for local vector {required.agreements}")
    logger.info("correlations %s are local: %s", required.agreements, combination.describe())
    return FeasibilityResult(required, True, value, combination)
