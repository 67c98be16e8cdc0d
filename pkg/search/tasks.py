# search/tasks.py
"""
Finite two-party tasks: input sets, output sets, the relation the
outputs must satisfy, an optional promise and an input distribution.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from core.config import get_settings
from core.errors import ArgumentError, CapacityError, ConfigError
from runtime.bits import all_bit_strings, hamming_distance, int_to_bits, is_power_of_two
from search.chsh import restricted_epr_correlations

logger = logging.getLogger(__name__)

Relation = Callable[[Any, Any, Any, Any], bool]
Promise = Callable[[Any, Any], bool]


@dataclass(frozen=True)
class TaskSpec:
    name: str
    xs: tuple[Hashable, ...]
    ys: tuple[Hashable, ...]
    alice_outputs: tuple[Hashable, ...]
    bob_outputs: tuple[Hashable, ...]
    relation: Relation
    promise: Promise | None = None
    weights: Mapping[tuple[Hashable, Hashable], Fraction] | None = None
    # "dj-coloring" switches best_zero_comm to the colouring search
    reduction: str | None = None
    distribution: dict[tuple[Hashable, Hashable], Fraction] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        for label, values in (
            ("X", self.xs),
            ("Y", self.ys),
            ("A", self.alice_outputs),
            ("B", self.bob_outputs),
        ):
            if not values:
                raise ArgumentError(f"{self.name}: {label} must not be empty")
            if len(set(values)) != len(values):
                raise ArgumentError(f"{self.name}: {label} has repeated elements")
        object.__setattr__(self, "distribution", self._build_distribution())

    def _build_distribution(self) -> dict[tuple[Hashable, Hashable], Fraction]:
        if self.weights is None:
            support = [(x, y) for x in self.xs for y in self.ys if self.in_promise(x, y)]
            if not support:
                raise ArgumentError(f"{self.name}: no input pair satisfies the promise")
            return {pair: Fraction(1, len(support)) for pair in support}

        dist: dict[tuple[Hashable, Hashable], Fraction] = {}
        x_set, y_set = set(self.xs), set(self.ys)
        for (x, y), w in self.weights.items():
            w = Fraction(w)
            if x not in x_set or y not in y_set:
                raise ArgumentError(f"{self.name}: weight on unknown pair ({x!r}, {y!r})")
            if w < 0:
                raise ArgumentError(f"{self.name}: negative weight on ({x!r}, {y!r})")
            if w > 0 and self.in_promise(x, y):
                dist[(x, y)] = w
        total = sum(dist.values(), Fraction(0))
        if total == 0:
            raise ArgumentError(f"{self.name}: input distribution has empty support")
        if sum((Fraction(w) for w in self.weights.values()), Fraction(0)) != 1:
            raise ArgumentError(f"{self.name}: weights must sum to 1")
        return {pair: w / total for pair, w in dist.items()}

    def in_promise(self, x: Hashable, y: Hashable) -> bool:
        return self.promise is None or self.promise(x, y)

    @property
    def support(self) -> list[tuple[Hashable, Hashable]]:
        return list(self.distribution)

    def with_weights(self, weights: Mapping[tuple[Hashable, Hashable], Fraction]) -> TaskSpec:
        return TaskSpec(
            name=self.name,
            xs=self.xs,
            ys=self.ys,
            alice_outputs=self.alice_outputs,
            bob_outputs=self.bob_outputs,
            relation=self.relation,
            promise=self.promise,
            weights=dict(weights),
            reduction=self.reduction,
        )


@dataclass(frozen=True)
class LocalStrategy:
    alice_map: dict[Hashable, Hashable]
    bob_map: dict[Hashable, Hashable]

    def check_total(self, task: TaskSpec) -> None:
        if set(self.alice_map) != set(task.xs) or set(self.bob_map) != set(task.ys):
            raise ArgumentError("strategy maps must be total on X and Y")


@dataclass(frozen=True)
class Evaluation:
    success: Fraction
    worst_case: Fraction

    @property
    def perfect(self) -> bool:
        return self.success == 1


def evaluate_strategy(task: TaskSpec, strategy: LocalStrategy) -> Evaluation:
    """Distributional and worst-case success, recomputed pair by pair."""
    strategy.check_total(task)
    success = Fraction(0)
    worst = Fraction(1)
    for (x, y), w in task.distribution.items():
        ok = task.relation(x, y, strategy.alice_map[x], strategy.bob_map[y])
        if ok:
            success += w
        else:
            worst = Fraction(0)
    return Evaluation(success, worst)


# ─────────────────────────────────────────────
# Built-in tasks
# ─────────────────────────────────────────────
def dj_task(n: int) -> TaskSpec:
    if not is_power_of_two(n) or n < 2:
        raise ArgumentError(f"n must be a power of two >= 2, got {n}")
    bound = get_settings().search_max_strategies
    if 1 << (2 * n) > bound:
        raise CapacityError(f"dj-{n}: 2^{2 * n} input pairs", bound=bound)
    k = n.bit_length() - 1

    def relation(x: str, y: str, a: str, b: str) -> bool:
        delta = hamming_distance(x, y)
        if delta == 0:
            return a == b
        if 2 * delta == n:
            return a != b
        return True

    strings = tuple(all_bit_strings(n))
    return TaskSpec(
        name=f"dj-{n}",
        xs=strings,
        ys=strings,
        alice_outputs=tuple(all_bit_strings(k)),
        bob_outputs=tuple(all_bit_strings(k)),
        relation=relation,
        promise=lambda x, y: hamming_distance(x, y) in (0, n // 2),
        reduction="dj-coloring",
    )


def _inner_parity(x: str, y: str) -> int:
    return sum(int(a) * int(b) for a, b in zip(x, y)) % 2


def cvdnt_task(distribution: str = "uniform-16") -> TaskSpec:
    """Both parties output the parity of x1*y1 + x2*y2."""
    pairs = tuple(int_to_bits(v, 2) for v in range(4))
    if distribution == "uniform-16":
        weights = None
    elif distribution == "uniform-9":
        nonzero = [p for p in pairs if p != "00"]
        weights = {(x, y): Fraction(1, 9) for x in nonzero for y in nonzero}
    else:
        raise ArgumentError(f"unknown distribution {distribution!r}")
    return TaskSpec(
        name=f"cvdnt[{distribution}]",
        xs=pairs,
        ys=pairs,
        alice_outputs=(0, 1),
        bob_outputs=(0, 1),
        relation=lambda x, y, a, b: a == b == _inner_parity(x, y),
        weights=weights,
    )


def equality_task() -> TaskSpec:
    """One-bit equality; only Bob has to answer."""
    return TaskSpec(
        name="equality",
        xs=(0, 1),
        ys=(0, 1),
        alice_outputs=(None,),
        bob_outputs=(0, 1),
        relation=lambda x, y, a, b: b == int(x == y),
    )


def equality_both_task() -> TaskSpec:
    return TaskSpec(
        name="equality-both",
        xs=(0, 1),
        ys=(0, 1),
        alice_outputs=(0, 1),
        bob_outputs=(0, 1),
        relation=lambda x, y, a, b: a == b == int(x == y),
    )


def epr_restricted_task(required: Sequence[Fraction] | None = None) -> TaskSpec:
    """
    Zero-communication game form of the restricted EPR task: on input
    pair (i, j) the outputs must agree iff the required agreement
    probability for (i, j) exceeds 1/2. Success of a deterministic
    strategy counts matching pairs under the uniform distribution.
    """
    vector = restricted_epr_correlations() if required is None else tuple(Fraction(p) for p in required)
    table = {(i, j): vector[2 * i + j] for i in range(2) for j in range(2)}
    return TaskSpec(
        name="epr-restricted",
        xs=(0, 1),
        ys=(0, 1),
        alice_outputs=(0, 1),
        bob_outputs=(0, 1),
        relation=lambda x, y, a, b: (a == b) == (table[(x, y)] > Fraction(1, 2)),
    )


BUILTIN_TASKS: dict[str, Callable[..., TaskSpec]] = {
    "dj": dj_task,
    "cvdnt": cvdnt_task,
    "equality": equality_task,
    "equality-both": equality_both_task,
    "epr-restricted": epr_restricted_task,
}


def builtin_task(name: str, **params: Any) -> TaskSpec:
    try:
        factory = BUILTIN_TASKS[name]
    except KeyError:
        raise ConfigError(
            f"unknown built-in task {name!r} (known: {', '.join(sorted(BUILTIN_TASKS))})",
            location="relation",
        ) from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigError(str(exc), location="params") from exc
