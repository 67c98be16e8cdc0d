# search/bounded.py
"""
Exact optimum over deterministic protocol trees with at most `budget`
bits of communication. A tree node splits the current rectangle of
inputs along the speaker's side; leaves answer with local maps on what
is left. For a fixed input distribution the optimum over shared-
randomness protocols is the same number, so only deterministic trees
are searched.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Hashable
from dataclasses import dataclass
from fractions import Fraction

from core.config import get_settings
from core.errors import ArgumentError, CapacityError, ProtocolInvariantError
from runtime.transcript import Party
from search.tasks import Evaluation, TaskSpec, cvdnt_task
from search.zero_comm import best_local

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Leaf:
    alice_map: dict[Hashable, Hashable]
    bob_map: dict[Hashable, Hashable]


@dataclass(frozen=True)
class Node:
    speaker: Party
    # speaker inputs that send 0
    zero_set: frozenset
    child0: ProtocolTree
    child1: ProtocolTree


ProtocolTree = Leaf | Node


def tree_depth(tree: ProtocolTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.child0), tree_depth(tree.child1))


def run_tree(tree: ProtocolTree, x: Hashable, y: Hashable) -> tuple[Hashable, Hashable, int]:
    """Outputs (a, b) and the number of bits exchanged on input (x, y)."""
    bits = 0
    node = tree
    while isinstance(node, Node):
        speaker_input = x if node.speaker is Party.ALICE else y
        node = node.child0 if speaker_input in node.zero_set else node.child1
        bits += 1
    return node.alice_map[x], node.bob_map[y], bits


def evaluate_tree(task: TaskSpec, tree: ProtocolTree) -> Evaluation:
    success = Fraction(0)
    worst = Fraction(1)
    for (x, y), w in task.distribution.items():
        a, b, _ = run_tree(tree, x, y)
        if task.relation(x, y, a, b):
            success += w
        else:
            worst = Fraction(0)
    return Evaluation(success, worst)


@dataclass(frozen=True)
class BoundedResult:
    task: str
    budget: int
    tree: ProtocolTree
    success: Fraction
    worst_case: Fraction
    states: int


def _splits(items: tuple[Hashable, ...]):
    """Unordered two-block partitions; the first item always sends 0."""
    first, rest = items[0], items[1:]
    for r in range(len(rest)):
        for chosen in itertools.combinations(rest, r):
            zero = (first,) + chosen
            one = tuple(v for v in rest if v not in chosen)
            yield zero, one


def best_bounded_comm(task: TaskSpec, budget: int) -> BoundedResult:
    if budget < 0:
        raise ArgumentError(f"budget must be >= 0, got {budget}")
    settings = get_settings()
    max_states = settings.search_max_states
    memo: dict[tuple[tuple, tuple, int], tuple[Fraction, ProtocolTree]] = {}
    weights = task.distribution

    def solve(xs: tuple, ys: tuple, depth: int) -> tuple[Fraction, ProtocolTree]:
        key = (xs, ys, depth)
        if key in memo:
            return memo[key]
        if len(memo) >= max_states:
            raise CapacityError(f"{task.name}: rectangle states at budget {budget}", bound=max_states)

        strategy, value = best_local(task, xs, ys, weights)
        best: tuple[Fraction, ProtocolTree] = (value, Leaf(strategy.alice_map, strategy.bob_map))
        if depth > 0:
            for speaker, side in ((Party.ALICE, xs), (Party.BOB, ys)):
                if len(side) < 2:
                    continue
                for zero, one in _splits(side):
                    if speaker is Party.ALICE:
                        v0, t0 = solve(zero, ys, depth - 1)
                        v1, t1 = solve(one, ys, depth - 1)
                    else:
                        v0, t0 = solve(xs, zero, depth - 1)
                        v1, t1 = solve(xs, one, depth - 1)
                    if v0 + v1 > best[0]:
                        best = (v0 + v1, Node(speaker, frozenset(zero), t0, t1))
        memo[key] = best
        return best

    success, tree = solve(task.xs, task.ys, budget)
    check = evaluate_tree(task, tree)
    if check.success != success or tree_depth(tree) > budget:
        raise ProtocolInvariantError(
            f"{task.name}: search claimed {success}, re-evaluation gives {check.success}"
        )
    logger.info("%s: best success %s with %d bits (%d states)", task.name, success, budget, len(memo))
    return BoundedResult(task.name, budget, tree, success, check.worst_case, len(memo))


@dataclass(frozen=True)
class CvdntRow:
    distribution: str
    optimum: Fraction
    matches_seven_ninths: bool


def cvdnt_study(budget: int = 2) -> list[CvdntRow]:
    """Two-bit optimum for the inner-product parity task under each configured distribution."""
    rows = []
    for name in ("uniform-16", "uniform-9"):
        result = best_bounded_comm(cvdnt_task(name), budget)
        rows.append(CvdntRow(name, result.success, result.success == Fraction(7, 9)))
    return rows
