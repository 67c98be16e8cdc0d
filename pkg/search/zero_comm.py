# search/zero_comm.py
"""
Best zero-communication strategy for a finite task.

The generic search enumerates every Alice map and, for each, picks
Bob's best answer independently per y. Deutsch-Jozsa tasks are reduced
to colouring: x = y forces both maps to coincide, so a perfect strategy
is a colouring of {0,1}^n with 2^k colours in which strings at distance
n/2 get different colours.
"""
from __future__ import annotations

import itertools
import logging
import time
from collections.abc import Hashable
from dataclasses import dataclass
from fractions import Fraction

from core.config import get_settings
from core.errors import CapacityError, ProtocolInvariantError
from runtime.bits import int_to_bits
from search.tasks import Evaluation, LocalStrategy, TaskSpec, evaluate_strategy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZeroCommResult:
    task: str
    strategy: LocalStrategy | None
    success: Fraction | None
    worst_case: Fraction | None
    perfect: bool
    # "optimal", "found", "no-perfect-strategy" or "budget-exhausted"
    status: str
    explored: int


def _best_bob_map(
    task: TaskSpec,
    weights: dict[tuple[Hashable, Hashable], Fraction],
    alice_map: dict[Hashable, Hashable],
    ys: tuple[Hashable, ...],
) -> tuple[dict[Hashable, Hashable], Fraction]:
    bob_map: dict[Hashable, Hashable] = {}
    total = Fraction(0)
    by_y: dict[Hashable, list[tuple[Hashable, Fraction]]] = {y: [] for y in ys}
    for (x, y), w in weights.items():
        if x in alice_map and y in by_y:
            by_y[y].append((x, w))
    for y in ys:
        best_b, best_value = task.bob_outputs[0], Fraction(-1)
        for b in task.bob_outputs:
            value = sum(
                (w for x, w in by_y[y] if task.relation(x, y, alice_map[x], b)),
                Fraction(0),
            )
            if value > best_value:
                best_b, best_value = b, value
        bob_map[y] = best_b
        total += best_value
    return bob_map, total


def best_local(
    task: TaskSpec,
    xs: tuple[Hashable, ...] | None = None,
    ys: tuple[Hashable, ...] | None = None,
    weights: dict[tuple[Hashable, Hashable], Fraction] | None = None,
) -> tuple[LocalStrategy, Fraction]:
    """
    Optimal local maps on the rectangle xs * ys, maximising the
    (unnormalised) weight of pairs where the relation holds. Ties go to
    the lexicographically first Alice map in output order.
    """
    xs = task.xs if xs is None else xs
    ys = task.ys if ys is None else ys
    if weights is None:
        weights = task.distribution
    x_set, y_set = set(xs), set(ys)
    local = {(x, y): w for (x, y), w in weights.items() if x in x_set and y in y_set}
    bound = get_settings().search_max_strategies
    space = len(task.alice_outputs) ** len(xs)
    if space > bound:
        raise CapacityError(
            f"{task.name}: {len(task.alice_outputs)}^{len(xs)} Alice maps", bound=bound
        )

    best: tuple[LocalStrategy, Fraction] | None = None
    for outputs in itertools.product(task.alice_outputs, repeat=len(xs)):
        alice_map = dict(zip(xs, outputs))
        bob_map, value = _best_bob_map(task, local, alice_map, ys)
        if best is None or value > best[1]:
            best = (LocalStrategy(alice_map, bob_map), value)
    return best


def best_zero_comm(task: TaskSpec) -> ZeroCommResult:
    if task.reduction == "dj-coloring":
        return dj_coloring_search(task)
    strategy, success = best_local(task)
    check: Evaluation = evaluate_strategy(task, strategy)
    if check.success != success:
        raise ProtocolInvariantError(f"search claimed {success}, re-evaluation gives {check.success}")
    logger.info("%s: best zero-communication success %s", task.name, success)
    return ZeroCommResult(
        task=task.name,
        strategy=strategy,
        success=success,
        worst_case=check.worst_case,
        perfect=success == 1,
        status="optimal",
        explored=len(task.alice_outputs) ** len(task.xs),
    )


# ─────────────────────────────────────────────
# Deutsch-Jozsa colouring
# ─────────────────────────────────────────────
def _dj_graph(n: int) -> list[list[int]]:
    half = n // 2
    masks = [m for m in range(1 << n) if bin(m).count("1") == half]
    return [[v ^ m for m in masks] for v in range(1 << n)]


def dj_coloring_search(
    task: TaskSpec,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> ZeroCommResult:
    """Backtracking colouring; colours are capped at one above the largest used so far."""
    settings = get_settings()
    node_budget = settings.dj_search_node_budget if node_budget is None else node_budget
    time_budget = settings.dj_search_time_budget if time_budget is None else time_budget

    n = len(task.xs[0])
    k = n.bit_length() - 1
    colors = 1 << k
    neighbours = _dj_graph(n)
    assignment = [-1] * (1 << n)
    deadline = time.monotonic() + time_budget
    nodes = 0
    status = "no-perfect-strategy"

    def place(v: int, used: int) -> bool:
        nonlocal nodes, status
        if v == len(assignment):
            return True
        nodes += 1
        if nodes > node_budget or (nodes & 0x3FF == 0 and time.monotonic() > deadline):
            status = "budget-exhausted"
            return False
        taken = {assignment[u] for u in neighbours[v] if assignment[u] >= 0}
        for c in range(min(colors, used + 1)):
            if c in taken:
                continue
            assignment[v] = c
            if place(v + 1, max(used, c + 1)):
                return True
            if status == "budget-exhausted":
                break
        assignment[v] = -1
        return False

    found = place(0, 0)
    if not found:
        logger.warning("%s: colouring search ended with %s after %d nodes", task.name, status, nodes)
        return ZeroCommResult(task.name, None, None, None, False, status, nodes)

    mapping = {int_to_bits(v, n): int_to_bits(c, k) for v, c in enumerate(assignment)}
    strategy = LocalStrategy(
        alice_map={x: mapping[x] for x in task.xs},
        bob_map={y: mapping[y] for y in task.ys},
    )
    check = evaluate_strategy(task, strategy)
    if not check.perfect:
        raise ProtocolInvariantError(f"{task.name}: colouring does not satisfy the relation")
    logger.info("%s: perfect colouring found after %d nodes", task.name, nodes)
    return ZeroCommResult(task.name, strategy, check.success, check.worst_case, True, "found", nodes)

