# tests/test_strategy_search.py
"""Tests for task definitions, zero-communication and bounded-communication search."""
from __future__ import annotations

import json
from fractions import Fraction

import pytest

from core.errors import ArgumentError, CapacityError, ConfigError
from runtime.transcript import Party
from search import bounded, tasks, zero_comm
from search.bounded import Leaf, Node
from search.documents import load_task_document


def _xor_task() -> tasks.TaskSpec:
    return tasks.TaskSpec(
        name="xor",
        xs=(0, 1),
        ys=(0, 1),
        alice_outputs=(None,),
        bob_outputs=(0, 1),
        relation=lambda x, y, a, b: b == x ^ y,
    )


# ─────────────────────────────────────────────
# Task definitions
# ─────────────────────────────────────────────
def test_default_distribution_is_uniform_over_promise():
    task = tasks.dj_task(2)
    assert len(task.support) == 12
    assert set(task.distribution.values()) == {Fraction(1, 12)}


def test_weights_are_renormalised_over_promise():
    # distance 2 is off the promise at n = 2
    task = tasks.dj_task(2).with_weights({("00", "00"): Fraction(1, 2), ("00", "11"): Fraction(1, 2)})
    assert task.distribution == {("00", "00"): Fraction(1)}


def test_weights_must_sum_to_one():
    with pytest.raises(ArgumentError):
        _xor_task().with_weights({(0, 0): Fraction(1, 2)})


def test_repeated_elements_rejected():
    with pytest.raises(ArgumentError):
        tasks.TaskSpec("bad", (0, 0), (1,), (0,), (0,), lambda x, y, a, b: True)


def test_evaluate_strategy_counts_pairs():
    strategy = tasks.LocalStrategy({0: None, 1: None}, {0: 0, 1: 1})
    result = tasks.evaluate_strategy(_xor_task(), strategy)
    assert result.success == Fraction(1, 2)
    assert result.worst_case == 0
    assert not result.perfect


def test_partial_strategy_rejected():
    with pytest.raises(ArgumentError):
        tasks.evaluate_strategy(_xor_task(), tasks.LocalStrategy({0: None}, {0: 0, 1: 1}))


def test_unknown_builtin_task():
    with pytest.raises(ConfigError):
        tasks.builtin_task("chess")


# ─────────────────────────────────────────────
# Zero communication
# ─────────────────────────────────────────────
def test_equality_both_without_communication_is_half():
    result = zero_comm.best_zero_comm(tasks.equality_both_task())
    assert result.success == Fraction(1, 2)
    assert result.status == "optimal"
    assert tasks.evaluate_strategy(tasks.equality_both_task(), result.strategy).success == result.success


def test_epr_restricted_game_classical_optimum():
    result = zero_comm.best_zero_comm(tasks.epr_restricted_task())
    assert result.success == Fraction(3, 4)
    assert not result.perfect


@pytest.mark.parametrize("n", [2, 4])
def test_dj_colouring_finds_perfect_strategy(n):
    task = tasks.dj_task(n)
    result = zero_comm.best_zero_comm(task)
    assert result.status == "found"
    assert result.perfect
    assert tasks.evaluate_strategy(task, result.strategy).success == 1


def test_dj_two_bits_uses_parity():
    strategy = zero_comm.best_zero_comm(tasks.dj_task(2)).strategy
    assert strategy.alice_map == {"00": "0", "01": "1", "10": "1", "11": "0"}
    assert strategy.bob_map == strategy.alice_map


def test_dj_colouring_budget_exhaustion_claims_nothing():
    result = zero_comm.dj_coloring_search(tasks.dj_task(4), node_budget=3)
    assert result.status == "budget-exhausted"
    assert result.strategy is None
    assert result.success is None


def test_dj_task_beyond_bound_is_refused_before_enumeration():
    with pytest.raises(CapacityError) as info:
        tasks.dj_task(16)
    assert info.value.bound == 2**20


def test_dj_task_bound_follows_settings(monkeypatch):
    from core.config import get_settings

    monkeypatch.setenv("QCOMM_SEARCH_MAX_STRATEGIES", "100")
    get_settings.cache_clear()
    assert len(tasks.dj_task(2).support) == 12
    with pytest.raises(CapacityError):
        tasks.dj_task(4)


def test_generic_search_refuses_huge_spaces(monkeypatch):
    from core.config import get_settings

    monkeypatch.setenv("QCOMM_SEARCH_MAX_STRATEGIES", "8")
    get_settings.cache_clear()
    with pytest.raises(CapacityError):
        zero_comm.best_local(tasks.cvdnt_task())


# ─────────────────────────────────────────────
# Bounded communication
# ─────────────────────────────────────────────
def test_one_bit_solves_bob_only_equality():
    result = bounded.best_bounded_comm(tasks.equality_task(), 1)
    assert result.success == 1
    assert isinstance(result.tree, Node)
    assert result.tree.speaker is Party.ALICE
    assert bounded.tree_depth(result.tree) == 1


def test_zero_budget_matches_zero_comm_search():
    task = tasks.equality_both_task()
    assert bounded.best_bounded_comm(task, 0).success == zero_comm.best_zero_comm(task).success


def test_run_tree_counts_bits():
    tree = Node(
        Party.ALICE,
        frozenset({0}),
        Leaf({0: None, 1: None}, {0: 1, 1: 0}),
        Leaf({0: None, 1: None}, {0: 0, 1: 1}),
    )
    assert bounded.run_tree(tree, 1, 1) == (None, 1, 1)
    assert bounded.evaluate_tree(tasks.equality_task(), tree).success == 1


@pytest.mark.parametrize("task", [tasks.equality_both_task(), tasks.cvdnt_task("uniform-9"), _xor_task()])
def test_success_never_decreases_with_budget(task):
    values = [bounded.best_bounded_comm(task, b).success for b in range(3)]
    assert values == sorted(values)
    assert all(0 <= v <= 1 for v in values)


def test_negative_budget_rejected():
    with pytest.raises(ArgumentError):
        bounded.best_bounded_comm(_xor_task(), -1)


def test_cvdnt_study_reports_both_distributions():
    rows = bounded.cvdnt_study()
    assert [r.distribution for r in rows] == ["uniform-16", "uniform-9"]
    for row in rows:
        assert 0 < row.optimum <= 1
        assert row.matches_seven_ninths == (row.optimum == Fraction(7, 9))


# ─────────────────────────────────────────────
# Task documents
# ─────────────────────────────────────────────
def test_load_builtin_by_name():
    task = load_task_document("dj", {"n": 2})
    assert task.name == "dj-2"


def test_load_explicit_document():
    document = {
        "name": "xor",
        "X": [0, 1],
        "Y": [0, 1],
        "A": [0],
        "B": [0, 1],
        "relation": [[0, 0, 0, 0], [0, 1, 0, 1], [1, 0, 0, 1], [1, 1, 0, 0]],
    }
    task = load_task_document(json.dumps(document))
    assert zero_comm.best_zero_comm(task).success == Fraction(1, 2)
    assert bounded.best_bounded_comm(task, 1).success == 1


def test_load_document_with_distribution_and_promise():
    document = {
        "relation": [[0, 0, 0, 0], [1, 1, 0, 1]],
        "X": [0, 1], "Y": [0, 1], "A": [0], "B": [0, 1],
        "promise": [[0, 0], [1, 1]],
        "distribution": [[0, 0, "1/4"], [1, 1, "3/4"]],
    }
    task = load_task_document(json.dumps(document))
    assert task.distribution == {(0, 0): Fraction(1, 4), (1, 1): Fraction(3, 4)}
    assert zero_comm.best_zero_comm(task).success == 1


def test_load_document_from_file(tmp_path):
    path = tmp_path / "task.json"
    path.write_text(json.dumps({"relation": "equality"}), encoding="utf-8")
    assert load_task_document(str(path)).name == "equality"


@pytest.mark.parametrize(
    "text,location",
    [
        ("{not json", None),
        (json.dumps({"relation": [[0, 0, 0]], "X": [0], "Y": [0], "A": [0], "B": [0]}), None),
        (json.dumps({"relation": [[0, 0, 0, 0]]}), None),
        (json.dumps({"relation": "dj", "params": {"n": 3}}), "params"),
    ],
)
def test_malformed_documents(text, location):
    with pytest.raises(ConfigError) as info:
        load_task_document(text)
    if location is not None:
        assert info.value.location == location
