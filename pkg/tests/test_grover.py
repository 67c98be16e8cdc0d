# tests/test_grover.py
"""Tests for the distributed search for a common free day."""
from __future__ import annotations

import math

import pytest

from core.errors import ArgumentError
from protocols import grover
from protocols.grover import ScheduleInstance

# day 6 (index 5) is the only day free for both
SINGLE_DAY = ScheduleInstance(8, "10100100", "01000101")


def test_instance_common_days_are_one_based():
    assert SINGLE_DAY.common_days == [6]
    assert SINGLE_DAY.index_qubits == 3


def test_instance_requires_power_of_two():
    with pytest.raises(ArgumentError):
        ScheduleInstance(6, "101010", "010101")


def test_round_and_iteration_caps():
    assert grover.rounds_for(32) == 15
    assert grover.max_iterations(32) == 6
    assert grover.rounds_for(2) == 3


@pytest.mark.parametrize("n,marked,iterations,expected", [(4, 1, 1, 1.0), (8, 0, 2, 0.0), (16, 16, 3, 1.0)])
def test_grover_success_probability(n, marked, iterations, expected):
    assert grover.grover_success_probability(n, marked, iterations) == pytest.approx(expected)


def test_grover_success_probability_rejects_bad_count():
    with pytest.raises(ArgumentError):
        grover.grover_success_probability(8, 9, 1)


def test_round_success_matches_amplitude_formula():
    outcome = grover.distributed_grover_schedule(SINGLE_DAY, seed=3)
    for m, p in zip(outcome.details["iterations"], outcome.details["round_success"]):
        assert p == pytest.approx(grover.grover_success_probability(8, 1, m), abs=1e-9)


def test_single_common_day_is_found():
    found = 0
    for seed in range(20):
        outcome = grover.distributed_grover_schedule(SINGLE_DAY, seed)
        assert outcome.a in (None, 6)
        if outcome.a == 6:
            assert outcome.b == 6
            found += 1
    assert found >= 15


def test_no_common_day_never_invents_one():
    instance = ScheduleInstance(8, "11110000", "00001111")
    for seed in range(5):
        outcome = grover.distributed_grover_schedule(instance, seed)
        assert outcome.a is None and outcome.b is None
        assert outcome.details["rounds"] == grover.rounds_for(8)


def test_communication_accounting():
    outcome = grover.distributed_grover_schedule(SINGLE_DAY, seed=7)
    q = SINGLE_DAY.index_qubits
    iterations = sum(outcome.details["iterations"])
    rounds = outcome.details["rounds"]
    assert outcome.details["qubits_per_oracle_call"] == 2 * (q + 1)
    assert outcome.channel.qubits_sent == 2 * (q + 1) * iterations
    # each verification: index plus x_i from Alice, y_i back from Bob
    assert outcome.channel.classical_bits_sent == rounds * (q + 2)
    assert outcome.details["constant_d"] == pytest.approx(
        outcome.channel.qubits_sent / (math.sqrt(8) * 3)
    )
    assert outcome.transcript.recount() == (
        outcome.channel.classical_bits_sent,
        outcome.channel.qubits_sent,
    )


def test_iterations_stay_within_cap():
    outcome = grover.distributed_grover_schedule(ScheduleInstance(8, "0" * 8, "0" * 8), seed=2)
    assert all(1 <= m <= grover.max_iterations(8) for m in outcome.details["iterations"])


def test_same_seed_same_run():
    a = grover.distributed_grover_schedule(SINGLE_DAY, seed=21)
    b = grover.distributed_grover_schedule(SINGLE_DAY, seed=21)
    assert a.details == b.details
    assert a.transcript.to_jsonl() == b.transcript.to_jsonl()
