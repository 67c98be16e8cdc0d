# tests/test_quantum_protocols.py
"""Tests for the entanglement-assisted and qubit-communication protocols."""
from __future__ import annotations

import math

import numpy as np
import pytest

from core.errors import ArgumentError
from protocols import quantum
from protocols.classical import Confidence
from protocols.quantum import DjInstance


# ─────────────────────────────────────────────
# EPR task
# ─────────────────────────────────────────────
@pytest.mark.parametrize("x", [0.0, math.pi / 5, math.pi / 2, math.pi])
@pytest.mark.parametrize("y", [0.0, math.pi / 3, 3 * math.pi / 4])
def test_epr_quantum_exact_correlation(x, y):
    outcome = quantum.epr_task_quantum(x, y, seed=11)
    assert outcome.exact["p_equal"] == pytest.approx(math.cos(x - y) ** 2, abs=1e-9)
    assert outcome.exact["p_a0"] == pytest.approx(0.5, abs=1e-12)
    assert outcome.exact["p_b0"] == pytest.approx(0.5, abs=1e-12)
    assert outcome.channel.classical_bits_sent == 0
    assert outcome.channel.qubits_sent == 0
    assert outcome.channel.ebits == 1


def test_epr_quantum_aligned_angles_always_agree():
    for seed in range(10):
        outcome = quantum.epr_task_quantum(0.4, 0.4, seed)
        assert outcome.a == outcome.b


def test_epr_quantum_orthogonal_angles_always_disagree():
    for seed in range(10):
        outcome = quantum.epr_task_quantum(0.0, math.pi / 2, seed)
        assert outcome.a != outcome.b


def test_epr_quantum_rejects_out_of_range_angle():
    with pytest.raises(ArgumentError):
        quantum.epr_task_quantum(4.0, 0.0, seed=0)


# ─────────────────────────────────────────────
# Deutsch-Jozsa pseudo-telepathy
# ─────────────────────────────────────────────
def test_dj_instance_validation():
    with pytest.raises(ArgumentError):
        DjInstance.from_pair("011", "011")
    instance = DjInstance.from_pair("0011", "0101")
    assert (instance.k, instance.n, instance.delta, instance.promise) == (2, 4, 2, True)


def test_dj_relation():
    assert quantum.dj_relation("00", "00", "1", "1")
    assert not quantum.dj_relation("00", "01", "1", "1")
    assert quantum.dj_relation("0000", "0001", "1", "1")


def test_forbidden_mass_reads_the_right_cells():
    joint = np.array([[0.5, 0.0], [0.1, 0.4]])
    assert quantum.forbidden_mass(joint, DjInstance(1, "00", "00")) == pytest.approx(0.1)
    assert quantum.forbidden_mass(joint, DjInstance(1, "00", "01")) == pytest.approx(0.9)


def test_dj_pseudo_telepathy_k2_exhaustive(dj_promise_pairs_k2):
    assert len(dj_promise_pairs_k2) == 112
    for i, (x, y) in enumerate(dj_promise_pairs_k2):
        outcome = quantum.dj_pseudo_telepathy(DjInstance(2, x, y), seed=i)
        assert outcome.details["forbidden_mass"] < 1e-12
        assert quantum.dj_relation(x, y, outcome.a, outcome.b)
        assert outcome.channel.classical_bits_sent == outcome.channel.qubits_sent == 0
        assert outcome.channel.ebits == 2


def test_dj_pseudo_telepathy_off_promise_has_no_exact_claim():
    outcome = quantum.dj_pseudo_telepathy(DjInstance(2, "0000", "0001"), seed=1)
    assert outcome.promise is False
    assert "p_relation" not in outcome.exact


def test_dj_pseudo_telepathy_k3_sampled():
    rng = np.random.default_rng(5)
    for i in range(40):
        x = "".join(rng.choice(["0", "1"], size=8))
        if i % 2:
            flips = set(rng.choice(8, size=4, replace=False).tolist())
            y = "".join(("1" if b == "0" else "0") if j in flips else b for j, b in enumerate(x))
        else:
            y = x
        outcome = quantum.dj_pseudo_telepathy(DjInstance(3, x, y), seed=i)
        assert outcome.exact["p_relation"] == pytest.approx(1.0, abs=1e-12)


# ─────────────────────────────────────────────
# Deutsch-Jozsa with qubit communication
# ─────────────────────────────────────────────
def test_dj_qubit_protocol_exact_on_promise(dj_promise_pairs_k2):
    for i, (x, y) in enumerate(dj_promise_pairs_k2):
        outcome = quantum.dj_qubit_protocol(DjInstance(2, x, y), seed=i)
        assert outcome.exact["p_correct"] == pytest.approx(1.0, abs=1e-12)
        assert outcome.b.equal == (x == y)
        assert outcome.b.confidence is Confidence.EXACT
        assert outcome.channel.qubits_sent == 2
        assert outcome.channel.classical_bits_sent == 0


def test_dj_qubit_protocol_off_promise_reports_verdict_probability():
    outcome = quantum.dj_qubit_protocol(DjInstance(2, "0000", "0001"), seed=0)
    # one sign flip out of four: amplitude on 0^k is 1/2
    assert outcome.exact["p_equal_verdict"] == pytest.approx(0.25)
    assert "p_correct" not in outcome.exact


# ─────────────────────────────────────────────
# Shared randomness from ebits
# ─────────────────────────────────────────────
def test_entangled_coins_are_identical():
    seen = set()
    for seed in range(16):
        outcome = quantum.entangled_shared_randomness(3, seed)
        assert outcome.a == outcome.b
        assert len(outcome.a) == 3
        assert outcome.exact["p_equal"] == pytest.approx(1.0)
        seen.add(outcome.a)
    assert len(seen) > 1


def test_entangled_coins_need_an_ebit():
    with pytest.raises(ArgumentError):
        quantum.entangled_coins_protocol(0)
