# tests/test_quantum_state.py
"""Tests for the state-vector simulator."""
from __future__ import annotations

import math

import numpy as np
import pytest

from core.errors import ArgumentError, CapacityError
from quantum.state import (
    OutcomeDistribution,
    SignVector,
    StateVector,
    apply_hadamard,
    apply_phase_oracle,
    apply_rotation,
    apply_x_conditioned,
    basis_state,
    measure_all,
    measure_qubits,
    new_entangled_pairs,
    outcome_distribution,
    register_distribution,
    tensor,
)

R = 1 / math.sqrt(2)


def test_entangled_pair_amplitudes():
    state = new_entangled_pairs(1)
    assert np.allclose(state.amplitudes, [R, 0, 0, R])


def test_two_entangled_pairs_pair_qubit_i_with_k_plus_i():
    dist = outcome_distribution(new_entangled_pairs(2))
    nonzero = {format(i, "04b") for i, p in enumerate(dist.probabilities) if p > 0}
    assert nonzero == {"0000", "0101", "1010", "1111"}


def test_qubit_zero_is_most_significant(rng):
    assert measure_all(basis_state(3, 0b100), rng) == "100"


def test_hadamard_is_self_inverse():
    state = apply_hadamard(basis_state(2, 1), [0, 1])
    assert np.allclose(np.abs(state.amplitudes), 0.5)
    assert apply_hadamard(state, [1, 0]).allclose(basis_state(2, 1))


def test_phase_oracle_signs_follow_register_value():
    state = apply_hadamard(basis_state(2), [0, 1])
    out = apply_phase_oracle(state, [0, 1], SignVector.from_bits("0110"))
    assert np.allclose(out.amplitudes, [0.5, -0.5, -0.5, 0.5])


def test_phase_oracle_on_reversed_register():
    state = apply_hadamard(basis_state(2), [0, 1])
    out = apply_phase_oracle(state, [1, 0], SignVector.from_bits("0100"))
    # register [1, 0] reads 1 on basis index 0b10
    assert np.allclose(out.amplitudes, [0.5, 0.5, -0.5, 0.5])


def test_phase_oracle_length_mismatch():
    with pytest.raises(ArgumentError):
        apply_phase_oracle(basis_state(2), [0, 1], SignVector.from_bits("01"))


def test_rotation_by_angle():
    state = apply_rotation(basis_state(1), 0, math.pi / 3)
    assert np.allclose(state.amplitudes, [math.cos(math.pi / 3), -math.sin(math.pi / 3)])


def test_rotation_rejects_nan():
    with pytest.raises(ArgumentError):
        apply_rotation(basis_state(1), 0, float("nan"))


def test_x_conditioned_flips_target_on_table():
    state = basis_state(2, 0b10)
    flipped = apply_x_conditioned(state, [0], 1, "01")
    assert flipped.allclose(basis_state(2, 0b11))
    untouched = apply_x_conditioned(basis_state(2, 0b00), [0], 1, "01")
    assert untouched.allclose(basis_state(2, 0b00))


def test_x_conditioned_target_inside_register():
    with pytest.raises(ArgumentError):
        apply_x_conditioned(basis_state(2), [0, 1], 1, "0101")


def test_measure_qubits_collapses_partner(rng):
    state = new_entangled_pairs(1)
    bits, collapsed = measure_qubits(state, [0], rng)
    other, _ = measure_qubits(collapsed, [1], rng)
    assert bits == other


def test_register_distribution_marginal():
    state = apply_hadamard(basis_state(3), [2])
    marginal = register_distribution(outcome_distribution(state), [2])
    assert np.allclose(marginal, [0.5, 0.5])


def test_tensor_appends_low_order_qubits():
    state = tensor(basis_state(1, 1), 2)
    assert state.num_qubits == 3
    assert state.allclose(basis_state(3, 0b100))


def test_unnormalised_state_rejected():
    with pytest.raises(ArgumentError):
        StateVector(1, np.array([1.0, 1.0]))


def test_probability_lookup_checks_length():
    dist = OutcomeDistribution(1, np.array([0.25, 0.75]))
    assert dist.probability("1") == pytest.approx(0.75)
    with pytest.raises(ArgumentError):
        dist.probability("10")


def test_capacity_cap():
    with pytest.raises(CapacityError):
        new_entangled_pairs(9)


def test_capacity_cap_follows_settings(monkeypatch):
    from core.config import get_settings

    monkeypatch.setenv("QCOMM_MAX_QUBITS", "12")
    get_settings.cache_clear()
    with pytest.raises(CapacityError):
        basis_state(13)


# ─────────────────────────────────────────────
# Sampling and properties
# ─────────────────────────────────────────────
def _random_state(rng: np.random.Generator, num_qubits: int) -> StateVector:
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector(num_qubits, amps / np.linalg.norm(amps))


def test_measure_all_on_entangled_pair_frequencies(rng):
    state = new_entangled_pairs(1)
    trials = 100_000
    counts = {"00": 0, "01": 0, "10": 0, "11": 0}
    for _ in range(trials):
        counts[measure_all(state, rng)] += 1
    exact = outcome_distribution(state)
    assert abs(counts["00"] / trials - 0.5) < 0.01
    for bits, hits in counts.items():
        p = exact.probability(bits)
        spread = math.sqrt(p * (1 - p) / trials)
        assert abs(hits / trials - p) <= 5 * spread
    assert counts["01"] == counts["10"] == 0


def test_same_seed_same_measurements():
    state = apply_hadamard(basis_state(3), [0, 1, 2])
    first, second = np.random.default_rng(77), np.random.default_rng(77)
    assert [measure_all(state, first) for _ in range(20)] == [measure_all(state, second) for _ in range(20)]
    bits_a, collapsed_a = measure_qubits(state, [1], np.random.default_rng(5))
    bits_b, collapsed_b = measure_qubits(state, [1], np.random.default_rng(5))
    assert bits_a == bits_b
    assert collapsed_a.allclose(collapsed_b)


def test_rotation_quarter_turn_sends_zero_to_minus_one():
    state = apply_rotation(basis_state(1), 0, math.pi / 2)
    assert state.allclose(StateVector(1, np.array([0.0, -1.0])), atol=1e-12)


@pytest.mark.parametrize("alpha,beta", [(0.3, 1.1), (-0.7, 2.5), (math.pi / 6, 5 * math.pi / 6)])
def test_rotations_compose_additively(rng, alpha, beta):
    state = _random_state(rng, 2)
    stepwise = apply_rotation(apply_rotation(state, 1, alpha), 1, beta)
    assert stepwise.allclose(apply_rotation(state, 1, alpha + beta), atol=1e-12)


def test_gates_preserve_norm(rng):
    for _ in range(20):
        state = _random_state(rng, 3)
        signs = SignVector(rng.choice([-1, 1], size=4))
        for out in (
            apply_hadamard(state, [0, 2]),
            apply_rotation(state, 1, float(rng.uniform(0, math.pi))),
            apply_phase_oracle(state, [2, 0], signs),
            apply_x_conditioned(state, [0, 1], 2, "0110"),
        ):
            assert out.norm() == pytest.approx(1.0, abs=1e-12)


def test_phase_oracle_only_changes_signs(rng):
    for _ in range(20):
        state = _random_state(rng, 3)
        signs = SignVector(rng.choice([-1, 1], size=8))
        out = apply_phase_oracle(state, [0, 1, 2], signs)
        assert np.allclose(np.abs(out.amplitudes), np.abs(state.amplitudes), rtol=0.0, atol=1e-12)


def test_hadamard_involution_on_random_states(rng):
    for _ in range(20):
        state = _random_state(rng, 3)
        twice = apply_hadamard(apply_hadamard(state, [0, 1, 2]), [0, 1, 2])
        assert twice.allclose(state, atol=1e-12)
