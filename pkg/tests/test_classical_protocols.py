# tests/test_classical_protocols.py
"""Tests for the classical protocols and their exact enumerations."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest

from core.errors import ArgumentError, CapacityError
from protocols import classical
from protocols.classical import Confidence, EprInputs, Verdict
from runtime.runner import run, run_with_setup
from runtime.seeds import derive_seed
from runtime.setup import SharedSetup


# ─────────────────────────────────────────────
# Fingerprinting
# ─────────────────────────────────────────────
def test_prime_for_sixteen_bits_at_quarter_error():
    assert classical.smallest_prime_above(Fraction(16) / Fraction(1, 4)) == 67
    assert classical.field_width(67) == 7


@pytest.mark.parametrize("t,expected", [(1, 2), (2, 3), (10, 11), (Fraction(7, 2), 5), (24, 29)])
def test_smallest_prime_above(t, expected):
    assert classical.smallest_prime_above(t) == expected


def test_smallest_prime_above_rejects_small_t():
    with pytest.raises(ArgumentError):
        classical.smallest_prime_above(Fraction(1, 2))


def test_prime_search_cap(monkeypatch):
    from core.config import get_settings

    monkeypatch.setenv("QCOMM_PRIME_SEARCH_CAP", "100")
    get_settings.cache_clear()
    with pytest.raises(CapacityError):
        classical.smallest_prime_above(100)


def test_poly_eval_horner():
    # 1 + 0*w + 1*w^2 at w = 3 over F_7
    assert classical.poly_eval("101", 3, 7) == 10 % 7


def test_field_element_range():
    with pytest.raises(ArgumentError):
        classical.FieldElement(67, 67)
    assert classical.FieldElement(5, 67).encode() == "0000101"


def test_fingerprint_equal_inputs_always_equal():
    for seed in range(20):
        outcome = classical.fingerprint_equality("1011001110001111", "1011001110001111", Fraction(1, 4), seed)
        assert outcome.b.verdict is Verdict.EQUAL
        assert outcome.b.confidence is Confidence.PROBABILISTIC
        assert outcome.channel.classical_bits_sent == 14
        assert outcome.details["p"] == 67


def test_fingerprint_collisions_bounded_by_degree():
    x, y = "1" + "0" * 15, "0" * 15 + "1"
    # difference polynomial has degree 15, so at most 15 roots
    assert classical.fingerprint_collisions(x, y, 67) <= 15
    assert classical.fingerprint_collisions(x, x, 67) == 67


def test_fingerprint_rejects_bad_epsilon():
    with pytest.raises(ArgumentError):
        classical.fingerprint_protocol(Fraction(3, 2))


# ─────────────────────────────────────────────
# Shared-randomness equality
# ─────────────────────────────────────────────
def test_inner_product():
    assert classical.inner_product("1101", "1011") == 0
    assert classical.inner_product("1101", "1001") == 0
    assert classical.inner_product("1100", "1000") == 1


def test_shared_equality_with_chosen_strings():
    shared = SharedSetup.build(strings=("100", "010"))
    same = classical.shared_randomness_equality("110", "110", 2, shared)
    assert same.b.equal
    assert same.channel.classical_bits_sent == 2

    caught = classical.shared_randomness_equality("110", "010", 2, shared)
    assert caught.b.verdict is Verdict.DIFFERENT

    missed = classical.shared_randomness_equality("001", "000", 2, shared)
    assert missed.b.equal


def test_shared_equality_wrong_setup():
    with pytest.raises(ArgumentError):
        classical.shared_randomness_equality("110", "110", 2, SharedSetup.build(strings=("100",)))


@pytest.mark.parametrize("n,m", [(3, 1), (3, 2), (4, 2), (2, 3), (4, 3)])
def test_shared_equality_false_equal_rate_is_exact(n, m):
    strings = [format(v, f"0{n}b") for v in range(1 << n)]
    for x in strings:
        for y in strings:
            rate = classical.shared_equality_false_equal_rate(x, y, m).rate
            assert rate == (1 if x == y else Fraction(1, 2**m))


# ─────────────────────────────────────────────
# Baselines
# ─────────────────────────────────────────────
def test_hamming_weight_protocol():
    outcome = run(classical.HAMMING_WEIGHT, "11000000", "00000011", seed=1)
    assert outcome.b == 0
    assert outcome.channel.classical_bits_sent == 4
    assert run(classical.HAMMING_WEIGHT, "11100000", "00000011", seed=1).b == 1


def test_trivial_equality_sends_everything():
    outcome = run(classical.TRIVIAL_EQUALITY, "10101", "10100", seed=1)
    assert outcome.b.verdict is Verdict.DIFFERENT
    assert outcome.b.confidence is Confidence.EXACT
    assert outcome.channel.classical_bits_sent == 5


# ─────────────────────────────────────────────
# One-bit EPR simulation
# ─────────────────────────────────────────────
def test_epr_inputs_must_be_inside_unit_interval():
    with pytest.raises(ArgumentError):
        EprInputs(0.0, 0.5)
    with pytest.raises(ArgumentError):
        EprInputs(0.5, 1.0)


def test_epr_one_bit_outside_interval_agrees():
    shared = SharedSetup.build(strings=("1",), reals=(0.9,))
    outcome = classical.simulate_epr_one_bit(EprInputs(0.2, 0.3), shared, seed=4)
    assert outcome.a == outcome.b == 1
    assert outcome.details["between"] is False
    assert outcome.channel.classical_bits_sent == 1


def test_epr_one_bit_between_flags_interval():
    shared = SharedSetup.build(strings=("0",), reals=(0.25,))
    outcome = classical.simulate_epr_one_bit(EprInputs(0.2, 0.3), shared, seed=4)
    assert outcome.details["between"] is True
    assert outcome.a == 0


def test_epr_one_bit_needs_its_setup():
    with pytest.raises(ArgumentError):
        run_with_setup(classical.EPR_ONE_BIT, 0.2, 0.3, SharedSetup.build(strings=("0",)))


@pytest.mark.parametrize("x,y", [(0.1, 0.9), (0.5, 0.5), (0.7, 0.2), (0.33, 0.34)])
def test_epr_agreement_integral(x, y):
    assert classical.epr_agreement_integral(x, y) == pytest.approx(
        0.5 + 0.5 * math.cos(2 * (y - x)), abs=1e-9
    )


def test_epr_sampler_matches_cos_squared():
    import numpy as np

    trials = 200_000
    sample = classical.sample_epr_agreement(0.2, 0.8, trials, np.random.default_rng(3))
    target = math.cos(0.6) ** 2
    assert abs(sample.p_equal - target) <= 5 * math.sqrt(target * (1 - target) / trials)
    # Bob's bit stays uniform
    assert abs(sample.b_zeros / trials - 0.5) <= 5 * math.sqrt(0.25 / trials)


def test_epr_one_bit_runs_match_cos_squared_and_sampler():
    import numpy as np

    x, y, runs = 0.2, 0.7, 10_000
    agreements = b_zeros = 0
    for t in range(runs):
        outcome = run(classical.EPR_ONE_BIT, x, y, seed=derive_seed(11, "epr-runs", t))
        assert outcome.channel.classical_bits_sent == 1
        agreements += outcome.a == outcome.b
        b_zeros += outcome.b == 0
    target = math.cos(x - y) ** 2
    p_runs = agreements / runs
    assert abs(p_runs - target) <= 5 * math.sqrt(target * (1 - target) / runs)
    assert abs(b_zeros / runs - 0.5) <= 5 * math.sqrt(0.25 / runs)

    trials = 200_000
    sample = classical.sample_epr_agreement(x, y, trials, np.random.default_rng(5))
    spread = math.sqrt(target * (1 - target) * (1 / runs + 1 / trials))
    assert abs(p_runs - sample.p_equal) <= 5 * spread


def test_flip_weight_valid_on_unit_interval():
    assert classical.flip_weight_diagnostic(1.0).valid


def test_flip_weight_fails_past_quarter_turn():
    diagnostic = classical.flip_weight_diagnostic(math.pi)
    assert not diagnostic.valid
    assert diagnostic.first_violation == pytest.approx(math.pi / 2, abs=1e-3)
    assert diagnostic.min_weight < 0


# ─────────────────────────────────────────────
# Faking the Deutsch-Jozsa relation
# ─────────────────────────────────────────────
def test_fake_dj_outputs_are_inner_products():
    shared = SharedSetup.build(strings=("1100", "0110"))
    a, b = classical.fake_dj("1000", "0100", shared)
    assert a == "10"
    assert b == "11"


@pytest.mark.parametrize("n,k", [(2, 1), (4, 1), (4, 2), (8, 1), (8, 2), (8, 3)])
def test_fake_dj_agreement_rate(n, k):
    x = "0" * n
    far = "1" * (n // 2) + "0" * (n // 2)
    assert classical.fake_dj_agreement_rate(x, x, k).rate == 1
    assert classical.fake_dj_agreement_rate(x, far, k).rate == Fraction(1, 2**k)


def test_fake_dj_agreement_halves_with_each_shared_string():
    x, far = "00000000", "11110000"
    rates = [classical.fake_dj_agreement_rate(x, far, k).rate for k in (1, 2, 3)]
    assert rates == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


def test_fake_dj_runs_without_communication():
    outcome = run(classical.FAKE_DJ, "0101", "0101", seed=8)
    assert outcome.a == outcome.b
    assert len(outcome.a) == 2
    assert outcome.channel.classical_bits_sent == 0
    assert outcome.promise is True


def test_fake_dj_rejects_non_power_of_two():
    with pytest.raises(ArgumentError):
        run(classical.FAKE_DJ, "010", "010", seed=0)
