# tests/test_chsh.py
"""Tests for the local-polytope membership check."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest

from core.errors import ArgumentError
from protocols import quantum
from search import chsh
from search.chsh import ConvexCombination, CorrelationVector, ViolatedInequality


def test_restricted_correlations_are_exact():
    assert chsh.restricted_epr_correlations() == (
        Fraction(1),
        Fraction(3, 4),
        Fraction(3, 4),
        Fraction(1, 4),
    )


def test_restricted_correlations_come_from_the_protocol_angles():
    exact_angles = chsh._EXACT_ALICE_ANGLES + chsh._EXACT_BOB_ANGLES
    float_angles = chsh.RESTRICTED_ALICE_ANGLES + chsh.RESTRICTED_BOB_ANGLES
    for exact, approx in zip(exact_angles, float_angles):
        assert float(exact) == pytest.approx(approx, abs=1e-15)
    for value, (i, j) in zip(chsh.restricted_epr_correlations(), chsh.PAIRS):
        x, y = chsh.RESTRICTED_ALICE_ANGLES[i], chsh.RESTRICTED_BOB_ANGLES[j]
        assert isinstance(value, Fraction)
        assert float(value) == pytest.approx(math.cos(x - y) ** 2, abs=1e-15)


def test_restricted_correlations_violate_chsh():
    result = chsh.chsh_feasibility(chsh.restricted_epr_correlations())
    assert not result.feasible
    assert result.max_chsh == Fraction(5, 2)
    assert isinstance(result.certificate, ViolatedInequality)
    assert result.certificate.minus_position == 3
    assert "5/2 > 2" in result.certificate.describe()


def test_deterministic_strategies_never_exceed_two():
    values = chsh.deterministic_chsh_values()
    assert len(values) == 16
    assert max(abs(s) for _, s in values) == 2


def test_vertices_are_distinct_points():
    assert len(chsh._vertices()) == 8


@pytest.mark.parametrize(
    "required",
    [
        [1, 1, 1, 1],
        [0, 0, 0, 0],
        ["1/2", "1/2", "1/2", "1/2"],
        [1, 0, 1, 0],
        [Fraction(3, 4), Fraction(3, 4), Fraction(3, 4), Fraction(1, 4)],
    ],
)
def test_local_vectors_get_a_convex_combination(required):
    result = chsh.chsh_feasibility(required)
    assert result.feasible
    assert result.max_chsh <= 2
    assert isinstance(result.certificate, ConvexCombination)
    assert result.certificate.point() == result.required.agreements
    assert sum(w for _, w in result.certificate.terms) == 1


def test_two_by_two_table_input():
    vector = CorrelationVector.of([[1, "3/4"], ["3/4", "1/4"]])
    assert vector.agreements == chsh.restricted_epr_correlations()


def test_bad_vectors_rejected():
    with pytest.raises(ArgumentError):
        CorrelationVector.of([1, 1, 1])
    with pytest.raises(ArgumentError):
        CorrelationVector.of([1, 1, 1, 2])


def test_quantum_protocol_realises_the_non_local_vector():
    required = chsh.restricted_epr_correlations()
    for idx, (i, j) in enumerate(chsh.PAIRS):
        x, y = chsh.RESTRICTED_ALICE_ANGLES[i], chsh.RESTRICTED_BOB_ANGLES[j]
        outcome = quantum.epr_task_quantum(x, y, seed=idx)
        assert outcome.exact["p_equal"] == pytest.approx(float(required[idx]), abs=1e-9)
        assert outcome.exact["p_equal"] == pytest.approx(math.cos(x - y) ** 2, abs=1e-12)


def test_algebraic_maximum_is_non_local():
    result = chsh.chsh_feasibility([1, 1, 1, 0])
    assert not result.feasible
    assert result.max_chsh == 4
