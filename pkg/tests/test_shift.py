"""Markov shift construction, words, cylinder functions, exact survival."""

import json
import math

import numpy as np
import pytest

from flowescape import (
    InadmissibleWordError,
    NonArithmeticCeilingError,
    NotIrreducibleError,
    NotRowStochasticError,
    WordTooShortError,
    admissible_words,
    birkhoff_sum,
    birkhoff_sum_cyclic,
    build_markov_shift,
    ceiling_from_json,
    ceiling_to_json,
    constant_function,
    cylinder_function,
    cylinder_measure,
    escape_rate_from_survival_slope,
    format_word,
    is_reduced,
    parse_word,
    refine_cylinder_function,
    shift_from_json,
    shift_to_json,
    survival_measure_exact,
    survivor_matrix,
)


# ---------------------------------------------------------------------------
# Construction and the stationary vector
# ---------------------------------------------------------------------------

def test_symmetric_full_shift_stationary(full2):
    np.testing.assert_allclose(full2.stationary, [0.5, 0.5], atol=1e-14)


def test_cycle_shift_stationary(cycle2):
    np.testing.assert_allclose(cycle2.stationary, [0.5, 0.5], atol=1e-14)


def test_biased_shift_stationary(biased2):
    np.testing.assert_allclose(biased2.stationary, [2 / 3, 1 / 3], atol=1e-12)


def test_stationary_residual_tight(biased2, golden_mean, full3):
    for shift in (biased2, golden_mean, full3):
        residual = np.abs(shift.stationary @ shift.transitions - shift.stationary)
        assert residual.max() < 1e-12


def test_rejects_bad_row_sum():
    with pytest.raises(NotRowStochasticError):
        build_markov_shift([[0.5, 0.4], [0.5, 0.5]])


def test_rejects_reducible_matrix():
    with pytest.raises(NotIrreducibleError):
        build_markov_shift([[1.0, 0.0], [0.5, 0.5]])


# ---------------------------------------------------------------------------
# Words and measures
# ---------------------------------------------------------------------------

def test_cylinder_measure_single_letter(full2):
    assert cylinder_measure(full2, (0,)) == 0.5


def test_cylinder_measure_bernoulli_product(full2):
    assert cylinder_measure(full2, (0, 1, 1)) == 0.125


def test_cylinder_measure_biased(biased2):
    assert cylinder_measure(biased2, (0, 1)) == pytest.approx((2 / 3) * 0.1, rel=1e-12)


def test_cylinder_measure_rejects_inadmissible(golden_mean):
    with pytest.raises(InadmissibleWordError):
        cylinder_measure(golden_mean, (1, 1))


def test_is_reduced_full_shift(full2):
    assert is_reduced(full2, (0, 0))


def test_is_reduced_cycle_shift(cycle2):
    assert not is_reduced(cycle2, (0, 1))


def test_is_reduced_golden_mean(golden_mean):
    assert not is_reduced(golden_mean, (1, 0))


def test_admissible_words_counts(golden_mean):
    # Words of length k avoiding "11" are counted by Fibonacci numbers.
    assert len(admissible_words(golden_mean, 1)) == 2
    assert len(admissible_words(golden_mean, 2)) == 3
    assert len(admissible_words(golden_mean, 5)) == 13


def test_parse_and_format_word(full2):
    assert parse_word(full2, "010") == (0, 1, 0)
    assert format_word(full2, (0, 1, 0)) == "010"


def test_parse_word_unknown_symbol(full2):
    with pytest.raises(ValueError):
        parse_word(full2, "0X")


# ---------------------------------------------------------------------------
# Cylinder functions and Birkhoff sums
# ---------------------------------------------------------------------------

def test_cylinder_function_lattice_validation():
    with pytest.raises(NonArithmeticCeilingError):
        cylinder_function(1, {(0,): 1.0, (1,): 1.5}, lattice=1.0)


def test_constant_function_has_lattice(full2):
    psi = constant_function(full2, 2.0)
    assert psi.lattice == 2.0
    assert psi.sup_value == psi.inf_value == 2.0


def test_birkhoff_sum_constant(full2, unit_ceiling):
    assert birkhoff_sum(unit_ceiling, (0, 1, 0, 1, 1, 0), 5) == 5.0


def test_birkhoff_sum_step_ceiling(step_ceiling):
    assert birkhoff_sum(step_ceiling, (0, 1, 1, 0), 3) == 5.0


def test_birkhoff_sum_empty(step_ceiling):
    assert birkhoff_sum(step_ceiling, (0, 1), 0) == 0.0


def test_birkhoff_sum_word_too_short(step_ceiling):
    with pytest.raises(WordTooShortError):
        birkhoff_sum(step_ceiling, (0,), 2)


def test_birkhoff_sum_cyclic_wraps(step_ceiling):
    # Around the cycle 01: values phi(01..) + phi(10..) = 1 + 2.
    assert birkhoff_sum_cyclic(step_ceiling, (0, 1)) == 3.0


def test_refine_cylinder_function(full2, step_ceiling):
    fine = refine_cylinder_function(full2, step_ceiling, 2)
    assert fine.order == 2
    assert fine.value((1, 0)) == 2.0
    assert fine.value((0, 1)) == 1.0
    assert fine.lattice == step_ceiling.lattice


# ---------------------------------------------------------------------------
# Survivor matrices and exact survival
# ---------------------------------------------------------------------------

def test_survivor_matrix_row_zeroed(full2):
    chain = survivor_matrix(full2, (0,))
    np.testing.assert_allclose(chain.matrix, [[0.0, 0.0], [0.5, 0.5]])
    assert chain.hole_rows == (0,)


def test_survivor_matrix_two_letter_hole(full2):
    chain = survivor_matrix(full2, (0, 0))
    assert chain.matrix.shape == (4, 4)
    assert np.all(chain.matrix[chain.states.index((0, 0))] == 0.0)
    # Perron root of the survivor chain is (1+sqrt 5)/4.
    root = max(abs(np.linalg.eigvals(chain.matrix)))
    assert root == pytest.approx((1 + math.sqrt(5)) / 4, abs=1e-12)


def test_survival_single_letter_hole(full2):
    assert survival_measure_exact(full2, (0,), 10) == pytest.approx(2 ** -10, abs=1e-15)


def test_survival_double_letter_hole_fibonacci(full2):
    # Binary strings of length 8 avoiding "00" are F_10 = 55 of 256.
    assert survival_measure_exact(full2, (0, 0), 8) == pytest.approx(55 / 256, abs=1e-15)


def test_survival_at_zero_is_one(full2):
    assert survival_measure_exact(full2, (0, 0), 0) == 1.0


def test_survival_nonincreasing_and_positive(golden_mean):
    values = [survival_measure_exact(golden_mean, (0, 0), n) for n in range(0, 30)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert all(v > 0 for v in values)


def test_escape_rate_slope_matches_radius(full2):
    chain = survivor_matrix(full2, (0, 0))
    radius = max(abs(np.linalg.eigvals(chain.matrix)))
    slope = escape_rate_from_survival_slope(full2, (0, 0))
    assert slope == pytest.approx(-math.log(radius), abs=1e-6)


# ---------------------------------------------------------------------------
# JSON round trips
# ---------------------------------------------------------------------------

def test_shift_json_round_trip(biased2):
    doc = shift_to_json(biased2)
    again = shift_from_json(json.loads(json.dumps(doc)))
    np.testing.assert_allclose(again.transitions, biased2.transitions)
    assert again.labels == biased2.labels


def test_ceiling_json_round_trip(full2, step_ceiling):
    doc = ceiling_to_json(full2, step_ceiling)
    again = ceiling_from_json(full2, json.loads(json.dumps(doc)))
    assert again.order == 1
    assert again.value((1,)) == 2.0
    assert again.lattice == 1.0
