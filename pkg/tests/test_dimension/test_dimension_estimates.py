import math

import numpy as np
import pydantic
import pytest

import fast_lyapunov_spectra
from fast_lyapunov_spectra.testing import brute_force_count_product_tuples


def test_falconer_lower_for_dyadic_families():
    n = np.arange(1, 9)
    dimension_estimate = fast_lyapunov_spectra.falconer_lower([2] * 8, log_eps=-n * math.log(4))

    assert np.isnan(dimension_estimate.values[0])
    np.testing.assert_allclose(dimension_estimate.values[1:], (n[1:] - 1) / (2 * n[1:] - 1))
    assert dimension_estimate.window == 2
    assert dimension_estimate.estimate == pytest.approx(6 / 13)
    assert dimension_estimate.to_dict()["kind"] == "falconer_lower"


def test_falconer_lower_hypotheses():
    with pytest.raises(fast_lyapunov_spectra.HypothesisViolationError, match="m_2 = 1"):
        fast_lyapunov_spectra.falconer_lower([2, 1, 2], [0.5, 0.25, 0.125])
    with pytest.raises(fast_lyapunov_spectra.HypothesisViolationError, match="strictly decreasing"):
        fast_lyapunov_spectra.falconer_lower([2, 2, 2], [0.5, 0.5, 0.125])
    with pytest.raises(ValueError, match="exactly one of 'eps' and 'log_eps'"):
        fast_lyapunov_spectra.falconer_lower([2, 2])


def test_cover_upper():
    n = np.arange(1, 11)
    dimension_estimate = fast_lyapunov_spectra.cover_upper(2**n, log_delta=-n * math.log(4))

    np.testing.assert_allclose(dimension_estimate.values, 0.5)
    assert dimension_estimate.estimate == pytest.approx(0.5)
    np.testing.assert_allclose(dimension_estimate.tail_infimum, 0.5)


def test_cover_upper_needs_shrinking_diameters():
    with pytest.raises(fast_lyapunov_spectra.HypothesisViolationError, match="decrease strictly"):
        fast_lyapunov_spectra.cover_upper([2, 4], [0.25, 0.5])


def test_dimension_formula_for_the_exponential_sequence():
    pair = fast_lyapunov_spectra.exponential_sequence_pair()
    truncated_dimension = fast_lyapunov_spectra.e_set_dimension_formula(pair, gamma=2, horizon=1_000)

    # The quotient is n / (2 (n + 1)) at gamma = 2
    assert truncated_dimension.values[99] == pytest.approx(50 / 101)
    assert truncated_dimension.final_value == pytest.approx(0.5, abs=1e-3)
    assert truncated_dimension.estimate == pytest.approx(751 / 1504)


@pytest.mark.parametrize("gamma", [1.5, 2, 3])
def test_dimension_formula_converges_to_one_over_gamma(gamma: float):
    pair = fast_lyapunov_spectra.exponential_sequence_pair()
    truncated_dimension = fast_lyapunov_spectra.e_set_dimension_formula(pair, gamma=gamma, horizon=10_000)

    assert truncated_dimension.final_value == pytest.approx(1 / gamma, abs=1e-3)


@pytest.mark.parametrize("c", [2, 3])
@pytest.mark.parametrize("gamma", [1.5, 2, 3])
def test_dimension_formula_for_double_exponential_sequences(c: int, gamma: float):
    pair = fast_lyapunov_spectra.d_set_sequence(2, c)
    truncated_dimension = fast_lyapunov_spectra.e_set_dimension_formula(pair, gamma=gamma, horizon=30)

    assert truncated_dimension.final_value == pytest.approx(1 / ((gamma - 1) * c + 1), abs=1e-3)


def test_dimension_formula_rejects_failing_sequences():
    sequence = fast_lyapunov_spectra.load_sequence_generator("const:3")
    pair = fast_lyapunov_spectra.SequencePair(s=sequence, t=sequence)

    with pytest.raises(fast_lyapunov_spectra.HypothesisViolationError, match="fail the hypotheses"):
        fast_lyapunov_spectra.e_set_dimension_formula(pair, gamma=2, horizon=20)


def test_count_product_tuples_small_cases():
    assert fast_lyapunov_spectra.count_product_tuples(n=1, k=0).count == 1

    product_tuple_count = fast_lyapunov_spectra.count_product_tuples(n=1, k=1)
    assert product_tuple_count.count == 2
    assert product_tuple_count.bound == pytest.approx(12 * math.e)
    assert product_tuple_count.within_bound


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_count_product_tuples_matches_enumeration(n: int, k: int):
    product_tuple_count = fast_lyapunov_spectra.count_product_tuples(n=n, k=k)

    assert product_tuple_count.count == brute_force_count_product_tuples(n=n, k=k)
    assert product_tuple_count.within_bound


def test_count_product_tuples_range():
    with pytest.raises(pydantic.ValidationError):
        fast_lyapunov_spectra.count_product_tuples(n=5, k=0)
