import math

import numpy as np
import pytest

import fast_lyapunov_spectra
from fast_lyapunov_spectra.testing import find_random_rational_seeds


def test_trace_sums():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    exponent_trace = fast_lyapunov_spectra.trace(gauss, "5/13", depth=3)

    expected_log_deriv_sum = np.cumsum([math.log(169 / 25), math.log(25 / 9), math.log(9 / 4)])
    np.testing.assert_allclose(exponent_trace.log_deriv_sum, expected_log_deriv_sum, rtol=1e-12)
    np.testing.assert_allclose(exponent_trace.digit_log_sum, [math.log(2)] * 3, rtol=1e-12)
    np.testing.assert_allclose(exponent_trace.lyapunov_partials, expected_log_deriv_sum / [1, 2, 3], rtol=1e-12)


def test_trace_from_word_follows_the_word():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=(2, 3))

    assert fast_lyapunov_spectra.trace_from_word(gauss, word).word == word


@pytest.mark.parametrize("map_name", ["gauss", "renyi"])
def test_chain_rule_bound_on_random_seeds(map_name: str):
    map_spec = fast_lyapunov_spectra.load_map(map_name)
    seeds = find_random_rational_seeds(map_spec, count=100, depth=30, seed=0)

    for seed_point in seeds:
        exponent_trace = fast_lyapunov_spectra.trace(map_spec, seed_point, depth=30)
        violations = fast_lyapunov_spectra.chain_rule_violations(
            exponent_trace, map_spec.gamma, map_spec.distortion_constant
        )

        assert violations == [], f"Seed {seed_point} breaks the chain-rule bound at prefixes {violations}!"


def test_chain_rule_gap_of_a_single_digit():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    exponent_trace = fast_lyapunov_spectra.trace(gauss, "2/3", depth=1)

    gaps = fast_lyapunov_spectra.chain_rule_gap(exponent_trace, gauss.gamma)

    np.testing.assert_allclose(gaps, [math.log(9 / 4)], rtol=1e-12)
    assert gaps[0] <= math.log(gauss.distortion_constant)
    assert fast_lyapunov_spectra.chain_rule_violations(exponent_trace, gauss.gamma, gauss.distortion_constant) == []


def test_chain_rule_gap_of_an_empty_trace():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    exponent_trace = fast_lyapunov_spectra.trace(gauss, "2/3", depth=0)

    assert len(fast_lyapunov_spectra.chain_rule_gap(exponent_trace, gauss.gamma)) == 0


def test_chain_rule_violations_with_a_wrong_gamma():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=(100,) * 5)
    exponent_trace = fast_lyapunov_spectra.trace_from_word(gauss, word)

    assert fast_lyapunov_spectra.chain_rule_violations(exponent_trace, 1, gauss.distortion_constant) == [1, 2, 3, 4, 5]


def test_fast_exponent_partials():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=tuple(range(1, 9)))
    exponent_trace = fast_lyapunov_spectra.trace_from_word(gauss, word)
    psi = fast_lyapunov_spectra.load_scaling_function("power:2")

    partials = fast_lyapunov_spectra.fast_exponent_partials(exponent_trace, psi)

    np.testing.assert_allclose(partials.values, exponent_trace.log_deriv_sum / np.arange(1, 9) ** 2, rtol=1e-12)
    assert partials.upper_estimate == partials.lower_estimate == pytest.approx(partials.values[-1])
    assert partials.tail_sup[0] == pytest.approx(partials.values.max())

    windowed_partials = fast_lyapunov_spectra.fast_exponent_partials(exponent_trace, psi, window=3)
    assert np.isnan(windowed_partials.tail_sup[:5]).all()
    assert windowed_partials.tail_sup[5] == pytest.approx(partials.values[5:].max())

    frame = exponent_trace.to_frame(psi=psi)
    assert list(frame.columns) == ["n", "log_deriv_sum", "digit_log_sum", "lyapunov_partial", "fast_partial"]


def test_digit_statistics():
    statistics = fast_lyapunov_spectra.digit_statistics(fast_lyapunov_spectra.DigitWord(digits=(2, 2, 2, 2)))

    np.testing.assert_allclose(statistics.kappa_partial, [math.log(2)] * 4)
    np.testing.assert_allclose(statistics.tau_partial, [2, 1.5, 4 / 3])
    assert statistics.window == 1
    assert statistics.kappa_estimate == pytest.approx(math.log(2))
    assert statistics.tau_estimate == pytest.approx(4 / 3)
    assert statistics.tau_running == pytest.approx(2)


def test_digit_statistics_with_leading_ones():
    statistics = fast_lyapunov_spectra.digit_statistics(fast_lyapunov_spectra.DigitWord(digits=(1, 1, 2)))

    assert statistics.undefined_tau_prefixes == [1, 2]
    assert math.isnan(statistics.tau_estimate)


def test_digit_statistics_short_word():
    with pytest.raises(ValueError, match="length at least 2"):
        fast_lyapunov_spectra.digit_statistics(fast_lyapunov_spectra.DigitWord(digits=(3,)))
