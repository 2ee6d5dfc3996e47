import math
from fractions import Fraction

import pytest

import fast_lyapunov_spectra


def test_e_set_digits_for_the_exponential_sequence():
    pair = fast_lyapunov_spectra.exponential_sequence_pair()
    digit_word = fast_lyapunov_spectra.e_set_digits(pair, depth=5)

    assert digit_word.digits == (3, 8, 21, 55, 149)


def test_e_set_digits_for_powers_of_two():
    pair = fast_lyapunov_spectra.exponential_sequence_pair(base=2)

    assert fast_lyapunov_spectra.e_set_digits(pair, depth=4).digits == (3, 5, 9, 17)
    assert fast_lyapunov_spectra.e_set_digits(pair, depth=4, rule="midpoint").digits == (3, 6, 12, 24)
    assert fast_lyapunov_spectra.digit_window(pair, 3) == (9, 16)


def test_e_set_digits_stay_in_their_windows():
    sequence = fast_lyapunov_spectra.load_sequence_generator("exp:3/2")
    pair = fast_lyapunov_spectra.SequencePair(s=sequence, t=sequence)
    digit_word = fast_lyapunov_spectra.e_set_digits(pair, depth=30, rule="midpoint")

    for n, digit in enumerate(digit_word, start=1):
        s_n = Fraction(3, 2) ** n
        assert s_n < digit <= 2 * s_n


def test_empty_digit_window():
    sequence = fast_lyapunov_spectra.load_sequence_generator("const:1/3")
    pair = fast_lyapunov_spectra.SequencePair(s=sequence, t=sequence)

    with pytest.raises(fast_lyapunov_spectra.ConstructionError, match="empty digit window at n=1"):
        fast_lyapunov_spectra.e_set_digits(pair, depth=2)


def test_e_set_digits_rejects_an_unknown_rule():
    pair = fast_lyapunov_spectra.exponential_sequence_pair(base=2)

    with pytest.raises(ValueError, match="Unknown digit rule"):
        fast_lyapunov_spectra.e_set_digits(pair, depth=2, rule="largest")


def test_d_set_digits_eventually():
    digit_word = fast_lyapunov_spectra.d_set_digits(2, 2, depth=4)

    assert digit_word.digits == (4, 4, 16, 256)


def test_d_set_digits_infinitely_often():
    digit_word = fast_lyapunov_spectra.d_set_digits(2, 2, depth=4, mode="infinitely_often", subsequence=[2, 4])

    assert digit_word.digits == (1, 16, 1, 4096)
    # The default subsequence is the powers of two, 1 included
    default_digit_word = fast_lyapunov_spectra.d_set_digits(2, 2, depth=4, mode="infinitely_often")
    assert default_digit_word.digits == (4, 4, 1, 4096)


def test_d_set_digits_for_a_fractional_exponent():
    b, c = 2, 1.5
    digit_word = fast_lyapunov_spectra.d_set_digits(b, c, depth=8)

    log_product = 0.0
    for n, digit in enumerate(digit_word, start=1):
        log_target = c**n * math.log(b)
        assert log_product + math.log(digit) >= log_target - 1e-9
        if digit > 1:
            assert log_product + math.log(digit - 1) < log_target + 1e-9
        log_product += math.log(digit)


def test_d_set_digits_over_the_bit_budget():
    with pytest.raises(fast_lyapunov_spectra.BudgetExceededError, match="the bit budget is 100"):
        fast_lyapunov_spectra.d_set_digits(2, 2, depth=8, bit_budget=100)


def test_d_set_digits_errors():
    with pytest.raises(ValueError, match="b > 1 and c > 1"):
        fast_lyapunov_spectra.d_set_digits(2, 1, depth=4)
    with pytest.raises(ValueError, match="Unknown D-set mode"):
        fast_lyapunov_spectra.d_set_digits(2, 2, depth=4, mode="sometimes")


def test_luczak_witnesses():
    digit_word = fast_lyapunov_spectra.d_set_digits(2, 2, depth=4)

    assert fast_lyapunov_spectra.luczak_witnesses(digit_word, b=2, c=2, d=1.5) == [1, 2, 3]
    assert fast_lyapunov_spectra.luczak_witnesses(
        fast_lyapunov_spectra.DigitWord(digits=(2, 2, 2, 2)), b=2, c=2, d=1.5
    ) == []

    with pytest.raises(ValueError, match="1 < d < c"):
        fast_lyapunov_spectra.luczak_witnesses(digit_word, b=2, c=2, d=2)
