import pathlib
from fractions import Fraction

import mpmath
import py
import pytest

import fast_lyapunov_spectra
from fast_lyapunov_spectra.testing import continued_fraction_denominators


def test_gauss_cylinder_diameter():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=(2, 3))
    cylinder_interval = fast_lyapunov_spectra.cylinder(gauss, word)

    assert cylinder_interval.exact
    assert (cylinder_interval.lo, cylinder_interval.hi) == (Fraction(3, 7), Fraction(4, 9))
    assert cylinder_interval.diameter == Fraction(1, 63)
    assert cylinder_interval.satisfies_diameter_bounds()


def test_exhaustive_gauss_cylinders_match_convergents():
    gauss = fast_lyapunov_spectra.load_map("gauss")

    number_of_cylinders = 0
    for cylinder_interval in fast_lyapunov_spectra.iterate_cylinders(gauss, maximum_length=6, maximum_digit=8):
        denominators = [1] + continued_fraction_denominators(cylinder_interval.word.digits)
        expected_diameter = Fraction(1, denominators[-1] * (denominators[-1] + denominators[-2]))

        assert cylinder_interval.diameter == expected_diameter, f"Word {cylinder_interval.word.to_line()} mismatched!"
        assert cylinder_interval.satisfies_diameter_bounds(), f"Word {cylinder_interval.word.to_line()} unbounded!"
        number_of_cylinders += 1

    assert number_of_cylinders == sum(8**length for length in range(1, 7))


def test_cylinders_nest():
    renyi = fast_lyapunov_spectra.load_map("renyi")
    parent = fast_lyapunov_spectra.cylinder(renyi, fast_lyapunov_spectra.DigitWord(digits=(3, 1)))
    child = fast_lyapunov_spectra.cylinder(renyi, fast_lyapunov_spectra.DigitWord(digits=(3, 1, 5)))

    assert child.is_subset_of(parent)
    assert parent.contains(child.midpoint)


def test_outward_cylinder_encloses_exact_diameter():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=(1, 2, 3, 4, 5))

    exact_cylinder = fast_lyapunov_spectra.cylinder(gauss, word, mode="exact")
    outward_cylinder = fast_lyapunov_spectra.cylinder(gauss, word, mode="outward")

    assert not outward_cylinder.exact
    assert float(outward_cylinder.diameter) == pytest.approx(float(exact_cylinder.diameter), rel=1e-12)
    assert float(outward_cylinder.lo) == pytest.approx(float(exact_cylinder.lo), rel=1e-12)
    assert outward_cylinder.satisfies_diameter_bounds()


def test_exact_cylinder_beyond_the_bit_budget():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=(2,) * 50)

    with pytest.raises(fast_lyapunov_spectra.BudgetExceededError, match="beyond the bit budget of 10"):
        fast_lyapunov_spectra.cylinder(gauss, word, mode="exact", bit_budget=10)

    assert not fast_lyapunov_spectra.cylinder(gauss, word, mode="auto", bit_budget=10).exact


def test_cylinder_of_the_empty_word():
    gauss = fast_lyapunov_spectra.load_map("gauss")

    with pytest.raises(ValueError, match="needs a nonempty word"):
        fast_lyapunov_spectra.cylinder(gauss, fast_lyapunov_spectra.DigitWord())


def test_compute_cylinders_parallel_preserves_order(tmpdir: py.path.local):
    tmpdir = pathlib.Path(tmpdir)

    words = [fast_lyapunov_spectra.DigitWord(digits=(first, second)) for first in range(1, 6) for second in range(1, 6)]
    words_file_path = tmpdir / "words.txt"
    fast_lyapunov_spectra.write_digit_words(words=words, file_path=words_file_path)
    read_words = fast_lyapunov_spectra.read_digit_words(words_file_path)
    assert read_words == words

    gauss = fast_lyapunov_spectra.load_map("gauss")
    sequential_cylinders = fast_lyapunov_spectra.compute_cylinders(gauss, read_words)
    parallel_cylinders = fast_lyapunov_spectra.compute_cylinders(gauss, read_words, maximum_number_of_workers=2)

    assert [cylinder_interval.to_row() for cylinder_interval in parallel_cylinders] == [
        cylinder_interval.to_row() for cylinder_interval in sequential_cylinders
    ]
    assert [cylinder_interval.word for cylinder_interval in parallel_cylinders] == words


def test_digit_word_reader_skips_comments(tmpdir: py.path.local):
    tmpdir = pathlib.Path(tmpdir)

    words_file_path = tmpdir / "commented_words.txt"
    words_file_path.write_text("# header\n1,2\n\n3\n")

    words = fast_lyapunov_spectra.read_digit_words(words_file_path)

    assert [word.digits for word in words] == [(1, 2), (3,)]


def test_digit_word_reader_line_beyond_buffer(tmpdir: py.path.local):
    tmpdir = pathlib.Path(tmpdir)

    words_file_path = tmpdir / "long_line.txt"
    words_file_path.write_text("1,2,3,4\n5\n")

    with pytest.raises(ValueError, match="exceeds the buffer size"):
        fast_lyapunov_spectra.read_digit_words(words_file_path, maximum_buffer_size_in_bytes=8)


def _mpf_as_fraction(value) -> Fraction:
    return Fraction(value.man) * Fraction(2) ** value.exp


def test_outward_cylinder_encloses_exact_endpoints():
    gauss = fast_lyapunov_spectra.load_map("gauss")
    word = fast_lyapunov_spectra.DigitWord(digits=(2, 3))
    interval_precision = mpmath.iv.prec

    outward_cylinder = fast_lyapunov_spectra.cylinder(gauss, word, mode="outward")

    assert _mpf_as_fraction(outward_cylinder.lo) <= Fraction(3, 7)
    assert _mpf_as_fraction(outward_cylinder.hi) >= Fraction(4, 9)
    assert _mpf_as_fraction(outward_cylinder.diameter) >= Fraction(1, 63)
    assert mpmath.iv.prec == interval_precision
