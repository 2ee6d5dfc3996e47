import pathlib

import pytest

import fast_lyapunov_spectra


@pytest.fixture(scope="session")
def large_words_file_path(tmp_path_factory: pytest.TempPathFactory) -> pathlib.Path:
    """A words file of 10^5 lines of exactly 10 bytes each."""
    tmp_path = pathlib.Path(tmp_path_factory.mktemp("large_words_file"))

    words_file_path = tmp_path / "large_words_file.txt"
    with open(file=words_file_path, mode="w") as io:
        io.writelines(["1,2,3,4,5\n" for _ in range(10**5)])

    return words_file_path


def test_digit_word_reader(large_words_file_path: pathlib.Path):
    digit_word_reader = fast_lyapunov_spectra.DigitWordReader(
        file_path=large_words_file_path, maximum_buffer_size_in_bytes=2 * 10**5
    )

    assert iter(digit_word_reader) is digit_word_reader

    for buffer_index, buffer in enumerate(digit_word_reader):
        assert len(buffer) == 10**4
        assert buffer[0].digits == (1, 2, 3, 4, 5)

    assert buffer_index == 9

    with pytest.raises(StopIteration):
        next(digit_word_reader)


def test_digit_word_reader_reports_the_line_number(tmp_path_factory: pytest.TempPathFactory):
    tmp_path = pathlib.Path(tmp_path_factory.mktemp("malformed_words_file"))
    words_file_path = tmp_path / "malformed_words_file.txt"
    words_file_path.write_text("1,2\n3,x\n")

    with pytest.raises(ValueError) as error_info:
        fast_lyapunov_spectra.read_digit_words(words_file_path)

    assert str(error_info.value).startswith("Line 2 of")
    assert "Could not parse the digit word line '3,x'." in str(error_info.value)


def test_log_scaled_words_are_written_but_not_read_back(tmp_path_factory: pytest.TempPathFactory):
    tmp_path = pathlib.Path(tmp_path_factory.mktemp("log_scaled_words_file"))
    words_file_path = tmp_path / "log_scaled_words_file.txt"

    fast_lyapunov_spectra.write_digit_words(
        words=[fast_lyapunov_spectra.DigitWord(digits=(2, 2**70))], file_path=words_file_path
    )

    assert words_file_path.read_text().startswith("2,exp(")
    with pytest.raises(ValueError, match="cannot be restored exactly"):
        fast_lyapunov_spectra.read_digit_words(words_file_path)
