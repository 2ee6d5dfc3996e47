import math
import pathlib

import numpy as np
import pandas
import py
import pytest

import fast_lyapunov_spectra


@pytest.mark.parametrize(
    "source, n, expected_log_value",
    [
        ("power:2", 10, 2 * math.log(10)),
        ("power:3:5", 2, math.log(5) + 3 * math.log(2)),
        ("exp:2", 10, 10 * math.log(2)),
        ("nlogn", 4, math.log(4) + math.log(math.log(5))),
        ("oscillating_exp:2:4", 3, 3 * math.log(4)),
        ("oscillating_exp:2:4", 4, 4 * math.log(2)),
        ("double_exp:2:3", 3, 27 * math.log(2)),
        ("expression:n**2 + 1", 3, math.log(10)),
        ("log_expression:n * 2", 5, 10.0),
    ],
)
def test_compact_scaling_strings(source: str, n: int, expected_log_value: float):
    psi = fast_lyapunov_spectra.load_scaling_function(source)

    assert psi.log_value(n) == pytest.approx(expected_log_value)


def test_factorial_block_ratios():
    psi = fast_lyapunov_spectra.load_scaling_function("factorial_block")
    log_ratios = np.diff(psi.log_values(start=1, stop=40))

    assert set(np.round(np.exp(log_ratios), 9)) == {3.0, 4.0, 5.0}


def test_noisy_exponential_is_seeded():
    first_psi = fast_lyapunov_spectra.load_scaling_function("noisy_exp:2:7:100")
    second_psi = fast_lyapunov_spectra.noisy_exponential_scaling(base=2, seed=7, horizon=100)

    np.testing.assert_array_equal(first_psi.log_values(start=1, stop=100), second_psi.log_values(start=1, stop=100))
    ratios = np.exp(first_psi.log_values(start=1, stop=100) - np.arange(1, 101) * math.log(2))
    assert ((ratios >= 1) & (ratios <= 2)).all()


def test_scaling_table(tmpdir: py.path.local):
    tmpdir = pathlib.Path(tmpdir)

    table_file_path = tmpdir / "psi.csv"
    pandas.DataFrame({"n": [1, 2, 3], "psi": [2.0, 8.0, 32.0]}).to_csv(path_or_buf=table_file_path, index=False)

    psi = fast_lyapunov_spectra.load_scaling_function(f"table:{table_file_path}")

    assert psi.horizon == 3
    np.testing.assert_allclose(psi.log_values(start=1, stop=3), np.log([2.0, 8.0, 32.0]))
    with pytest.raises(fast_lyapunov_spectra.TruncationError):
        psi.log_values(start=1, stop=4)


def test_scaling_yaml_document(tmpdir: py.path.local):
    tmpdir = pathlib.Path(tmpdir)

    document_file_path = tmpdir / "psi.yaml"
    document_file_path.write_text("family: exp\nparams:\n  base: 3\n  coefficient: 2\n")

    psi = fast_lyapunov_spectra.load_scaling_function(document_file_path)

    assert psi.log_value(2) == pytest.approx(math.log(18))


def test_psi_star_and_scaling():
    psi = fast_lyapunov_spectra.load_scaling_function("power:2")

    assert fast_lyapunov_spectra.psi_star(psi).log_value(3) == pytest.approx(math.log(27))
    assert fast_lyapunov_spectra.scale_scaling_function(psi, factor=2.0).log_value(3) == pytest.approx(math.log(18))


def test_scaling_values_must_be_positive():
    psi = fast_lyapunov_spectra.load_scaling_function("expression:n - 2")

    with pytest.raises(ValueError, match="psi\\(1\\) is not"):
        psi.log_values(start=1, stop=3)


def test_unknown_scaling_family():
    with pytest.raises(ValueError, match="neither a known scaling family"):
        fast_lyapunov_spectra.load_scaling_function("not_a_family")


def test_equivalence_to_increasing_is_a_heuristic():
    psi = fast_lyapunov_spectra.load_scaling_function("power:2")
    report = fast_lyapunov_spectra.is_equivalent_increasing(psi, horizon=100)

    assert report.flag
    assert report.label == "HEURISTIC"
    assert report.window == 25
    np.testing.assert_allclose(report.ratio_trace, np.ones(100))

    oscillating_report = fast_lyapunov_spectra.is_equivalent_increasing(
        fast_lyapunov_spectra.load_scaling_function("oscillating_exp:2:4"), horizon=100
    )
    assert not oscillating_report.flag
