import json
import pathlib

import pandas
import py
import pytest

import fast_lyapunov_spectra


def _run_json(arguments: list[str], capsys: pytest.CaptureFixture) -> dict:
    exit_code = fast_lyapunov_spectra.run(arguments)
    captured = capsys.readouterr()

    assert exit_code == 0, captured.err
    return json.loads(captured.out)


def test_spectrum_of_a_quadratic_scaling(capsys: pytest.CaptureFixture):
    output = _run_json(["spectrum", "--map", "gauss", "--psi", "power:2"], capsys)

    assert output["dimension"] == pytest.approx(0.5, abs=1e-3)
    assert output["formula_tag"] == "fast:finite_alpha"
    assert output["config"]["subcommand"] == "spectrum"
    assert output["config"]["horizon"] == 10_000
    assert output["config"]["parameters"]["alpha"] == "finite"


def test_spectrum_at_alpha_zero(capsys: pytest.CaptureFixture):
    output = _run_json(["spectrum", "--psi", "power:2", "--alpha", "0", "--horizon", "100"], capsys)

    assert output["dimension"] == 1.0
    assert output["dimension_exact"] == "1"


def test_spectrum_is_deterministic(capsys: pytest.CaptureFixture):
    arguments = ["spectrum", "--psi", "factorial_block", "--horizon", "873", "--alpha", "inf"]
    first_output = _run_json(arguments, capsys)
    second_output = _run_json(arguments, capsys)

    assert first_output == second_output


def test_map_check(capsys: pytest.CaptureFixture):
    output = _run_json(["map", "check", "--map", "renyi"], capsys)

    assert output["all_pass"]
    assert output["parabolic"]
    assert output["config"]["map_source"] == "renyi"


def test_orbit(capsys: pytest.CaptureFixture):
    output = _run_json(["orbit", "--x", "5/13", "--depth", "3"], capsys)

    assert output["word"] == "2,1,1"
    assert output["orbit"] == ["5/13", "3/5", "2/3"]


def test_orbit_as_csv(capsys: pytest.CaptureFixture):
    exit_code = fast_lyapunov_spectra.run(["orbit", "--x", "5/13", "--depth", "3", "--output_format", "csv"])
    captured = capsys.readouterr()

    assert exit_code == 0
    assert captured.out.splitlines()[0] == "n,orbit_point,digit,log_derivative"
    assert captured.out.splitlines()[1].startswith("1,5/13,2,")
    assert json.loads(captured.err)["config"]["output_format"] == "csv"


def test_cylinder_to_csv_file(tmpdir: py.path.local, capsys: pytest.CaptureFixture):
    tmpdir = pathlib.Path(tmpdir)
    csv_file_path = tmpdir / "cylinders.csv"

    output = _run_json(["cylinder", "--digits", "2,3", "--csv_file_path", str(csv_file_path)], capsys)
    assert output["cylinders"][0]["lo"] == "3/7"
    assert output["cylinders"][0]["hi"] == "4/9"
    assert output["diameter_bound_violations"] == []

    test_cylinders = pandas.read_csv(filepath_or_buffer=csv_file_path, dtype=str)
    gauss = fast_lyapunov_spectra.load_map("gauss")
    expected_cylinders = pandas.DataFrame(
        [fast_lyapunov_spectra.cylinder(gauss, fast_lyapunov_spectra.DigitWord(digits=(2, 3))).to_row()]
    )
    pandas.testing.assert_frame_equal(left=test_cylinders, right=expected_cylinders)
    assert test_cylinders["diameter"].tolist() == ["1/63"]


def test_dset_with_witnesses(capsys: pytest.CaptureFixture):
    output = _run_json(["dset", "--b", "2", "--c", "2", "--depth", "4", "--witness_d", "1.5"], capsys)

    assert output["digits"] == "4,4,16,256"
    assert output["witnesses"] == [1, 2, 3]


def test_eset_digits(capsys: pytest.CaptureFixture):
    output = _run_json(["eset", "digits", "--s", "exp:2", "--depth", "4"], capsys)

    assert output["digits"] == "3,5,9,17"


def test_count_oracle(capsys: pytest.CaptureFixture):
    output = _run_json(["count-oracle", "--n", "1", "--k", "1"], capsys)

    (count_record,) = output["counts"]
    assert (count_record["n"], count_record["k"], count_record["count"]) == (1, 1, 2)
    assert count_record["bound"] == pytest.approx(32.61938194150854)
    assert count_record["within_bound"]


def test_gpsi_appendix(capsys: pytest.CaptureFixture):
    output = _run_json(
        ["gpsi", "--psi", "exp:3", "--horizon", "20", "--method", "appendix", "--b", "3"], capsys
    )

    assert output["case_label"] == "b_finite"
    assert output["contact_indices"] == list(range(1, 21))
    assert output["satisfies_properties"]


def test_unknown_option_is_a_usage_error(capsys: pytest.CaptureFixture):
    assert fast_lyapunov_spectra.run(["spectrum", "--psi", "power:2", "--bogus"]) == 2
    assert fast_lyapunov_spectra.run(["spectrum"]) == 2
    assert "Usage" in capsys.readouterr().err


def test_domain_error_exits_with_one(capsys: pytest.CaptureFixture):
    exit_code = fast_lyapunov_spectra.run(["orbit", "--map", "gauss", "--x", "1/3", "--depth", "3"])
    captured = capsys.readouterr()

    assert exit_code == 1
    assert captured.err.startswith("Error:")
    assert captured.out == ""


def test_outward_cylinder(capsys: pytest.CaptureFixture):
    output = _run_json(["cylinder", "--digits", "2,3", "--mode", "outward"], capsys)

    (cylinder_row,) = output["cylinders"]
    assert float(cylinder_row["lo"]) == pytest.approx(3 / 7, rel=1e-15)
    assert float(cylinder_row["hi"]) == pytest.approx(4 / 9, rel=1e-15)
    assert output["diameter_bound_violations"] == []


@pytest.mark.parametrize("subsequence", ["2,four", "0,2", "1,,2"])
def test_malformed_subsequence_is_a_usage_error(subsequence: str, capsys: pytest.CaptureFixture):
    exit_code = fast_lyapunov_spectra.run(["dset", "--mode", "infinitely_often", "--subsequence", subsequence])

    assert exit_code == 2
    assert "--subsequence" in capsys.readouterr().err
