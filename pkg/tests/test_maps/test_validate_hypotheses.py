import pytest

import fast_lyapunov_spectra


@pytest.mark.parametrize("map_name", ["gauss", "renyi"])
def test_builtin_maps_pass_every_hypothesis(map_name: str):
    map_spec = fast_lyapunov_spectra.load_map(map_name)
    report = fast_lyapunov_spectra.validate_hypotheses(map_spec, samples_per_branch=8, branch_horizon=32)

    assert report.all_pass
    assert report.blocking_failures == ()
    report.require_valid()


def test_renyi_report_is_parabolic():
    report = fast_lyapunov_spectra.validate_hypotheses(fast_lyapunov_spectra.load_map("renyi"))

    report_dict = report.to_dict()
    assert report_dict["parabolic"] is True
    assert report_dict["all_pass"] is True
    assert set(report_dict["hypotheses"]) == {"1", "2", "3", "4", "5"}


def test_middle_third_gaps_violate_shared_endpoints():
    map_spec = fast_lyapunov_spectra.load_map("middle_third_gaps")
    report = fast_lyapunov_spectra.validate_hypotheses(map_spec, branch_horizon=16)

    assert report.status(1) == "fail"
    assert report.status(4) == "pass"
    assert report.status(5) == "pass"
    assert not report.all_pass

    with pytest.raises(fast_lyapunov_spectra.HypothesisViolationError, match="share exactly one endpoint"):
        report.require_valid()


def test_accepted_violations_are_collected():
    error_folder = fast_lyapunov_spectra.FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH / "errors"

    map_spec = fast_lyapunov_spectra.load_map("middle_third_gaps")
    report = fast_lyapunov_spectra.validate_hypotheses(map_spec, branch_horizon=16)
    report.require_valid(allow_violations=True)

    hypothesis_error_files = list(error_folder.glob("*_hypothesis_errors.txt"))
    assert len(hypothesis_error_files) > 0, "The accepted violation was not collected!"


def test_derivative_bounds_flag_an_incompatible_gamma():
    document = {
        "gamma": 3,
        "C": 2,
        "branches": [
            {"interval": ["0", "1/2"], "mobius": [2, 0, 0, 1]},
            {"interval": ["1/2", "1"], "mobius": [2, -1, 0, 1]},
        ],
    }
    report = fast_lyapunov_spectra.validate_hypotheses(fast_lyapunov_spectra.load_map(document))

    assert report.status(5) == "fail"
    with pytest.raises(fast_lyapunov_spectra.HypothesisViolationError):
        report.require_valid()


def test_invalid_sample_count():
    with pytest.raises(ValueError, match="at least two samples per branch"):
        fast_lyapunov_spectra.validate_hypotheses(fast_lyapunov_spectra.load_map("gauss"), samples_per_branch=1)
