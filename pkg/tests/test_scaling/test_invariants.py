import math

import numpy as np
import pytest

import fast_lyapunov_spectra


def test_factorial_block_invariant_triple():
    psi = fast_lyapunov_spectra.load_scaling_function("factorial_block")

    # The window reaches back past 1! + ... + 6! = 873 so that both block ends 873 and 5913 are inside it
    scaling_invariants = fast_lyapunov_spectra.invariants(psi, horizon=5913, window=5100)

    assert scaling_invariants.b == pytest.approx(3, rel=0.05)
    assert scaling_invariants.B == pytest.approx(4, rel=0.05)
    assert scaling_invariants.beta == pytest.approx(5, rel=0.05)
    assert scaling_invariants.superlinear


def test_power_invariants():
    psi = fast_lyapunov_spectra.load_scaling_function("power:2")
    scaling_invariants = fast_lyapunov_spectra.invariants(psi, horizon=10_000)

    assert scaling_invariants.window == 2_500
    assert scaling_invariants.beta == pytest.approx(1, abs=1e-3)
    assert scaling_invariants.B == pytest.approx(1, abs=1e-2)
    assert scaling_invariants.b <= scaling_invariants.B <= scaling_invariants.beta_running
    assert scaling_invariants.superlinear
    assert scaling_invariants.equiv_increasing


def test_exponential_invariants():
    psi = fast_lyapunov_spectra.load_scaling_function("exp:3")
    scaling_invariants = fast_lyapunov_spectra.invariants(psi, horizon=400)

    assert scaling_invariants.beta == pytest.approx(3)
    assert scaling_invariants.B == pytest.approx(3)
    assert scaling_invariants.b == pytest.approx(3)


def test_linear_growth_is_not_superlinear():
    psi = fast_lyapunov_spectra.load_scaling_function("power:1")

    assert not fast_lyapunov_spectra.invariants(psi, horizon=1_000).superlinear


def test_oscillating_invariants():
    psi = fast_lyapunov_spectra.load_scaling_function("oscillating_exp:2:4")
    scaling_invariants = fast_lyapunov_spectra.invariants(psi, horizon=1_000)

    assert scaling_invariants.B == pytest.approx(4)
    assert scaling_invariants.b == pytest.approx(2)
    assert not scaling_invariants.equiv_increasing


def test_invariants_window_must_fit_the_horizon():
    psi = fast_lyapunov_spectra.load_scaling_function("power:2")

    with pytest.raises(ValueError, match="1 <= window < horizon = 100"):
        fast_lyapunov_spectra.invariants(psi, horizon=100, window=100)


def test_invariants_beyond_a_tabulated_horizon():
    psi = fast_lyapunov_spectra.tabulate_scaling_function(np.arange(1, 11, dtype=float))

    with pytest.raises(fast_lyapunov_spectra.TruncationError, match="defined only up to n=10"):
        fast_lyapunov_spectra.invariants(psi, horizon=20)


def test_invariants_from_values_round_trip_to_dict():
    scaling_invariants = fast_lyapunov_spectra.ScalingInvariants.from_values(beta=5, B=4, b=3)

    invariants_dict = scaling_invariants.to_dict()
    assert (invariants_dict["beta"], invariants_dict["B"], invariants_dict["b"]) == (5, 4, 3)
    assert invariants_dict["xi"] is None


@pytest.mark.parametrize("phi_source, expected_xi", [("exp:2", 1.0), ("power:2", 0.0)])
def test_xi(phi_source: str, expected_xi: float):
    phi = fast_lyapunov_spectra.load_scaling_function(phi_source)

    assert fast_lyapunov_spectra.xi(phi, horizon=2_000) == pytest.approx(expected_xi, abs=1e-2)


def test_xi_of_double_exponential_growth_is_infinite():
    phi = fast_lyapunov_spectra.load_scaling_function("double_exp:2:2")

    assert math.isinf(fast_lyapunov_spectra.xi(phi, horizon=40))
