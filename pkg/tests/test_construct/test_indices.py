import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fast_lyapunov_spectra
from fast_lyapunov_spectra.testing import brute_force_l_indices, brute_force_p_indices


def test_l_and_p_indices():
    values = [3, 1, 2, 5, 4]

    assert fast_lyapunov_spectra.l_indices(values).indices == (2, 3, 5)
    assert fast_lyapunov_spectra.p_indices(values).indices == (1, 2)


def test_ties_are_not_indices():
    values = [2, 2, 2]

    assert fast_lyapunov_spectra.l_indices(values).indices == (3,)
    assert fast_lyapunov_spectra.p_indices(values).indices == (1,)


def test_l_indices_near_the_horizon_are_provisional():
    l_index_report = fast_lyapunov_spectra.l_indices(np.arange(1, 101))

    assert l_index_report.certified_through == 90
    assert l_index_report.provisional == tuple(range(91, 101))
    assert l_index_report.certified == tuple(range(1, 91))

    p_index_report = fast_lyapunov_spectra.p_indices(np.arange(100, 0, -1))
    assert p_index_report.provisional == ()


def test_horizon_longer_than_the_sequence():
    with pytest.raises(ValueError, match="has 3 terms; requested the horizon 5"):
        fast_lyapunov_spectra.l_indices([1, 2, 3], horizon=5)


def test_exhaustive_sweep_matches_the_definition():
    for values in itertools.product(range(1, 6), repeat=8):
        assert list(fast_lyapunov_spectra.l_indices(values).indices) == brute_force_l_indices(values)
        assert list(fast_lyapunov_spectra.p_indices(values).indices) == brute_force_p_indices(values)


def test_sampled_sweep_matches_the_definition():
    random_number_generator = np.random.default_rng(seed=0)
    for values in random_number_generator.integers(low=1, high=6, size=(100_000, 12)).tolist():
        assert list(fast_lyapunov_spectra.l_indices(values).indices) == brute_force_l_indices(values)
        assert list(fast_lyapunov_spectra.p_indices(values).indices) == brute_force_p_indices(values)

@given(values=st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=60))
def test_sweep_matches_the_definition_on_random_sequences(values: list[float]):
    assert list(fast_lyapunov_spectra.l_indices(values).indices) == brute_force_l_indices(values)
    assert list(fast_lyapunov_spectra.p_indices(values).indices) == brute_force_p_indices(values)


def test_joint_index():
    a = [3, 1, 2, 5, 4]
    c = [5, 4, 3, 2, 1]

    joint_index_result = fast_lyapunov_spectra.joint_index(a, c, N=2)
    assert joint_index_result.index == 3
    assert joint_index_result.found
    assert joint_index_result.monotone_from == 5

    assert not fast_lyapunov_spectra.joint_index(a, c, N=5).found


def test_joint_index_requires_matching_lengths():
    with pytest.raises(ValueError, match="must share a horizon"):
        fast_lyapunov_spectra.joint_index([1, 2, 3], [1, 2], N=0)


def test_key_index_for_a_quadratic():
    psi = fast_lyapunov_spectra.load_scaling_function("power:2")
    index = fast_lyapunov_spectra.key_index(psi, epsilon=0.5, N=5, horizon=100, case="b_one")

    assert index == 15
    log_psi = psi.log_values(start=1, stop=100)
    assert fast_lyapunov_spectra.key_index_holds(log_psi, 15, b=1.0, epsilon=0.5, case="b_one")
    assert not fast_lyapunov_spectra.key_index_holds(log_psi, 14, b=1.0, epsilon=0.5, case="b_one")


def test_key_index_for_an_exponential():
    psi = fast_lyapunov_spectra.load_scaling_function("exp:3")

    assert fast_lyapunov_spectra.key_index(psi, epsilon=0.5, N=4, horizon=50, case="finite_b", b=3) == 5


def test_key_index_errors():
    psi = fast_lyapunov_spectra.load_scaling_function("exp:3")

    with pytest.raises(ValueError, match="needs the value of b"):
        fast_lyapunov_spectra.key_index(psi, epsilon=0.5, N=4, horizon=50, case="finite_b")
    with pytest.raises(ValueError, match="0 < epsilon < b - 1"):
        fast_lyapunov_spectra.key_index(psi, epsilon=2.5, N=4, horizon=50, case="finite_b", b=3)
    with pytest.raises(fast_lyapunov_spectra.ConstructionError, match="No key index past N=50"):
        fast_lyapunov_spectra.key_index(psi, epsilon=0.5, N=50, horizon=50, case="finite_b", b=3)


def test_key_index_sequences_for_the_finite_case():
    log_psi = np.arange(1, 11) * np.log(3)
    key_index_sequences = fast_lyapunov_spectra.key_index_sequences(log_psi, b=3, epsilon=0.5, case="finite_b")

    np.testing.assert_allclose(np.diff(key_index_sequences.log_a), np.log(3 / 2.5))
    np.testing.assert_allclose(np.diff(key_index_sequences.log_c), np.log(3 / 3.5))
