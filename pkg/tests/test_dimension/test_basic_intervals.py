from fractions import Fraction

import pytest

import fast_lyapunov_spectra


def _powers_of_two_pair() -> fast_lyapunov_spectra.SequencePair:
    return fast_lyapunov_spectra.exponential_sequence_pair(base=2)


def test_gauss_tree_of_depth_four():
    map_spec = fast_lyapunov_spectra.load_map("gauss")
    tree = fast_lyapunov_spectra.enumerate_basic_intervals(map_spec, _powers_of_two_pair(), depth=4, digit_cap=64)

    # m_n = floor(s_n + t_n) - floor(s_n) = 2^n
    assert tree.m == (2, 4, 8, 16)
    assert tree.counts == (2, 8, 64, 1024)
    assert tree.windows[:4] == ((3, 4), (5, 8), (9, 16), (17, 32))
    assert tree.theta == pytest.approx(1)
    assert tree.nesting_violations() == []
    assert tree.gaps_dominate_bound

    lower_estimate = fast_lyapunov_spectra.falconer_lower(tree.m, tree.min_gaps).estimate
    upper_estimate = fast_lyapunov_spectra.cover_upper(tree.counts, tree.max_diameters).estimate
    assert 0 < lower_estimate <= upper_estimate < 1


def test_gauss_tree_of_depth_one():
    map_spec = fast_lyapunov_spectra.load_map("gauss")
    tree = fast_lyapunov_spectra.enumerate_basic_intervals(map_spec, _powers_of_two_pair(), depth=1, digit_cap=64)

    assert [interval.word.digits for interval in tree.levels[0]] == [(3,), (4,)]

    # J_1(3) = [5/16, 9/28] and J_1(4) = [5/21, 9/37]
    assert (tree.levels[0][0].lo, tree.levels[0][0].hi) == (Fraction(5, 16), Fraction(9, 28))
    assert (tree.levels[0][1].lo, tree.levels[0][1].hi) == (Fraction(5, 21), Fraction(9, 37))
    assert tree.min_gaps == (Fraction(41, 592),)
    assert tree.log_gap_bounds[0] == pytest.approx(-8 * 0.6931471805599453)


def test_tree_to_frame():
    map_spec = fast_lyapunov_spectra.load_map("gauss")
    tree = fast_lyapunov_spectra.enumerate_basic_intervals(map_spec, _powers_of_two_pair(), depth=2, digit_cap=64)
    frame = tree.to_frame()

    assert list(frame.columns) == ["n", "m_n", "min_gap", "max_diam", "count", "log_gap_bound"]
    assert frame["count"].tolist() == [2, 8]


def test_parallel_tree_matches_the_sequential_tree():
    map_spec = fast_lyapunov_spectra.load_map("gauss")
    pair = _powers_of_two_pair()

    tree = fast_lyapunov_spectra.enumerate_basic_intervals(map_spec, pair, depth=3, digit_cap=64)
    parallel_tree = fast_lyapunov_spectra.enumerate_basic_intervals(
        map_spec, pair, depth=3, digit_cap=64, maximum_number_of_workers=2
    )

    assert parallel_tree.levels == tree.levels


def test_digit_cap():
    map_spec = fast_lyapunov_spectra.load_map("gauss")

    with pytest.raises(fast_lyapunov_spectra.ConstructionError, match="beyond the digit cap of 32"):
        fast_lyapunov_spectra.enumerate_basic_intervals(map_spec, _powers_of_two_pair(), depth=4, digit_cap=32)


def test_node_budget():
    map_spec = fast_lyapunov_spectra.load_map("gauss")

    with pytest.raises(fast_lyapunov_spectra.BudgetExceededError, match="holds 74 basic intervals"):
        fast_lyapunov_spectra.enumerate_basic_intervals(
            map_spec, _powers_of_two_pair(), depth=3, digit_cap=64, node_budget=10
        )


def test_windows_need_two_digits():
    map_spec = fast_lyapunov_spectra.load_map("gauss")
    sequence = fast_lyapunov_spectra.load_sequence_generator("const:1")
    pair = fast_lyapunov_spectra.SequencePair(s=sequence, t=sequence)

    with pytest.raises(fast_lyapunov_spectra.ConstructionError, match="fewer than two integers"):
        fast_lyapunov_spectra.enumerate_basic_intervals(map_spec, pair, depth=2, digit_cap=64)
