"""Brute-force oracles for testing the sweeps, codings and constructions against their definitions."""

from ._helpers import (
    continued_fraction_denominators,
    brute_force_l_indices,
    brute_force_p_indices,
    brute_force_count_product_tuples,
    brute_force_infimum_minorant,
    find_random_rational_seeds,
)

__all__ = [
    "continued_fraction_denominators",
    "brute_force_l_indices",
    "brute_force_p_indices",
    "brute_force_count_product_tuples",
    "brute_force_infimum_minorant",
    "find_random_rational_seeds",
]
