"""Digit words realising E({s_n}, {t_n}) and the D-sets, and the Łuczak witness scan."""

import math
from collections.abc import Iterable
from fractions import Fraction
from typing import Literal

import mpmath
import numpy as np

from ._coding import DigitWord
from ._config import get_default_precision_bits
from ._exceptions import BudgetExceededError, ConstructionError
from ._globals import _DEFAULT_BIT_BUDGET
from ._rationals import log_positive, to_mpf
from ._sequences import SequencePair, _as_exact
from ._summation import compensated_cumulative_sum

_PRECISION_ATTEMPTS = 4


def _exact_window(s: Fraction, t: Fraction) -> tuple[int, int, int]:
    lower = math.floor(s) + 1
    upper = math.floor(s + t)
    midpoint = math.floor(s + t / 2 + Fraction(1, 2))

    return lower, upper, midpoint


def _real_window(pair: SequencePair, n: int) -> tuple[int, int, int]:
    """Floors of s_n, s_n + t_n and s_n + t_n/2 + 1/2, recomputed at higher precision while any lies near an integer."""
    precision = get_default_precision_bits()
    with mpmath.workprec(precision):
        magnitude_bits = int(max(pair.s.log_value(n), pair.t.log_value(n)) / mpmath.log(2)) + 2
    precision += max(magnitude_bits, 0)

    for _ in range(_PRECISION_ATTEMPTS):
        with mpmath.workprec(precision):
            s = mpmath.exp(pair.s.log_value(n))
            t = mpmath.exp(pair.t.log_value(n))
            points = (s, s + t, s + t / 2 + mpmath.mpf(1) / 2)
            floors = [mpmath.floor(point) for point in points]

            resolution = (s + t) * mpmath.mpf(2) ** (-(precision // 2))
            margin = min(min(point - floor, floor + 1 - point) for point, floor in zip(points, floors))
            if margin > resolution:
                break
        precision *= 2

    # A point still within resolution of an integer is taken at face value
    lower, upper, midpoint = (int(floor) for floor in floors)
    return lower + 1, upper, midpoint


def _window_floors(pair: SequencePair, n: int) -> tuple[int, int, int]:
    exact_s, exact_t = pair.s.exact_value(n), pair.t.exact_value(n)
    if exact_s is not None and exact_t is not None:
        return _exact_window(s=exact_s, t=exact_t)
    return _real_window(pair=pair, n=n)


def digit_window(pair: SequencePair, n: int) -> tuple[int, int]:
    """The smallest and largest integers in (s_n, s_n + t_n]; the first exceeds the second when the window is empty."""
    lower, upper, _ = _window_floors(pair=pair, n=n)
    return lower, upper


def e_set_digits(
    pair: SequencePair, *, depth: int, rule: Literal["smallest", "midpoint"] = "smallest"
) -> DigitWord:
    """
    Choose a digit a_n with s_n < a_n <= s_n + t_n for n = 1, ..., depth.

    Parameters
    ----------
    pair : SequencePair
        The window sequences.
    depth : int
        The word length.
    rule : "smallest" or "midpoint", default: "smallest"
        Take the smallest integer of each window, or the integer nearest s_n + t_n/2 clamped into the window.

    Raises
    ------
    ConstructionError
        When a window holds no integer.
    """
    if depth < 0:
        message = f"The depth must be non-negative; received {depth}."
        raise ValueError(message)
    if rule not in ("smallest", "midpoint"):
        message = f"Unknown digit rule '{rule}'; choose 'smallest' or 'midpoint'."
        raise ValueError(message)

    digits = []
    for n in range(1, depth + 1):
        lower, upper, midpoint = _window_floors(pair=pair, n=n)
        if lower > upper:
            message = f"empty digit window at n={n}: no integer in (s_n, s_n + t_n]."
            raise ConstructionError(message)

        digit = lower if rule == "smallest" else min(max(midpoint, lower), upper)
        digits.append(max(digit, 1))

    return DigitWord(digits=tuple(digits))


def _default_subsequence(depth: int) -> set[int]:
    return {2**power for power in range(depth.bit_length() + 1) if 2**power <= depth}


def d_set_digits(
    b: Fraction | int | float,
    c: Fraction | int | float,
    *,
    depth: int,
    mode: Literal["eventually", "infinitely_often"] = "eventually",
    subsequence: Iterable[int] | None = None,
    bit_budget: int = _DEFAULT_BIT_BUDGET,
) -> DigitWord:
    """
    Minimal digits with a_1 ... a_n >= b^(c^n) at every prefix (eventually) or along a subsequence (infinitely_often).

    Unconstrained prefixes take the digit 1. The subsequence defaults to the powers of two.
    The computation is exact when b is rational and c an integer, and runs in high precision otherwise.
    """
    if not b > 1 or not c > 1:
        message = f"D-sets need b > 1 and c > 1; received b={b}, c={c}."
        raise ValueError(message)
    if depth < 0:
        message = f"The depth must be non-negative; received {depth}."
        raise ValueError(message)
    if mode not in ("eventually", "infinitely_often"):
        message = f"Unknown D-set mode '{mode}'; choose 'eventually' or 'infinitely_often'."
        raise ValueError(message)

    if mode == "eventually":
        constrained = set(range(1, depth + 1))
    else:
        constrained = set(subsequence) if subsequence is not None else _default_subsequence(depth)

    # b^(c^n) carries about c^n log2(b) bits
    log2_b = log_positive(b) / math.log(2)
    for n in sorted(constrained):
        if n <= depth and float(c) ** n * log2_b > bit_budget:
            message = (
                f"The D-set target b^(c^n) at n={n} needs about {float(c) ** n * log2_b:.3g} bits; "
                f"the bit budget is {bit_budget}."
            )
            raise BudgetExceededError(message)

    exact_b = _as_exact(b)
    exact_c = _as_exact(c)
    if exact_b is not None and exact_c is not None and exact_c.denominator == 1:
        return _exact_d_set_digits(b=exact_b, c=int(exact_c), depth=depth, constrained=constrained)

    return _real_d_set_digits(b=b, c=c, depth=depth, constrained=constrained)


def _exact_d_set_digits(b: Fraction, c: int, depth: int, constrained: set[int]) -> DigitWord:
    digits = []
    product = 1
    for n in range(1, depth + 1):
        digit = 1
        if n in constrained:
            target = b ** (c**n)
            digit = max(1, math.ceil(target / product))
        digits.append(digit)
        product *= digit

    return DigitWord(digits=tuple(digits))


def _real_d_set_digits(b: Fraction | float, c: Fraction | float, depth: int, constrained: set[int]) -> DigitWord:
    digits = []
    log_product = mpmath.mpf(0)
    for n in range(1, depth + 1):
        digit = 1
        if n in constrained:
            precision = get_default_precision_bits()
            for _ in range(_PRECISION_ATTEMPTS):
                with mpmath.workprec(precision):
                    log_target = to_mpf(c) ** n * mpmath.log(to_mpf(b))
                    quotient = mpmath.exp(log_target - log_product)
                    ceiling = mpmath.ceil(quotient)
                    if ceiling - quotient > mpmath.mpf(2) ** (-(precision // 4)) * ceiling:
                        break
                precision *= 2
            digit = max(1, int(ceiling))
        digits.append(digit)
        with mpmath.workprec(get_default_precision_bits()):
            log_product += mpmath.log(digit)

    return DigitWord(digits=tuple(digits))


def luczak_witnesses(word: DigitWord, *, b: float, c: float, d: float) -> list[int]:
    """
    Indices n with a_1 ... a_(n+1) > max{(a_1 ... a_n)^d, b^(d^(n+1))}, compared in the log domain.

    Requires 1 < d < c.
    """
    if not 1 < d < c:
        message = f"Łuczak witnesses need 1 < d < c; received d={d}, c={c}."
        raise ValueError(message)
    if not b > 1:
        message = f"Łuczak witnesses need b > 1; received b={b}."
        raise ValueError(message)
    if len(word) < 2:
        return []

    log_products = compensated_cumulative_sum(word.log_digits)
    n = np.arange(1, len(word), dtype=float)
    with np.errstate(over="ignore"):
        log_targets = np.power(float(d), n + 1) * math.log(float(b))

    current = log_products[:-1]
    following = log_products[1:]
    witnessed = (following > float(d) * current) & (following > log_targets)

    return [int(index) + 1 for index in np.flatnonzero(witnessed)]
