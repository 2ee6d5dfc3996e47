"""Helpers for exact rationals and for logarithms of mixed exact/high-precision quantities."""

import math
from fractions import Fraction

import mpmath

type ExactOrReal = Fraction | int | float | mpmath.mpf


def as_fraction(value: Fraction | int | str) -> Fraction:
    """Parse an exact rational from an integer, a Fraction, or a 'p/q' (or decimal) string."""
    if isinstance(value, bool):
        message = f"Expected an exact rational, received the boolean {value}."
        raise TypeError(message)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exception:
            message = f"Could not parse '{value}' as an exact rational of the form 'p/q'."
            raise ValueError(message) from exception

    message = f"Expected an exact rational (int, Fraction or 'p/q' string), received {type(value).__name__}."
    raise TypeError(message)


def format_fraction(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def log_fraction(value: Fraction | int) -> float:
    """Natural logarithm of a positive rational; safe for numerators and denominators of any size."""
    value = Fraction(value)
    if value <= 0:
        message = f"Cannot take the logarithm of the non-positive rational {format_fraction(value)}."
        raise ValueError(message)
    return math.log(value.numerator) - math.log(value.denominator)


def log_positive(value: ExactOrReal) -> float:
    """Natural logarithm of a positive exact, double or mpmath quantity."""
    if isinstance(value, (Fraction, int)):
        return log_fraction(value)
    if isinstance(value, mpmath.mpf):
        if value <= 0:
            message = f"Cannot take the logarithm of the non-positive value {value}."
            raise ValueError(message)
        return float(mpmath.log(value))
    if value <= 0:
        message = f"Cannot take the logarithm of the non-positive value {value}."
        raise ValueError(message)
    return math.log(value)


def to_mpf(value: ExactOrReal) -> mpmath.mpf:
    """Convert to an mpmath real at the current working precision."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def is_integral(value: Fraction | int | float) -> bool:
    if isinstance(value, float):
        return value.is_integer()
    return Fraction(value).denominator == 1
