"""Symbolic coding of points, cylinder intervals with exact or outward-rounded endpoints, and the diameter bounds."""

import dataclasses
import math
import random
import traceback
import uuid
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Literal

import mpmath
import tqdm

from ._config import get_default_precision_bits
from ._error_collection import _collect_error
from ._exceptions import BudgetExceededError, ExceptionalOrbitError, ExceptionalSetError, HypothesisViolationError
from ._globals import (
    _DEFAULT_BIT_BUDGET,
    _DEFAULT_DECODE_ITERATION_CAP,
    _DEFAULT_DECODE_TOLERANCE,
    _DIGIT_DISPLAY_THRESHOLD,
)
from ._maps import MapSpec
from ._rationals import as_fraction, format_fraction, log_fraction, to_mpf

type Matrix = tuple[int, int, int, int]

_IDENTITY: Matrix = (1, 0, 0, 1)
_RANDOM_POINT_ATTEMPTS_PER_POINT = 100


@dataclasses.dataclass(frozen=True)
class DigitWord:
    """A finite word (i_1, ..., i_n) of positive branch indices; the empty word codes the whole interval."""

    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for position, digit in enumerate(self.digits, start=1):
            if isinstance(digit, bool) or not isinstance(digit, int) or digit < 1:
                message = f"Digits are positive integers; position {position} holds {digit!r}."
                raise ValueError(message)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def extend(self, digit: int) -> "DigitWord":
        return DigitWord(digits=self.digits + (digit,))

    @property
    def log_digits(self) -> list[float]:
        return [math.log(digit) for digit in self.digits]

    @classmethod
    def from_line(cls, line: str) -> "DigitWord":
        """Parse a comma-separated line of integers; a blank line is the empty word."""
        stripped_line = line.strip()
        if stripped_line == "":
            return cls()

        tokens = [token.strip() for token in stripped_line.split(",")]
        if any(token.startswith("exp(") for token in tokens):
            message = f"Log-scaled digits cannot be restored exactly from the line '{stripped_line}'."
            raise ValueError(message)
        try:
            digits = tuple(int(token) for token in tokens)
        except ValueError as exception:
            message = f"Could not parse the digit word line '{stripped_line}'."
            raise ValueError(message) from exception

        return cls(digits=digits)

    def to_line(self) -> str:
        """Comma-separated digits; digits above 2^63 are written as exp(log digit)."""
        return ",".join(
            str(digit) if digit <= _DIGIT_DISPLAY_THRESHOLD else f"exp({math.log(digit):.17g})" for digit in self.digits
        )


@dataclasses.dataclass(frozen=True)
class CylinderInterval:
    """
    The cylinder I_n(i_1, ..., i_n) with its diameter and the bounds C^-n / (i_1...i_n)^gamma and C^n / (...)^gamma.

    Exact cylinders hold Fractions throughout; outward cylinders hold mpmath reals with `lo` rounded down,
    `hi` and `diameter` rounded up.
    """

    word: DigitWord
    lo: Fraction | mpmath.mpf
    hi: Fraction | mpmath.mpf
    diameter: Fraction | mpmath.mpf
    bound_lo: Fraction | mpmath.mpf
    bound_hi: Fraction | mpmath.mpf
    exact: bool

    @property
    def midpoint(self) -> Fraction | mpmath.mpf:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        if self.exact:
            return self.lo < x < self.hi
        return self.lo < to_mpf(x) < self.hi

    def is_subset_of(self, other: "CylinderInterval") -> bool:
        if self.exact and other.exact:
            return other.lo <= self.lo and self.hi <= other.hi
        return to_mpf(other.lo) <= to_mpf(self.lo) and to_mpf(self.hi) <= to_mpf(other.hi)

    def satisfies_diameter_bounds(self) -> bool:
        if all(isinstance(value, Fraction) for value in (self.diameter, self.bound_lo, self.bound_hi)):
            return self.bound_lo <= self.diameter <= self.bound_hi
        return to_mpf(self.bound_lo) <= to_mpf(self.diameter) <= to_mpf(self.bound_hi)

    def to_row(self) -> dict[str, str]:
        def _format(value: Fraction | mpmath.mpf) -> str:
            if isinstance(value, Fraction):
                return format_fraction(value)
            return mpmath.nstr(value, 17)

        return {
            "word": self.word.to_line(),
            "lo": _format(self.lo),
            "hi": _format(self.hi),
            "diameter": _format(self.diameter),
            "bound_lo": _format(self.bound_lo),
            "bound_hi": _format(self.bound_hi),
        }


@dataclasses.dataclass(frozen=True)
class OrbitRecord:
    point: Fraction
    orbit: tuple[Fraction, ...]
    word: DigitWord
    derivative_logs: tuple[float, ...]


def _compose(left: Matrix, right: Matrix) -> Matrix:
    a, b, c, d = left
    e, f, g, h = right
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _endpoints_from_matrix(matrix: Matrix) -> tuple[Fraction, Fraction]:
    a, b, c, d = matrix
    image_of_zero = Fraction(b, d)
    image_of_one = Fraction(a + b, c + d)
    return min(image_of_zero, image_of_one), max(image_of_zero, image_of_one)


def _estimate_bits(map_spec: MapSpec, word: DigitWord) -> int:
    return sum(
        max(abs(coefficient) for coefficient in map_spec.branch(digit).coefficients).bit_length() + 1
        for digit in word.digits
    )


def _exact_diameter_bounds(map_spec: MapSpec, word: DigitWord) -> tuple[Fraction, Fraction]:
    digit_product = math.prod(word.digits)
    scale = Fraction(digit_product) ** int(map_spec.gamma)
    distortion_power = Fraction(map_spec.distortion_constant) ** len(word)

    return 1 / (distortion_power * scale), distortion_power / scale


def _real_diameter_bounds(map_spec: MapSpec, word: DigitWord) -> tuple[mpmath.mpf, mpmath.mpf]:
    log_digit_product = mpmath.fsum(mpmath.log(digit) for digit in word.digits)
    log_scale = to_mpf(map_spec.gamma) * log_digit_product
    log_distortion_power = len(word) * mpmath.log(to_mpf(map_spec.distortion_constant))

    return mpmath.exp(-log_distortion_power - log_scale), mpmath.exp(log_distortion_power - log_scale)


def _exact_cylinder(map_spec: MapSpec, word: DigitWord, matrix: Matrix) -> CylinderInterval:
    lo, hi = _endpoints_from_matrix(matrix=matrix)
    if map_spec.has_exact_derivative_bounds:
        bound_lo, bound_hi = _exact_diameter_bounds(map_spec=map_spec, word=word)
    else:
        with mpmath.workprec(get_default_precision_bits()):
            bound_lo, bound_hi = _real_diameter_bounds(map_spec=map_spec, word=word)

    return CylinderInterval(
        word=word, lo=lo, hi=hi, diameter=hi - lo, bound_lo=bound_lo, bound_hi=bound_hi, exact=True
    )


def _outward_cylinder(map_spec: MapSpec, word: DigitWord, precision_bits: int) -> CylinderInterval:
    iv = mpmath.iv
    previous_interval_precision = iv.prec
    iv.prec = precision_bits
    try:
        with mpmath.workprec(precision_bits):
            a, b, c, d = (iv.mpf(entry) for entry in _IDENTITY)
            log_determinant = iv.mpf(0)
            for digit in word.digits:
                e, f, g, h = (iv.mpf(entry) for entry in map_spec.branch(digit).inverse_coefficients)
                a, b, c, d = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
                log_determinant += iv.log(iv.mpf(abs(map_spec.branch(digit).determinant)))

            image_of_zero = b / d
            image_of_one = (a + b) / (c + d)
            lo = min(mpmath.mpf(image_of_zero.a), mpmath.mpf(image_of_one.a))
            hi = max(mpmath.mpf(image_of_zero.b), mpmath.mpf(image_of_one.b))

            # |M(1) - M(0)| = |det M| / |d (c + d)| keeps the diameter accurate below the endpoint resolution
            if 0 in d or 0 in (c + d):
                diameter = mpmath.fsub(hi, lo, rounding="c")
            else:
                log_diameter = log_determinant - iv.log(abs(d)) - iv.log(abs(c + d))
                diameter = mpmath.mpf(iv.exp(log_diameter).b)

            bound_lo, bound_hi = _real_diameter_bounds(map_spec=map_spec, word=word)
    finally:
        iv.prec = previous_interval_precision

    return CylinderInterval(
        word=word, lo=lo, hi=hi, diameter=diameter, bound_lo=bound_lo, bound_hi=bound_hi, exact=False
    )


def cylinder(
    map_spec: MapSpec,
    word: DigitWord,
    *,
    mode: Literal["auto", "exact", "outward"] = "auto",
    bit_budget: int = _DEFAULT_BIT_BUDGET,
) -> CylinderInterval:
    """
    Compute the cylinder I_n(word) as the image of [0, 1] under the composed inverse branches.

    Parameters
    ----------
    map_spec : MapSpec
        The Markov-Rényi map.
    word : DigitWord
        A nonempty digit word.
    mode : "auto", "exact", or "outward", default: "auto"
        Exact rational endpoints, outward-rounded high-precision endpoints, or exact whenever the estimated size of
        the rational representation stays within `bit_budget`.
    bit_budget : int, default: 2**20
        The largest number of bits an exact representation may need.

    Returns
    -------
    CylinderInterval
        The cylinder with its diameter and the two-sided diameter bounds.
    """
    if len(word) == 0:
        message = "A cylinder needs a nonempty word; the empty word codes the whole interval."
        raise ValueError(message)

    estimated_bits = _estimate_bits(map_spec=map_spec, word=word)
    use_exact = mode == "exact" or (mode == "auto" and estimated_bits <= bit_budget)
    if use_exact and estimated_bits > bit_budget:
        message = (
            f"The exact cylinder of a word of length {len(word)} needs about {estimated_bits} bits, "
            f"beyond the bit budget of {bit_budget}."
        )
        raise BudgetExceededError(message)

    if use_exact:
        matrix = _IDENTITY
        for digit in word.digits:
            matrix = _compose(left=matrix, right=map_spec.branch(digit).inverse_coefficients)
        return _exact_cylinder(map_spec=map_spec, word=word, matrix=matrix)

    return _outward_cylinder(map_spec=map_spec, word=word, precision_bits=get_default_precision_bits())


def encode(map_spec: MapSpec, x: Fraction | int | str, *, depth: int) -> OrbitRecord:
    """
    Return the first `depth` digits and the exact orbit T^0(x), ..., T^(depth-1)(x).

    Raises ExceptionalOrbitError naming the step k at which T^k(x) lies in the exceptional set.
    """
    if depth < 0:
        message = f"The coding depth must be non-negative; received {depth}."
        raise ValueError(message)

    point = as_fraction(x)

    current_point = point
    orbit = []
    digits = []
    derivative_logs = []
    for step in range(depth):
        try:
            digit = map_spec.locate(current_point)
        except ExceptionalSetError as exception:
            message = f"The orbit of {format_fraction(point)} leaves the repeller at step {step}: {exception}"
            raise ExceptionalOrbitError(message, step=step) from exception

        branch = map_spec.branch(digit)
        orbit.append(current_point)
        digits.append(digit)
        derivative_logs.append(log_fraction(branch.derivative(current_point)))
        current_point = branch.apply(current_point)

    return OrbitRecord(
        point=point, orbit=tuple(orbit), word=DigitWord(digits=tuple(digits)), derivative_logs=tuple(derivative_logs)
    )


def random_repeller_points(
    map_spec: MapSpec, *, count: int, depth: int, seed: int = 0, denominator_bits: int = 128
) -> list[OrbitRecord]:
    """
    Draw rationals p/q with q of `denominator_bits` bits whose first `depth` orbit points avoid the exceptional set.

    Draws that leave the repeller too early are skipped; the result is reproducible for a given seed.
    """
    if count < 0 or denominator_bits < 2:
        message = f"Expected count >= 0 and denominator_bits >= 2; received {count} and {denominator_bits}."
        raise ValueError(message)

    random_number_generator = random.Random(seed)
    orbit_records = []
    for _ in range(_RANDOM_POINT_ATTEMPTS_PER_POINT * max(count, 1)):
        if len(orbit_records) == count:
            break

        denominator = random_number_generator.getrandbits(denominator_bits) | (1 << (denominator_bits - 1))
        numerator = random_number_generator.randrange(1, denominator)
        try:
            orbit_records.append(encode(map_spec, Fraction(numerator, denominator), depth=depth))
        except ExceptionalSetError:
            continue

    if len(orbit_records) < count:
        message = (
            f"Only {len(orbit_records)} of {count} random rationals kept their orbit in the repeller for {depth} steps "
            f"on map '{map_spec.name}'; try a larger denominator_bits."
        )
        raise ExceptionalSetError(message)

    return orbit_records


def decode(
    map_spec: MapSpec,
    digits: Iterable[int],
    *,
    tolerance: float = _DEFAULT_DECODE_TOLERANCE,
    exact: bool = False,
    iteration_cap: int = _DEFAULT_DECODE_ITERATION_CAP,
) -> Fraction | CylinderInterval:
    """
    Realize a digit stream as a point: the midpoint of the first cylinder whose diameter falls below `tolerance`.

    Parameters
    ----------
    map_spec : MapSpec
        The Markov-Rényi map.
    digits : iterable of int
        A finite or infinite digit stream (for example `itertools.repeat(1)`).
    tolerance : float, default: 1e-12
        Stop at the least depth whose cylinder diameter is below this value.
    exact : bool, default: False
        Return the deepest cylinder itself instead of its midpoint.
    iteration_cap : int, default: 10000
        Cylinders that have not contracted below `tolerance` after this many digits indicate a violated hypothesis.
    """
    if tolerance <= 0:
        message = f"The decode tolerance must be positive; received {tolerance}."
        raise ValueError(message)

    matrix = _IDENTITY
    consumed_digits = []
    for digit in digits:
        if len(consumed_digits) == iteration_cap:
            message = (
                f"Cylinders failed to contract below {tolerance} within {iteration_cap} digits; "
                "the map may violate the expansion hypothesis."
            )
            raise HypothesisViolationError(message)

        consumed_digits.append(digit)
        matrix = _compose(left=matrix, right=map_spec.branch(digit).inverse_coefficients)
        lo, hi = _endpoints_from_matrix(matrix=matrix)
        if hi - lo < tolerance:
            break

    if len(consumed_digits) == 0:
        message = "Cannot decode an empty digit stream."
        raise ValueError(message)

    deepest_cylinder = _exact_cylinder(map_spec=map_spec, word=DigitWord(digits=tuple(consumed_digits)), matrix=matrix)
    if exact:
        return deepest_cylinder
    return deepest_cylinder.midpoint


def iterate_cylinders(map_spec: MapSpec, *, maximum_length: int, maximum_digit: int) -> Iterator[CylinderInterval]:
    """
    Yield the exact cylinders of every word with 1 <= length <= `maximum_length` and digits <= `maximum_digit`.

    Words come in lexicographic order, each prefix before its extensions.
    """
    inverse_matrices = {digit: map_spec.branch(digit).inverse_coefficients for digit in range(1, maximum_digit + 1)}

    def _descend(prefix: tuple[int, ...], matrix: Matrix) -> Iterator[CylinderInterval]:
        for digit in range(1, maximum_digit + 1):
            word_digits = prefix + (digit,)
            child_matrix = _compose(left=matrix, right=inverse_matrices[digit])
            yield _exact_cylinder(map_spec=map_spec, word=DigitWord(digits=word_digits), matrix=child_matrix)
            if len(word_digits) < maximum_length:
                yield from _descend(prefix=word_digits, matrix=child_matrix)

    if maximum_length >= 1:
        yield from _descend(prefix=(), matrix=_IDENTITY)


def compute_cylinders(
    map_spec: MapSpec,
    words: list[DigitWord],
    *,
    mode: Literal["auto", "exact", "outward"] = "auto",
    bit_budget: int = _DEFAULT_BIT_BUDGET,
    maximum_number_of_workers: int = 1,
) -> list[CylinderInterval]:
    """
    Compute many cylinders, in parallel when requested; the result is always in the order of `words`.

    Parameters
    ----------
    map_spec : MapSpec
        The Markov-Rényi map.
    words : list of DigitWord
        The nonempty words to evaluate.
    mode : "auto", "exact", or "outward", default: "auto"
        See `cylinder`.
    bit_budget : int, default: 2**20
        See `cylinder`.
    maximum_number_of_workers : int, default: 1
        The maximum number of workers to distribute chunks of words across.
    """
    if maximum_number_of_workers < 1:
        message = f"The maximum number of workers must be at least 1; received {maximum_number_of_workers}."
        raise ValueError(message)

    if maximum_number_of_workers == 1 or len(words) < 2:
        return [
            cylinder(map_spec, word, mode=mode, bit_budget=bit_budget)
            for word in tqdm.tqdm(
                iterable=words,
                total=len(words),
                desc="Computing cylinders",
                position=0,
                leave=False,
                mininterval=3.0,
                smoothing=0,
                unit="word",
            )
        ]

    chunk_size = math.ceil(len(words) / maximum_number_of_workers)
    chunks = [words[start : start + chunk_size] for start in range(0, len(words), chunk_size)]

    results_by_chunk_index = dict()
    with ProcessPoolExecutor(max_workers=maximum_number_of_workers) as executor:
        future_to_chunk_index = {
            executor.submit(
                _multi_worker_compute_cylinders,
                map_spec=map_spec,
                words=chunk,
                mode=mode,
                bit_budget=bit_budget,
                chunk_index=chunk_index,
            ): chunk_index
            for chunk_index, chunk in enumerate(chunks)
        }

        progress_bar_iterable = tqdm.tqdm(
            iterable=as_completed(future_to_chunk_index),
            total=len(future_to_chunk_index),
            desc=f"Computing cylinders using {maximum_number_of_workers} workers",
            position=0,
            leave=False,
            mininterval=3.0,
            smoothing=0,
            unit="chunk",
        )
        for future in progress_bar_iterable:
            results_by_chunk_index[future_to_chunk_index[future]] = future.result()

    return [
        cylinder_interval
        for chunk_index in range(len(chunks))
        for cylinder_interval in results_by_chunk_index[chunk_index]
    ]


# Function cannot be covered because the calls occur on subprocesses
# pragma: no cover
def _multi_worker_compute_cylinders(
    *,
    map_spec: MapSpec,
    words: list[DigitWord],
    mode: str,
    bit_budget: int,
    chunk_index: int,
) -> list[CylinderInterval]:
    """Evaluate one chunk on a worker; failures are written to the error collection before propagating."""
    try:
        return [cylinder(map_spec, word, mode=mode, bit_budget=bit_budget) for word in words]
    except Exception as exception:
        message = (
            f"Chunk {chunk_index} of cylinders for map '{map_spec.name}' failed!\n\n"
            f"{type(exception)}: {exception}\n\n"
            f"{traceback.format_exc()}"
        )
        task_id = str(uuid.uuid4())[:5]
        _collect_error(message=message, error_type="parallel", task_id=task_id)
        raise
