"""Basic-interval trees of E({s_n}, {t_n}), covering-based dimension estimates, and the truncated dimension quotient."""

import dataclasses
import functools
import math
import traceback
import uuid
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction

import mpmath
import numpy as np
import pandas as pd
import tqdm
from pydantic import Field, validate_call

from ._coding import _IDENTITY, DigitWord, Matrix, _compose
from ._config import get_default_precision_bits
from ._digit_constructions import digit_window
from ._error_collection import _collect_error
from ._exceptions import BudgetExceededError, ConstructionError, HypothesisViolationError
from ._globals import _DEFAULT_NODE_BUDGET
from ._maps import MapSpec
from ._rationals import log_positive
from ._sequences import SequencePair, check_sequence_pair

_FINAL_WINDOW_FRACTION = 4


@dataclasses.dataclass(frozen=True)
class BasicInterval:
    """The closed interval J_n(i_1, ..., i_n) with exact endpoints."""

    word: DigitWord
    lo: Fraction
    hi: Fraction

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo


@dataclasses.dataclass(frozen=True, eq=False)
class BasicIntervalTree:
    """
    Every basic interval of order 1, ..., depth, in lexicographic order of the digit words within each level.

    `min_gaps[n-1]` is the smallest distance between two neighbouring intervals of order n and `log_gap_bounds[n-1]`
    the logarithm of C^(-n-1) (1 + 1/theta)^(-n gamma) (s_1 ... s_n)^(-gamma), which it must dominate.
    """

    map_name: str
    depth: int
    windows: tuple[tuple[int, int], ...]
    levels: tuple[tuple[BasicInterval, ...], ...]
    theta: float
    log_gap_bounds: tuple[float, ...]

    @property
    def m(self) -> tuple[int, ...]:
        """Children per parent at each level: the number of integers in (s_n, s_n + t_n]."""
        return tuple(upper - lower + 1 for lower, upper in self.windows[: self.depth])

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    @property
    def min_gaps(self) -> tuple[Fraction, ...]:
        return tuple(_minimum_gap(level) for level in self.levels)

    @property
    def max_diameters(self) -> tuple[Fraction, ...]:
        return tuple(max(interval.diameter for interval in level) for level in self.levels)

    @property
    def gaps_dominate_bound(self) -> bool:
        return all(
            gap > 0 and log_positive(gap) >= bound for gap, bound in zip(self.min_gaps, self.log_gap_bounds)
        )

    def nesting_violations(self) -> list[tuple[int, DigitWord]]:
        """(n, word) for every interval of order n >= 2 not contained in its parent."""
        violations = []
        for n in range(2, self.depth + 1):
            children_per_parent = self.m[n - 1]
            for position, child in enumerate(self.levels[n - 1]):
                parent = self.levels[n - 2][position // children_per_parent]
                if not parent.lo <= child.lo < child.hi <= parent.hi:
                    violations.append((n, child.word))

        return violations

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "n": np.arange(1, self.depth + 1),
                "m_n": self.m,
                "min_gap": [float(gap) for gap in self.min_gaps],
                "max_diam": [float(diameter) for diameter in self.max_diameters],
                "count": self.counts,
                "log_gap_bound": self.log_gap_bounds,
            }
        )


def _minimum_gap(level: Sequence[BasicInterval]) -> Fraction:
    """Smallest distance between neighbouring intervals; non-positive when two of them overlap."""
    ordered = sorted(level, key=lambda interval: interval.lo)
    if len(ordered) < 2:
        return Fraction(1)
    return min(right.lo - left.hi for left, right in zip(ordered, ordered[1:]))


def _image(matrix: Matrix, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    a, b, c, d = matrix
    image_of_lo = (a * lo + b) / (c * lo + d)
    image_of_hi = (a * hi + b) / (c * hi + d)
    return min(image_of_lo, image_of_hi), max(image_of_lo, image_of_hi)


def _hull(map_spec: MapSpec, lower: int, upper: int) -> tuple[Fraction, Fraction]:
    """Closed hull of the branch intervals with indices lower, ..., upper."""
    intervals = [map_spec.branch(digit).interval for digit in range(lower, upper + 1)]
    return min(lo for lo, _ in intervals), max(hi for _, hi in intervals)


def _log_gap_bounds(map_spec: MapSpec, pair: SequencePair, depth: int, theta: float) -> tuple[float, ...]:
    log_distortion = log_positive(map_spec.distortion_constant)
    gamma = float(map_spec.gamma)
    with mpmath.workprec(get_default_precision_bits()):
        log_s = [float(value) for value in pair.s.log_values(start=1, stop=depth)]

    log_s_products = np.cumsum(log_s)
    return tuple(
        float(-(n + 1) * log_distortion - n * gamma * math.log1p(1 / theta) - gamma * log_s_products[n - 1])
        for n in range(1, depth + 1)
    )


def _enumerate_subtree(
    map_spec: MapSpec,
    first_digit: int,
    windows: Sequence[tuple[int, int]],
    hulls: Sequence[tuple[Fraction, Fraction]],
    depth: int,
) -> list[list[BasicInterval]]:
    """Breadth-first enumeration below one first digit; hulls[n-1] is the union the order-n intervals are images of."""
    frontier = [((first_digit,), _compose(left=_IDENTITY, right=map_spec.branch(first_digit).inverse_coefficients))]
    levels = []
    for n in range(1, depth + 1):
        if n > 1:
            lower, upper = windows[n - 1]
            inverse_matrices = [map_spec.branch(digit).inverse_coefficients for digit in range(lower, upper + 1)]
            frontier = [
                (digits + (digit,), _compose(left=matrix, right=inverse_matrix))
                for digits, matrix in frontier
                for digit, inverse_matrix in zip(range(lower, upper + 1), inverse_matrices)
            ]

        hull_lo, hull_hi = hulls[n - 1]
        level = []
        for digits, matrix in frontier:
            lo, hi = _image(matrix=matrix, lo=hull_lo, hi=hull_hi)
            level.append(BasicInterval(word=DigitWord(digits=digits), lo=lo, hi=hi))
        levels.append(level)

    return levels


def enumerate_basic_intervals(
    map_spec: MapSpec,
    pair: SequencePair,
    *,
    depth: int,
    digit_cap: int,
    node_budget: int = _DEFAULT_NODE_BUDGET,
    theta: float | None = None,
    maximum_number_of_workers: int = 1,
) -> BasicIntervalTree:
    """
    Enumerate the basic intervals J_n(i_1, ..., i_n): the union of the closed cylinders I_(n+1)(i_1, ..., i_n, k)
    over s_(n+1) < k <= s_(n+1) + t_(n+1).

    Parameters
    ----------
    map_spec : MapSpec
        The Markov-Rényi map; its branches are Möbius maps with integer coefficients, so every endpoint is exact.
    pair : SequencePair
        The digit windows (s_n, s_n + t_n].
    depth : int
        The deepest order enumerated. Windows up to depth + 1 are used.
    digit_cap : int
        The largest digit allowed in any window.
    node_budget : int, default: 10**6
        The largest number of basic intervals over all levels.
    theta : float, optional
        The constant with s_n >= theta t_n in the analytic gap bound. Defaults to min s_n / t_n over the windows used.
    maximum_number_of_workers : int, default: 1
        The maximum number of workers to distribute first-digit subtrees across.

    Raises
    ------
    ConstructionError
        When a window holds fewer than two integers or a digit above `digit_cap`.
    BudgetExceededError
        When the tree would hold more than `node_budget` intervals.
    """
    if depth < 1:
        message = f"The depth must be at least 1; received {depth}."
        raise ValueError(message)
    if maximum_number_of_workers < 1:
        message = f"The maximum number of workers must be at least 1; received {maximum_number_of_workers}."
        raise ValueError(message)

    windows = []
    for n in range(1, depth + 2):
        lower, upper = digit_window(pair=pair, n=n)
        if upper - lower + 1 < 2:
            message = f"The digit window (s_n, s_n + t_n] at n={n} holds fewer than two integers."
            raise ConstructionError(message)
        if upper > digit_cap:
            message = f"The digit window at n={n} reaches the digit {upper}, beyond the digit cap of {digit_cap}."
            raise ConstructionError(message)
        windows.append((lower, upper))

    number_of_nodes = sum(math.prod(upper - lower + 1 for lower, upper in windows[:n]) for n in range(1, depth + 1))
    if number_of_nodes > node_budget:
        message = (
            f"The tree of depth {depth} holds {number_of_nodes} basic intervals; the node budget is {node_budget}."
        )
        raise BudgetExceededError(message)

    if theta is None:
        with mpmath.workprec(get_default_precision_bits()):
            theta = float(
                mpmath.exp(min(pair.s.log_value(n) - pair.t.log_value(n) for n in range(1, depth + 2)))
            )

    hulls = [_hull(map_spec=map_spec, lower=lower, upper=upper) for lower, upper in windows[1:]]
    first_digits = list(range(windows[0][0], windows[0][1] + 1))

    if maximum_number_of_workers == 1:
        subtrees = [
            _enumerate_subtree(map_spec=map_spec, first_digit=first_digit, windows=windows, hulls=hulls, depth=depth)
            for first_digit in tqdm.tqdm(
                iterable=first_digits,
                total=len(first_digits),
                desc="Enumerating basic intervals",
                position=0,
                leave=False,
                mininterval=3.0,
                smoothing=0,
                unit="subtree",
            )
        ]
    else:
        subtrees_by_first_digit = dict()
        with ProcessPoolExecutor(max_workers=maximum_number_of_workers) as executor:
            future_to_first_digit = {
                executor.submit(
                    _multi_worker_enumerate_basic_intervals,
                    map_spec=map_spec,
                    first_digit=first_digit,
                    windows=windows,
                    hulls=hulls,
                    depth=depth,
                ): first_digit
                for first_digit in first_digits
            }

            progress_bar_iterable = tqdm.tqdm(
                iterable=as_completed(future_to_first_digit),
                total=len(future_to_first_digit),
                desc=f"Enumerating basic intervals using {maximum_number_of_workers} workers",
                position=0,
                leave=False,
                mininterval=3.0,
                smoothing=0,
                unit="subtree",
            )
            for future in progress_bar_iterable:
                subtrees_by_first_digit[future_to_first_digit[future]] = future.result()
        subtrees = [subtrees_by_first_digit[first_digit] for first_digit in first_digits]

    levels = tuple(tuple(interval for subtree in subtrees for interval in subtree[n]) for n in range(depth))
    return BasicIntervalTree(
        map_name=map_spec.name,
        depth=depth,
        windows=tuple(windows),
        levels=levels,
        theta=theta,
        log_gap_bounds=_log_gap_bounds(map_spec=map_spec, pair=pair, depth=depth, theta=theta),
    )


# Function cannot be covered because the calls occur on subprocesses
# pragma: no cover
def _multi_worker_enumerate_basic_intervals(
    *,
    map_spec: MapSpec,
    first_digit: int,
    windows: list[tuple[int, int]],
    hulls: list[tuple[Fraction, Fraction]],
    depth: int,
) -> list[list[BasicInterval]]:
    try:
        return _enumerate_subtree(map_spec=map_spec, first_digit=first_digit, windows=windows, hulls=hulls, depth=depth)
    except Exception as exception:
        message = (
            f"Basic intervals below the first digit {first_digit} for map '{map_spec.name}' failed!\n\n"
            f"{type(exception)}: {exception}\n\n"
            f"{traceback.format_exc()}"
        )
        task_id = str(uuid.uuid4())[:5]
        _collect_error(message=message, error_type="parallel", task_id=task_id)
        raise


@dataclasses.dataclass(frozen=True, eq=False)
class DimensionEstimate:
    """
    Per-n values of a dimension quotient (NaN where undefined) and their tail infima.

    The estimate is the smallest value over the final window.
    """

    kind: str
    values: np.ndarray
    window: int

    @property
    def horizon(self) -> int:
        return len(self.values)

    @property
    def tail_infimum(self) -> np.ndarray:
        """tail_infimum[i] = min over values[i:], the finite-horizon stand-in for the liminf."""
        return np.fmin.accumulate(self.values[::-1])[::-1]

    @property
    def estimate(self) -> float:
        final_window = self.values[-self.window :]
        if np.isnan(final_window).all():
            return math.nan
        return float(np.nanmin(final_window))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "horizon": self.horizon, "window": self.window, "estimate": self.estimate}


def _resolve_logs(values: Sequence | None, log_values: Sequence[float] | np.ndarray | None, name: str) -> np.ndarray:
    if (values is None) == (log_values is None):
        message = f"Provide exactly one of '{name}' and 'log_{name}'."
        raise ValueError(message)
    if log_values is not None:
        return np.asarray(log_values, dtype=float)
    return np.array([log_positive(value) for value in values], dtype=float)


def _final_window(horizon: int, window: int | None) -> int:
    window = window if window is not None else max(1, horizon // _FINAL_WINDOW_FRACTION)
    if not 1 <= window <= horizon:
        message = f"The window must lie in [1, {horizon}]; received {window}."
        raise ValueError(message)
    return window


def falconer_lower(
    m: Sequence[int],
    eps: Sequence[Fraction | float] | None = None,
    *,
    log_eps: Sequence[float] | np.ndarray | None = None,
    window: int | None = None,
) -> DimensionEstimate:
    """
    The lower bound log(m_1 ... m_(n-1)) / -log(m_n eps_n) for n >= 2, for nested families of m_n intervals per parent
    separated by gaps of at least eps_n.

    Parameters
    ----------
    m : sequence of int
        Children per parent at each level; every m_n must be at least 2.
    eps : sequence of positive reals, optional
        The gaps. Give either these or their logarithms.
    log_eps : sequence of float, optional
        log eps_n, for gaps below the double range.
    window : int, optional
        The final window the estimate is taken over. Defaults to a quarter of the horizon.

    Raises
    ------
    HypothesisViolationError
        When some m_n < 2 or the gaps are not strictly decreasing.
    """
    log_gaps = _resolve_logs(values=eps, log_values=log_eps, name="eps")
    counts = np.asarray(m, dtype=float)
    if len(counts) != len(log_gaps):
        message = f"m and eps must share a horizon; received lengths {len(counts)} and {len(log_gaps)}."
        raise ValueError(message)
    if len(counts) < 2:
        message = "The lower estimate needs at least two levels."
        raise ValueError(message)
    if (counts < 2).any():
        first_failure = int(np.flatnonzero(counts < 2)[0]) + 1
        message = f"Every level needs m_n >= 2; m_{first_failure} = {int(counts[first_failure - 1])}."
        raise HypothesisViolationError(message)
    if not (np.diff(log_gaps) < 0).all():
        message = "The gaps eps_n must be strictly decreasing."
        raise HypothesisViolationError(message)

    log_counts = np.log(counts)
    numerators = np.concatenate(([0.0], np.cumsum(log_counts)[:-1]))
    denominators = -(log_counts + log_gaps)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(denominators > 0, numerators / denominators, np.nan)
    values[0] = np.nan

    return DimensionEstimate(
        kind="falconer_lower", values=values, window=_final_window(horizon=len(values), window=window)
    )


def cover_upper(
    counts: Sequence[int],
    delta: Sequence[Fraction | float] | None = None,
    *,
    log_delta: Sequence[float] | np.ndarray | None = None,
    window: int | None = None,
) -> DimensionEstimate:
    """
    The upper bound log N_n / -log delta_n for covers by N_n sets of diameter at most delta_n.

    Raises
    ------
    HypothesisViolationError
        When the diameters are not strictly decreasing.
    """
    log_diameters = _resolve_logs(values=delta, log_values=log_delta, name="delta")
    log_counts = np.log(np.asarray(counts, dtype=float))
    if len(log_counts) != len(log_diameters):
        message = f"counts and delta must share a horizon; received lengths {len(log_counts)} and {len(log_diameters)}."
        raise ValueError(message)
    if len(log_counts) < 2 or not (np.diff(log_diameters) < 0).all():
        message = "The diameters delta_n must decrease strictly towards 0."
        raise HypothesisViolationError(message)

    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(log_diameters < 0, log_counts / -log_diameters, np.nan)

    return DimensionEstimate(
        kind="cover_upper", values=values, window=_final_window(horizon=len(values), window=window)
    )


@dataclasses.dataclass(frozen=True, eq=False)
class TruncatedDimension:
    """
    The quotient (log t_1 + ... + log t_n) / (gamma (log s_1 + ... + log s_(n+1)) - log t_(n+1)), n = 1, ..., horizon.
    """

    values: np.ndarray
    gamma: float
    window: int

    @property
    def horizon(self) -> int:
        return len(self.values)

    @property
    def tail_infimum(self) -> np.ndarray:
        return np.minimum.accumulate(self.values[::-1])[::-1]

    @property
    def final_value(self) -> float:
        return float(self.values[-1])

    @property
    def estimate(self) -> float:
        return float(self.values[-self.window :].min())

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "horizon": self.horizon,
            "window": self.window,
            "final_value": self.final_value,
            "estimate": self.estimate,
        }


def e_set_dimension_formula(
    pair: SequencePair, *, gamma: float, horizon: int, window: int | None = None
) -> TruncatedDimension:
    """
    Evaluate the dimension quotient of E({s_n}, {t_n}) up to the horizon in high precision.

    Raises
    ------
    HypothesisViolationError
        When the sequences fail their horizon checks; the message names the failed hypotheses.
    """
    if not gamma > 1:
        message = f"gamma must exceed 1; received {gamma}."
        raise ValueError(message)
    if horizon < 1:
        message = f"The horizon must be at least 1; received {horizon}."
        raise ValueError(message)

    report = check_sequence_pair(pair=pair, horizon=horizon + 1)
    if not report.passes:
        message = f"The sequences fail the hypotheses: {', '.join(report.failed_hypotheses)}."
        raise HypothesisViolationError(message)

    with mpmath.workprec(get_default_precision_bits()):
        log_s = pair.s.log_values(start=1, stop=horizon + 1)
        log_t = pair.t.log_values(start=1, stop=horizon + 1)

        values = []
        sum_log_t = mpmath.mpf(0)
        sum_log_s = log_s[0]
        for n in range(1, horizon + 1):
            sum_log_t += log_t[n - 1]
            sum_log_s += log_s[n]
            values.append(float(sum_log_t / (gamma * sum_log_s - log_t[n])))

    return TruncatedDimension(
        values=np.array(values, dtype=float), gamma=gamma, window=_final_window(horizon=horizon, window=window)
    )


@dataclasses.dataclass(frozen=True)
class ProductTupleCount:
    n: int
    k: int
    count: int
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.count <= self.bound


@functools.lru_cache(maxsize=None)
def _tuples_with_product_at_most(length: int, limit: int) -> int:
    """The number of tuples of positive integers of the given length with product at most `limit`."""
    if limit < 1:
        return 0
    if length == 1:
        return limit

    total = 0
    first = 1
    while first <= limit:
        quotient = limit // first
        last = limit // quotient
        total += (last - first + 1) * _tuples_with_product_at_most(length - 1, quotient)
        first = last + 1

    return total


@validate_call
def count_product_tuples(n: int = Field(ge=1, le=4), k: int = Field(ge=0, le=4)) -> ProductTupleCount:
    """
    Count the tuples (sigma_1, ..., sigma_n) of positive integers with 2^(kn) < sigma_1 ... sigma_n <= 2^((k+1)n).

    The count is compared with (e (k + 2) 2^(k+1))^n.
    """
    count = _tuples_with_product_at_most(n, 2 ** ((k + 1) * n)) - _tuples_with_product_at_most(n, 2 ** (k * n))
    bound = (math.e * (k + 2) * 2 ** (k + 1)) ** n

    return ProductTupleCount(n=n, k=k, count=count, bound=bound)
