"""Lyapunov and fast Lyapunov exponent traces, the chain-rule bound, and the digit statistics kappa and tau."""

import dataclasses
import math
from fractions import Fraction

import numpy as np
import pandas as pd

from ._coding import DigitWord, OrbitRecord, cylinder, encode
from ._maps import MapSpec
from ._rationals import log_positive
from ._scaling import ScalingFunction
from ._summation import compensated_cumulative_sum

_CHAIN_RULE_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True, eq=False)
class ExponentTrace:
    """Per-prefix sums of log|T'| along an orbit and of log a_k over its digits; index i holds the prefix n = i + 1."""

    word: DigitWord
    log_deriv_sum: np.ndarray
    digit_log_sum: np.ndarray

    @property
    def depth(self) -> int:
        return len(self.word)

    @property
    def log_pi(self) -> np.ndarray:
        """log(a_1 ... a_n) per prefix."""
        return self.digit_log_sum

    @property
    def lyapunov_partials(self) -> np.ndarray:
        return self.log_deriv_sum / np.arange(1, self.depth + 1)

    def to_frame(self, psi: ScalingFunction | None = None) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "n": np.arange(1, self.depth + 1),
                "log_deriv_sum": self.log_deriv_sum,
                "digit_log_sum": self.digit_log_sum,
                "lyapunov_partial": self.lyapunov_partials,
            }
        )
        if psi is not None:
            frame["fast_partial"] = fast_exponent_partials(self, psi).values

        return frame


def trace_from_orbit(orbit_record: OrbitRecord) -> ExponentTrace:
    return ExponentTrace(
        word=orbit_record.word,
        log_deriv_sum=compensated_cumulative_sum(orbit_record.derivative_logs),
        digit_log_sum=compensated_cumulative_sum(orbit_record.word.log_digits),
    )


def trace(map_spec: MapSpec, x: Fraction | int | str, *, depth: int) -> ExponentTrace:
    """
    Trace log|(T^n)'(x)| and log(a_1...a_n) for n = 1, ..., depth along the exact orbit of x.

    Raises ExceptionalOrbitError when the orbit meets the exceptional set before `depth`.
    """
    return trace_from_orbit(orbit_record=encode(map_spec, x, depth=depth))


def trace_from_word(map_spec: MapSpec, word: DigitWord) -> ExponentTrace:
    """Trace the orbit of the midpoint of the exact cylinder of `word`, whose coding starts with `word`."""
    if len(word) == 0:
        return ExponentTrace(word=word, log_deriv_sum=np.zeros(0), digit_log_sum=np.zeros(0))

    midpoint = cylinder(map_spec, word, mode="exact", bit_budget=2**62).midpoint
    return trace(map_spec, midpoint, depth=len(word))


def chain_rule_gap(trace: ExponentTrace, gamma: Fraction | float) -> np.ndarray:
    """
    gap[n] = |gamma * log(a_1...a_n) - log|(T^n)'||, one value per prefix and empty for a trace of depth 0.

    The gaps do not depend on the distortion constant C; the bound gap[n] <= n log C is checked by
    `chain_rule_violations`, which takes C.
    """
    return np.abs(float(gamma) * trace.digit_log_sum - trace.log_deriv_sum)


def chain_rule_violations(
    trace: ExponentTrace,
    gamma: Fraction | float,
    distortion_constant: Fraction | float,
    *,
    tolerance: float = _CHAIN_RULE_TOLERANCE,
) -> list[int]:
    """Return the prefixes n at which the chain-rule gap exceeds n log C."""
    gaps = chain_rule_gap(trace=trace, gamma=gamma)
    allowed = np.arange(1, trace.depth + 1) * log_positive(distortion_constant)
    slack = tolerance * np.maximum(1.0, allowed)

    return [int(index) + 1 for index in np.flatnonzero(gaps > allowed + slack)]


@dataclasses.dataclass(frozen=True, eq=False)
class FastExponentPartials:
    """
    lambda_psi partials log|(T^n)'| / psi(n) with their tail extremes.

    `tail_sup[i]` and `tail_inf[i]` are the extremes over prefixes i+1, ..., depth: the truncated limsup and liminf.
    """

    values: np.ndarray
    tail_sup: np.ndarray
    tail_inf: np.ndarray

    @property
    def upper_estimate(self) -> float:
        return float(self.tail_sup[-1]) if len(self.values) else math.nan

    @property
    def lower_estimate(self) -> float:
        return float(self.tail_inf[-1]) if len(self.values) else math.nan


def fast_exponent_partials(
    trace: ExponentTrace, psi: ScalingFunction, *, window: int | None = None
) -> FastExponentPartials:
    """
    Compute the fast Lyapunov exponent partials against the scaling function psi.

    Parameters
    ----------
    trace : ExponentTrace
        The exponent trace.
    psi : ScalingFunction
        The scaling function; must be defined up to the trace depth.
    window : int, optional
        When given, the tail extremes are only taken over the final `window` prefixes.
    """
    if trace.depth == 0:
        empty = np.zeros(0)
        return FastExponentPartials(values=empty, tail_sup=empty, tail_inf=empty)

    log_psi = psi.log_values(start=1, stop=trace.depth)
    values = trace.log_deriv_sum * np.exp(-log_psi)

    tail = values if window is None else values[-window:]
    tail_sup = np.maximum.accumulate(tail[::-1])[::-1]
    tail_inf = np.minimum.accumulate(tail[::-1])[::-1]
    if window is not None:
        padding = np.full(len(values) - len(tail), np.nan)
        tail_sup = np.concatenate([padding, tail_sup])
        tail_inf = np.concatenate([padding, tail_inf])

    return FastExponentPartials(values=values, tail_sup=tail_sup, tail_inf=tail_inf)


@dataclasses.dataclass(frozen=True, eq=False)
class DigitStatistics:
    """
    kappa and tau partials of a digit word.

    `tau_partial[i]` belongs to the prefix n = i + 1 and is NaN where log(a_1...a_n) = 0 (tau is undefined there).
    """

    kappa_partial: np.ndarray
    tau_partial: np.ndarray
    window: int
    kappa_estimate: float
    tau_estimate: float
    kappa_running: float
    tau_running: float

    @property
    def undefined_tau_prefixes(self) -> list[int]:
        return [int(index) + 1 for index in np.flatnonzero(np.isnan(self.tau_partial))]


def digit_statistics(word: DigitWord, *, window: int | None = None) -> DigitStatistics:
    """
    Compute kappa_n = log(a_1...a_n)/n and tau_n = 1 + log a_(n+1) / log(a_1...a_n) with windowed limsup estimates.

    Parameters
    ----------
    word : DigitWord
        A word of length at least 2.
    window : int, optional
        The number of final prefixes the limsup estimates use. Defaults to a quarter of the word length.
    """
    if len(word) < 2:
        message = f"Digit statistics need a word of length at least 2; received length {len(word)}."
        raise ValueError(message)

    log_digits = np.asarray(word.log_digits, dtype=float)
    log_products = compensated_cumulative_sum(log_digits)
    kappa_partial = log_products / np.arange(1, len(word) + 1)

    with np.errstate(divide="ignore", invalid="ignore"):
        tau_partial = np.where(log_products[:-1] > 0, 1 + log_digits[1:] / log_products[:-1], np.nan)

    window = window or max(1, len(word) // 4)
    kappa_window = kappa_partial[-window:]
    tau_window = tau_partial[-min(window, len(tau_partial)) :]

    def _nanmax(values: np.ndarray) -> float:
        return math.nan if np.isnan(values).all() else float(np.nanmax(values))

    return DigitStatistics(
        kappa_partial=kappa_partial,
        tau_partial=tau_partial,
        window=window,
        kappa_estimate=float(kappa_window.max()),
        tau_estimate=_nanmax(tau_window),
        kappa_running=float(kappa_partial.max()),
        tau_running=_nanmax(tau_partial),
    )
