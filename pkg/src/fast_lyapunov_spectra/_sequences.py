"""Positive real sequences s_n, t_n given in closed form or as tables, held through log s_n in high precision."""

import dataclasses
import math
import pathlib
from fractions import Fraction
from typing import Literal

import mpmath
import numpy as np
import pandas as pd

from ._config import get_default_precision_bits
from ._globals import _DEFAULT_BIT_BUDGET, _SEQUENCE_FAMILIES
from ._rationals import to_mpf
from ._scaling import ScalingFunction


@dataclasses.dataclass(frozen=True, eq=False)
class SequenceGenerator:
    """
    A positive sequence indexed from n = 1.

    `exp` is base^n (base 'e' by default), `double_exp` is k * b^(c^n), `constant` is v, and `table` lists log values.
    """

    family: Literal["exp", "double_exp", "constant", "table"]
    parameters: dict = dataclasses.field(default_factory=dict)
    log_table: tuple[mpmath.mpf, ...] | None = None
    horizon: int | None = None

    @property
    def description(self) -> str:
        if self.family == "table":
            return f"table[{self.horizon}]"
        return ":".join([self.family, *(str(value) for value in self.parameters.values())])

    def log_value(self, n: int) -> mpmath.mpf:
        """log of the n-th term at the current mpmath working precision."""
        if n < 1:
            message = f"Sequences are indexed from n=1; received n={n}."
            raise ValueError(message)
        if self.horizon is not None and n > self.horizon:
            message = f"Sequence ({self.description}) is defined only up to n={self.horizon}; requested n={n}."
            raise ValueError(message)

        parameters = self.parameters
        match self.family:
            case "exp":
                base = parameters["base"]
                return n * (mpmath.mpf(1) if base == "e" else mpmath.log(to_mpf(base)))
            case "double_exp":
                exponent = to_mpf(parameters["exponent"]) ** n
                return mpmath.log(to_mpf(parameters["coefficient"])) + exponent * mpmath.log(to_mpf(parameters["base"]))
            case "constant":
                return mpmath.log(to_mpf(parameters["value"]))
            case "table":
                return mpmath.mpf(self.log_table[n - 1])

        message = f"Unknown sequence family '{self.family}'; choose one of {_SEQUENCE_FAMILIES}."
        raise ValueError(message)

    def log_values(self, start: int, stop: int) -> list[mpmath.mpf]:
        return [self.log_value(n) for n in range(start, stop + 1)]

    def exact_value(self, n: int) -> Fraction | None:
        """The n-th term as an exact rational when the family and its parameters allow it, else None."""
        parameters = self.parameters
        match self.family:
            case "exp":
                base = parameters["base"]
                return None if base == "e" else _as_exact(base) ** n if _as_exact(base) is not None else None
            case "double_exp":
                base, coefficient = _as_exact(parameters["base"]), _as_exact(parameters["coefficient"])
                exponent = parameters["exponent"]
                if base is None or coefficient is None or not isinstance(exponent, int):
                    return None
                if exponent**n * max(base.numerator.bit_length(), base.denominator.bit_length()) > _DEFAULT_BIT_BUDGET:
                    return None
                return coefficient * base ** (exponent**n)
            case "constant":
                return _as_exact(parameters["value"])

        return None


def _as_exact(value: object) -> Fraction | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, float) and math.isfinite(value):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            return None
    return None


def tabulate_sequence(log_values: list[mpmath.mpf] | np.ndarray) -> SequenceGenerator:
    log_table = tuple(mpmath.mpf(value) for value in log_values)
    return SequenceGenerator(family="table", log_table=log_table, horizon=len(log_table))


def load_sequence_generator(source: str | pathlib.Path) -> SequenceGenerator:
    """
    Load a sequence from 'exp[:base]', 'double_exp:b:c[:k]', 'const:v', or a CSV table with columns n and value
    (or n and log_value).
    """
    source_text = str(source).strip()
    family, _, remainder = source_text.partition(":")
    tokens = [token for token in remainder.split(":") if token != ""] if remainder else []

    match family.lower():
        case "exp" if len(tokens) <= 1:
            base = tokens[0] if tokens else "e"
            return SequenceGenerator(family="exp", parameters={"base": base if base == "e" else _parse_real(base)})
        case "double_exp" if len(tokens) in (2, 3):
            return SequenceGenerator(
                family="double_exp",
                parameters={
                    "base": _parse_real(tokens[0]),
                    "exponent": _parse_real(tokens[1]),
                    "coefficient": _parse_real(tokens[2]) if len(tokens) == 3 else 1,
                },
            )
        case "const" | "constant" if len(tokens) == 1:
            return SequenceGenerator(family="constant", parameters={"value": _parse_real(tokens[0])})

    path = pathlib.Path(source_text)
    if path.is_file():
        frame = pd.read_csv(filepath_or_buffer=path)
        if "n" not in frame.columns or not ({"value", "log_value"} & set(frame.columns)):
            message = f"Sequence table '{path}' must have the columns 'n' and 'value' (or 'log_value')."
            raise ValueError(message)
        if "log_value" in frame.columns:
            return tabulate_sequence(log_values=frame["log_value"].to_numpy(dtype=float))
        values = frame["value"].to_numpy(dtype=float)
        if (values <= 0).any():
            message = f"Sequence table '{path}' holds non-positive values."
            raise ValueError(message)
        return tabulate_sequence(log_values=np.log(values))

    message = f"Could not read the sequence '{source_text}'; expected exp, double_exp:b:c[:k], const:v or a CSV path."
    raise ValueError(message)


def _parse_real(token: str) -> Fraction | float:
    try:
        return Fraction(token)
    except ValueError:
        return float(token)


@dataclasses.dataclass(frozen=True, eq=False)
class SequencePair:
    s: SequenceGenerator
    t: SequenceGenerator


@dataclasses.dataclass(frozen=True)
class SequencePairReport:
    horizon: int
    theta_hat: float
    sum_log_growing: bool
    minimum_at_least_two: bool

    @property
    def passes(self) -> bool:
        return self.theta_hat > 0 and self.sum_log_growing and self.minimum_at_least_two

    @property
    def failed_hypotheses(self) -> list[str]:
        failures = []
        if not self.theta_hat > 0:
            failures.append("inf s_n/t_n > 0")
        if not self.sum_log_growing:
            failures.append("sum log s_k / n -> infinity")
        if not self.minimum_at_least_two:
            failures.append("s_n, t_n >= 2")
        return failures


def check_sequence_pair(pair: SequencePair, *, horizon: int) -> SequencePairReport:
    """
    Check at finite horizon that s_n/t_n stays bounded below, that sum log s_k / n keeps growing, and s_n, t_n >= 2.
    """
    if horizon < 2:
        message = f"Sequence checks need a horizon of at least 2; received {horizon}."
        raise ValueError(message)

    with mpmath.workprec(get_default_precision_bits()):
        log_s = pair.s.log_values(start=1, stop=horizon)
        log_t = pair.t.log_values(start=1, stop=horizon)
        log_ratio_minimum = min(s - t for s, t in zip(log_s, log_t))
        theta_hat = float(mpmath.exp(log_ratio_minimum))
        minimum_at_least_two = min(min(log_s), min(log_t)) >= mpmath.log(2)

        # Double-exponential sequences overflow doubles, so the averages stay in high precision
        averages = []
        running_sum = mpmath.mpf(0)
        for n, value in enumerate(log_s, start=1):
            running_sum += value
            averages.append(running_sum / n)
        half_horizon = horizon // 2
        sum_log_growing = min(averages[half_horizon:]) > averages[half_horizon - 1]

    return SequencePairReport(
        horizon=horizon,
        theta_hat=theta_hat,
        sum_log_growing=bool(sum_log_growing),
        minimum_at_least_two=bool(minimum_at_least_two),
    )


def exponential_sequence_pair(base: Fraction | float | str = "e") -> SequencePair:
    sequence = SequenceGenerator(family="exp", parameters={"base": base})
    return SequencePair(s=sequence, t=sequence)


def level_set_sequence(psi: ScalingFunction, alpha: float, *, horizon: int) -> SequencePair:
    """s_1 = t_1 = e^(alpha psi(1) + 1) and s_n = t_n = e^(alpha (psi(n) - psi(n-1)) + 1)."""
    log_psi = psi.log_values(start=1, stop=horizon)
    with mpmath.workprec(get_default_precision_bits()):
        psi_values = [mpmath.exp(mpmath.mpf(float(value))) for value in log_psi]
        increments = [psi_values[0]] + [current - previous for previous, current in zip(psi_values, psi_values[1:])]
        sequence = tabulate_sequence(log_values=[alpha * increment + 1 for increment in increments])

    return SequencePair(s=sequence, t=sequence)


def growth_rate_sequence(phi: ScalingFunction, *, horizon: int) -> SequencePair:
    """s_n = t_n = 2 e^(phi(n))."""
    log_phi = phi.log_values(start=1, stop=horizon)
    with mpmath.workprec(get_default_precision_bits()):
        sequence = tabulate_sequence(
            log_values=[mpmath.log(2) + mpmath.exp(mpmath.mpf(float(value))) for value in log_phi]
        )

    return SequencePair(s=sequence, t=sequence)


def d_set_sequence(b: Fraction | float, c: Fraction | float) -> SequencePair:
    """s_n = t_n = 2 b^(c^n)."""
    sequence = SequenceGenerator(family="double_exp", parameters={"base": b, "exponent": c, "coefficient": 2})
    return SequencePair(s=sequence, t=sequence)


def fsw_sequence_pair(log_d: list[mpmath.mpf] | np.ndarray) -> SequencePair:
    """s_n = t_n = 2 d_n from the logs of an envelope sequence d_n."""
    with mpmath.workprec(get_default_precision_bits()):
        sequence = tabulate_sequence(log_values=[mpmath.log(2) + mpmath.mpf(value) for value in log_d])

    return SequencePair(s=sequence, t=sequence)
