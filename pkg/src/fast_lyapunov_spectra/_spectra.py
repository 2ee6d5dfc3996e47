"""Closed-form dimension formulas of the fast Lyapunov spectra, keyed by gamma and the scaling invariants."""

import dataclasses
import math
from fractions import Fraction
from typing import Literal

from ._exceptions import HypothesisViolationError
from ._rationals import format_fraction
from ._scaling import ScalingInvariants

type Real = Fraction | int | float


@dataclasses.dataclass(frozen=True)
class SpectrumQuery:
    gamma: Real
    invariants: ScalingInvariants
    alpha_class: Literal["zero", "finite", "infinite"]
    which: Literal["fast", "upper", "lower", "classical_at_infinity"] = "fast"


@dataclasses.dataclass(frozen=True)
class SpectrumValue:
    """A dimension in [0, 1], or an empty level set (`empty` with `dimension` None)."""

    dimension: Fraction | float | None
    formula_tag: str
    inputs: dict = dataclasses.field(default_factory=dict)
    empty: bool = False
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        dimension_exact = None
        if isinstance(self.dimension, Fraction):
            dimension_exact = format_fraction(self.dimension)

        return {
            "dimension": None if self.dimension is None else float(self.dimension),
            "dimension_exact": dimension_exact,
            "empty": self.empty,
            "formula_tag": self.formula_tag,
            "inputs": {key: _json_number(value) for key, value in self.inputs.items()},
            "notes": list(self.notes),
        }


def _json_number(value: object) -> object:
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def _exact_or_float(value: Real) -> Fraction | float:
    if isinstance(value, bool):
        message = f"Expected a real number, received the boolean {value}."
        raise TypeError(message)
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if math.isfinite(value) and float(value).is_integer():
        return Fraction(int(value))
    return float(value)


def _dimension_formula(gamma: Real, growth: Real) -> Fraction | float:
    """1 / ((gamma - 1) * growth + 1); an infinite growth constant gives the limit 0."""
    growth = _exact_or_float(growth)
    if isinstance(growth, float) and math.isinf(growth):
        return Fraction(0)

    gamma = _exact_or_float(gamma)
    return 1 / ((gamma - 1) * growth + 1)


def _require_gamma(gamma: Real) -> None:
    if not gamma > 1:
        message = f"The derivative exponent gamma must exceed 1; received {gamma}."
        raise ValueError(message)


def _require_superlinear(invariants: ScalingInvariants) -> None:
    if not invariants.superlinear:
        message = (
            "The scaling function fails the superlinear growth check psi(n)/n -> infinity at the sampled horizon; "
            "the fast Lyapunov spectrum formulas do not apply."
        )
        raise HypothesisViolationError(message)


def fast_spectrum(query: SpectrumQuery) -> SpectrumValue:
    """
    The fast Lyapunov spectrum F_psi(alpha).

    1 at alpha = 0; at finite alpha 1/((gamma-1)beta+1) when psi is equivalent to an increasing function and an empty
    level set otherwise; 1/((gamma-1)B+1) at alpha = infinity.
    """
    if query.which != "fast":
        message = f"fast_spectrum answers queries with which='fast'; received '{query.which}'."
        raise ValueError(message)
    _require_gamma(query.gamma)
    _require_superlinear(query.invariants)

    invariants = query.invariants
    match query.alpha_class:
        case "zero":
            return SpectrumValue(
                dimension=Fraction(1),
                formula_tag="fast:alpha_zero",
                inputs={"gamma": query.gamma},
                notes=("the level set has full Lebesgue measure sum |I_n|",),
            )
        case "finite":
            inputs = {"gamma": query.gamma, "beta": invariants.beta, "equiv_increasing": invariants.equiv_increasing}
            if not invariants.equiv_increasing:
                return SpectrumValue(
                    dimension=None,
                    empty=True,
                    formula_tag="fast:finite_alpha",
                    inputs=inputs,
                    notes=("empty level set: psi failed the HEURISTIC equivalence-to-increasing test",),
                )
            return SpectrumValue(
                dimension=_dimension_formula(gamma=query.gamma, growth=invariants.beta),
                formula_tag="fast:finite_alpha",
                inputs=inputs,
                notes=("nonemptiness rests on the HEURISTIC equivalence-to-increasing test",),
            )
        case "infinite":
            return SpectrumValue(
                dimension=_dimension_formula(gamma=query.gamma, growth=invariants.B),
                formula_tag="fast:infinite_alpha",
                inputs={"gamma": query.gamma, "B": invariants.B},
            )

    message = f"Unknown alpha class '{query.alpha_class}'; choose one of ('zero', 'finite', 'infinite')."
    raise ValueError(message)


def upper_lower_spectrum(query: SpectrumQuery) -> SpectrumValue:
    """Upper spectrum 1/((gamma-1)b+1) and lower spectrum 1/((gamma-1)B+1) for every alpha > 0; both are 1 at 0."""
    if query.which not in ("upper", "lower"):
        message = f"upper_lower_spectrum answers queries with which='upper' or 'lower'; received '{query.which}'."
        raise ValueError(message)
    _require_gamma(query.gamma)
    _require_superlinear(query.invariants)

    if query.alpha_class == "zero":
        return SpectrumValue(
            dimension=Fraction(1), formula_tag=f"{query.which}:alpha_zero", inputs={"gamma": query.gamma}
        )

    if query.which == "upper":
        growth_name, growth = "b", query.invariants.b
    else:
        growth_name, growth = "B", query.invariants.B

    return SpectrumValue(
        dimension=_dimension_formula(gamma=query.gamma, growth=growth),
        formula_tag=f"{query.which}:positive_alpha",
        inputs={"gamma": query.gamma, growth_name: growth},
    )


def lyapunov_at_infinity(gamma: Real) -> SpectrumValue:
    """L(infinity) = 1/gamma, the classical Lyapunov spectrum at infinity."""
    _require_gamma(gamma)

    return SpectrumValue(
        dimension=1 / _exact_or_float(gamma), formula_tag="classical_at_infinity", inputs={"gamma": gamma}
    )


def evaluate_spectrum(query: SpectrumQuery) -> SpectrumValue:
    match query.which:
        case "fast":
            return fast_spectrum(query)
        case "upper" | "lower":
            return upper_lower_spectrum(query)
        case "classical_at_infinity":
            return lyapunov_at_infinity(query.gamma)

    message = f"Unknown spectrum '{query.which}'; choose one of ('fast', 'upper', 'lower', 'classical_at_infinity')."
    raise ValueError(message)


def auxiliary_dimensions(
    gamma: Real,
    kind: Literal["gamma_infinity_bound", "d_set", "digits_to_infinity", "lambda_infinity", "growth_rate"],
    **parameters: Real,
) -> SpectrumValue:
    """
    Dimension formulas of the auxiliary sets.

    gamma_infinity_bound (beta in [1, inf]) and d_set (c > 1) give 1/((gamma-1)x+1);
    digits_to_infinity and lambda_infinity give 1/gamma; growth_rate (xi >= 0) gives 1/(gamma + (gamma-1)xi).
    """
    _require_gamma(gamma)

    match kind:
        case "gamma_infinity_bound":
            beta = parameters.get("beta")
            if beta is None or not beta >= 1:
                message = f"The Gamma_infinity bound needs beta in [1, inf]; received {beta}."
                raise ValueError(message)
            dimension = _dimension_formula(gamma=gamma, growth=beta)
        case "d_set":
            c = parameters.get("c")
            if c is None or not c > 1:
                message = f"The D-set dimension needs c > 1; received {c}."
                raise ValueError(message)
            dimension = _dimension_formula(gamma=gamma, growth=c)
        case "digits_to_infinity" | "lambda_infinity":
            dimension = 1 / _exact_or_float(gamma)
        case "growth_rate":
            xi = parameters.get("xi")
            if xi is None or not xi >= 0:
                message = f"The growth-rate set dimension needs xi >= 0; received {xi}."
                raise ValueError(message)
            xi = _exact_or_float(xi)
            if isinstance(xi, float) and math.isinf(xi):
                dimension = Fraction(0)
            else:
                exact_gamma = _exact_or_float(gamma)
                dimension = 1 / (exact_gamma + (exact_gamma - 1) * xi)
        case _:
            message = (
                f"Unknown auxiliary set '{kind}'; choose one of "
                "('gamma_infinity_bound', 'd_set', 'digits_to_infinity', 'lambda_infinity', 'growth_rate')."
            )
            raise ValueError(message)

    return SpectrumValue(dimension=dimension, formula_tag=f"auxiliary:{kind}", inputs={"gamma": gamma, **parameters})


def is_continuous_at_infinity(gamma: Real, invariants: ScalingInvariants, *, tolerance: float = 1e-9) -> bool:
    """The fast spectrum is continuous at infinity exactly when beta = B, compared at the formula level."""
    finite_value = _dimension_formula(gamma=gamma, growth=invariants.beta)
    infinite_value = _dimension_formula(gamma=gamma, growth=invariants.B)

    return abs(float(finite_value) - float(infinite_value)) < tolerance
