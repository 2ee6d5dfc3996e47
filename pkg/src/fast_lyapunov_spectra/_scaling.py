"""Scaling functions psi and their tail invariants beta, B, b and xi, all evaluated in the log domain."""

import dataclasses
import math
import pathlib
from fractions import Fraction
from typing import Literal

import numpy as np
import pandas as pd
import yaml
from pydantic import Field, validate_call

from ._exceptions import TruncationError
from ._globals import _FACTORIAL_BLOCK_BOUNDARIES, _SCALING_FAMILIES, _XI_CAP

_DEFAULT_NOISY_HORIZON = 2**17
_EQUIVALENCE_TOLERANCE = 0.1


@dataclasses.dataclass(frozen=True, eq=False)
class ScalingFunction:
    """
    A positive scaling function psi, represented by log psi(n) for n = 1, 2, ...

    Closed-form families are unbounded (`horizon` is None); tabulated and seeded families end at `horizon`.
    """

    family: str
    parameters: dict = dataclasses.field(default_factory=dict)
    table: np.ndarray | None = None
    base: "ScalingFunction | None" = None
    horizon: int | None = None

    @property
    def description(self) -> str:
        if self.family in ("star", "scaled"):
            parameter_text = "".join(f":{value}" for value in self.parameters.values())
            return f"{self.family}{parameter_text}({self.base.description})"
        if self.family == "table":
            return f"table[{self.horizon}]"
        return ":".join([self.family, *(str(value) for value in self.parameters.values())])

    def log_values(self, start: int, stop: int) -> np.ndarray:
        """Return log psi(n) for start <= n <= stop."""
        if start < 1 or stop < start:
            message = f"Scaling functions are indexed from n=1; received the range [{start}, {stop}]."
            raise ValueError(message)
        if self.horizon is not None and stop > self.horizon:
            message = f"psi ({self.description}) is defined only up to n={self.horizon}; requested n={stop}."
            raise TruncationError(message)

        n = np.arange(start, stop + 1, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            log_values = np.asarray(self._evaluate_log(n=n, start=start, stop=stop), dtype=float)
        log_values = np.broadcast_to(log_values, n.shape).copy()

        invalid = np.isnan(log_values) | np.isneginf(log_values)
        if invalid.any():
            first_invalid = start + int(np.argmax(invalid))
            message = f"psi ({self.description}) must be positive; psi({first_invalid}) is not."
            raise ValueError(message)

        return log_values

    def log_value(self, n: int) -> float:
        return float(self.log_values(start=n, stop=n)[0])

    def _evaluate_log(self, n: np.ndarray, start: int, stop: int) -> np.ndarray | float:
        parameters = self.parameters
        match self.family:
            case "power":
                return math.log(parameters["coefficient"]) + parameters["exponent"] * np.log(n)
            case "exp":
                return math.log(parameters["coefficient"]) + n * math.log(parameters["base"])
            case "factorial_block":
                return _factorial_block_log_values(n=n.astype(np.int64))
            case "nlogn":
                return np.log(n) + np.log(np.log(n + 1))
            case "oscillating_exp":
                bases = np.where(n % 2 == 0, parameters["even_base"], parameters["odd_base"])
                return n * np.log(bases)
            case "double_exp":
                return np.power(float(parameters["exponent"]), n) * math.log(parameters["base"])
            case "expression":
                return np.log(_evaluate_expression(expression=parameters["expression"], n=n))
            case "log_expression":
                return _evaluate_expression(expression=parameters["expression"], n=n)
            case "table" | "noisy_exp":
                return self.table[start - 1 : stop]
            case "star":
                return np.log(n) + self.base.log_values(start=start, stop=stop)
            case "scaled":
                return math.log(parameters["factor"]) + self.base.log_values(start=start, stop=stop)

        message = f"Unknown scaling family '{self.family}'; choose one of {_SCALING_FAMILIES}."
        raise ValueError(message)


def _evaluate_expression(expression: str, n: np.ndarray) -> np.ndarray:
    try:
        values = pd.eval(expr=expression, engine="python", parser="pandas", local_dict={"n": n})
    except Exception as exception:
        message = f"Could not evaluate the scaling expression '{expression}' in the variable n: {exception}"
        raise ValueError(message) from exception

    return np.asarray(values, dtype=float)


def _factorial_block_log_values(n: np.ndarray) -> np.ndarray:
    """log psi for the block example: ratios 4 and 3 alternate over blocks ending at n_k = 1! + ... + k!."""
    boundaries = np.asarray(_FACTORIAL_BLOCK_BOUNDARIES, dtype=np.int64)
    factorials = [math.factorial(k) for k in range(1, len(boundaries) + 1)]
    odd_factorial_sums = np.concatenate(([0], np.cumsum(factorials[0::2])))
    even_factorial_sums = np.concatenate(([0], np.cumsum(factorials[1::2])))

    # Block m holds n_(m-1) < n <= n_m; block 1 is {1}, so psi(1) = 3
    block = np.searchsorted(boundaries, n, side="left") + 1
    half = block // 2

    log_ratio, log_four, log_three = math.log(5 / 3), math.log(4), math.log(3)
    log_values = np.zeros(n.shape, dtype=float)

    even_block = block % 2 == 0
    k = half[even_block]
    s_odd = odd_factorial_sums[k]
    log_values[even_block] = (k - 1) * log_ratio + (n[even_block] - s_odd) * log_four + s_odd * log_three

    odd_block = ~even_block
    k = half[odd_block]
    s_even = even_factorial_sums[k]
    log_values[odd_block] = k * log_ratio + s_even * log_four + (n[odd_block] - s_even) * log_three

    return log_values


def _parse_number(token: str) -> float | int:
    number = float(token)
    return int(number) if number.is_integer() and "." not in token and "e" not in token.lower() else number


def _scaling_function_from_table(table_file_path: str | pathlib.Path) -> ScalingFunction:
    table_file_path = pathlib.Path(table_file_path)
    if not table_file_path.is_file():
        message = f"Scaling table '{table_file_path}' does not exist."
        raise ValueError(message)

    frame = pd.read_csv(filepath_or_buffer=table_file_path)
    if "n" not in frame.columns or not ({"psi", "log_psi"} & set(frame.columns)):
        message = f"Scaling table '{table_file_path}' must have the columns 'n' and 'psi' (or 'log_psi')."
        raise ValueError(message)
    if not np.array_equal(frame["n"].to_numpy(), np.arange(1, len(frame) + 1)):
        message = f"Scaling table '{table_file_path}' must list n = 1, 2, ... without gaps."
        raise ValueError(message)

    if "log_psi" in frame.columns:
        log_table = frame["log_psi"].to_numpy(dtype=float)
    else:
        psi_values = frame["psi"].to_numpy(dtype=float)
        if (psi_values <= 0).any():
            message = f"Scaling table '{table_file_path}' holds non-positive values of psi."
            raise ValueError(message)
        log_table = np.log(psi_values)

    return ScalingFunction(family="table", table=log_table, horizon=len(log_table))


def tabulate_scaling_function(log_values: np.ndarray | list[float]) -> ScalingFunction:
    """Wrap precomputed values of log psi(1), log psi(2), ... as a tabulated scaling function."""
    log_table = np.asarray(log_values, dtype=float)
    return ScalingFunction(family="table", table=log_table, horizon=len(log_table))


@validate_call
def noisy_exponential_scaling(
    *,
    base: float = Field(gt=1),
    seed: int = 0,
    horizon: int = Field(ge=1, default=_DEFAULT_NOISY_HORIZON),
) -> ScalingFunction:
    """psi(n) = base^n * (1 + U_n) with U_n uniform on [0, 1] drawn from a seeded generator."""
    random_number_generator = np.random.default_rng(seed=seed)
    noise = random_number_generator.uniform(low=0.0, high=1.0, size=horizon)
    log_table = np.arange(1, horizon + 1) * math.log(base) + np.log1p(noise)

    return ScalingFunction(
        family="noisy_exp",
        parameters={"base": base, "seed": seed},
        table=log_table,
        horizon=horizon,
    )


def _scaling_function_from_document(document: dict) -> ScalingFunction:
    if "table" in document:
        return _scaling_function_from_table(table_file_path=document["table"])

    family = document.get("family")
    parameters = dict(document.get("params", {}))
    match family:
        case "power":
            return ScalingFunction(
                family="power",
                parameters={"exponent": parameters.get("exponent", 2), "coefficient": parameters.get("coefficient", 1)},
            )
        case "exp":
            return ScalingFunction(
                family="exp",
                parameters={"base": parameters.get("base", 2), "coefficient": parameters.get("coefficient", 1)},
            )
        case "factorial_block":
            return ScalingFunction(family="factorial_block", horizon=_FACTORIAL_BLOCK_BOUNDARIES[-1])
        case "nlogn":
            return ScalingFunction(family="nlogn")
        case "oscillating_exp":
            return ScalingFunction(
                family="oscillating_exp",
                parameters={
                    "even_base": parameters.get("even_base", 2),
                    "odd_base": parameters.get("odd_base", 4),
                },
            )
        case "noisy_exp":
            return noisy_exponential_scaling(**parameters)
        case "double_exp":
            return ScalingFunction(
                family="double_exp",
                parameters={"base": parameters.get("base", 2), "exponent": parameters.get("exponent", 2)},
            )
        case "expression" | "log_expression":
            if "expression" not in parameters:
                message = f"A scaling document of family '{family}' needs params.expression."
                raise ValueError(message)
            return ScalingFunction(family=family, parameters={"expression": str(parameters["expression"])})

    message = f"Unknown scaling family '{family}'; choose one of {_SCALING_FAMILIES}."
    raise ValueError(message)


def load_scaling_function(source: str | pathlib.Path | dict) -> ScalingFunction:
    """
    Load a scaling function from a compact string, a JSON/YAML document, a CSV table, or a parsed document.

    Compact strings are 'power:p[:c]', 'exp:r[:c]', 'factorial_block', 'nlogn', 'oscillating_exp:even:odd',
    'noisy_exp:base[:seed[:horizon]]', 'double_exp:b:c', 'expression:<numpy expression in n>',
    'log_expression:<expression for log psi>' and 'table:<path.csv>'.
    """
    if isinstance(source, dict):
        return _scaling_function_from_document(document=source)

    source_text = str(source).strip()
    family, _, remainder = source_text.partition(":")
    family = family.lower()

    if family in ("expression", "log_expression"):
        return _scaling_function_from_document(document={"family": family, "params": {"expression": remainder}})
    if family == "table":
        return _scaling_function_from_table(table_file_path=remainder)

    if family in _SCALING_FAMILIES:
        tokens = [token for token in remainder.split(":") if token != ""] if remainder else []
        try:
            numbers = [_parse_number(token) for token in tokens]
        except ValueError as exception:
            message = f"Could not parse the parameters of the scaling function '{source_text}'."
            raise ValueError(message) from exception

        parameter_names = {
            "power": ("exponent", "coefficient"),
            "exp": ("base", "coefficient"),
            "factorial_block": (),
            "nlogn": (),
            "oscillating_exp": ("even_base", "odd_base"),
            "noisy_exp": ("base", "seed", "horizon"),
            "double_exp": ("base", "exponent"),
        }.get(family)
        if parameter_names is None or len(numbers) > len(parameter_names):
            message = f"Scaling function '{source_text}' has too many (or unsupported) parameters."
            raise ValueError(message)

        return _scaling_function_from_document(
            document={"family": family, "params": dict(zip(parameter_names, numbers))}
        )

    path = pathlib.Path(source_text)
    if path.suffix.lower() == ".csv":
        return _scaling_function_from_table(table_file_path=path)
    if path.is_file():
        with open(file=path) as io:
            document = yaml.safe_load(stream=io)
        if not isinstance(document, dict):
            message = f"Scaling document '{path}' must be a mapping."
            raise ValueError(message)
        if "table" in document and not pathlib.Path(document["table"]).is_absolute():
            document = {**document, "table": path.parent / document["table"]}
        return _scaling_function_from_document(document=document)

    message = f"'{source_text}' is neither a known scaling family {_SCALING_FAMILIES} nor an existing file."
    raise ValueError(message)


def psi_star(psi: ScalingFunction) -> ScalingFunction:
    """psi*(n) := n psi(n)."""
    return ScalingFunction(family="star", base=psi, horizon=psi.horizon)


@validate_call(config=dict(arbitrary_types_allowed=True))
def scale_scaling_function(psi: ScalingFunction, factor: float = Field(gt=0)) -> ScalingFunction:
    """lambda psi for a constant lambda > 0."""
    return ScalingFunction(family="scaled", parameters={"factor": factor}, base=psi, horizon=psi.horizon)


@dataclasses.dataclass(frozen=True, eq=False)
class EquivalenceReport:
    flag: bool
    ratio_trace: np.ndarray
    tolerance: float
    window: int
    label: Literal["HEURISTIC"] = "HEURISTIC"


def is_equivalent_increasing(
    psi: ScalingFunction,
    *,
    horizon: int,
    tolerance: float = _EQUIVALENCE_TOLERANCE,
    window: int | None = None,
) -> EquivalenceReport:
    """
    Running-max envelope test: psi(n) / max_{k<=n} psi(k) >= 1 - tolerance over the final window.

    This is a heuristic for equivalence to an increasing function, sound only for eventually monotone psi.
    """
    if horizon < 8:
        message = f"The equivalence test needs a horizon of at least 8; received {horizon}."
        raise ValueError(message)

    window = window or max(1, horizon // 4)
    flag, ratio_trace = _envelope_test(
        log_values=psi.log_values(start=1, stop=horizon), tolerance=tolerance, window=window
    )

    return EquivalenceReport(flag=flag, ratio_trace=ratio_trace, tolerance=tolerance, window=window)


def _envelope_test(log_values: np.ndarray, tolerance: float, window: int) -> tuple[bool, np.ndarray]:
    log_envelope = np.maximum.accumulate(log_values)
    ratio_trace = np.exp(log_values - log_envelope)

    return bool((ratio_trace[-window:] >= 1 - tolerance).all()), ratio_trace


def _xi_from_log_values(log_values: np.ndarray, window: int) -> tuple[float, float]:
    with np.errstate(over="ignore", invalid="ignore"):
        log_partial_sums = np.logaddexp.accumulate(log_values)
        ratios = np.exp(log_values[1:] - log_partial_sums[:-1])
    ratios = np.where(np.isfinite(ratios), ratios, np.inf)

    tail_maximum = float(ratios[-window:].max())
    running_maximum = float(ratios.max())
    if tail_maximum > _XI_CAP:
        tail_maximum = math.inf
    if running_maximum > _XI_CAP:
        running_maximum = math.inf

    return tail_maximum, running_maximum


def xi(phi: ScalingFunction, *, horizon: int, window: int | None = None) -> float:
    """
    Windowed limsup of phi(n+1) / (phi(1) + ... + phi(n)); values above 10^6 are reported as infinity.

    Parameters
    ----------
    phi : ScalingFunction
        A scaling function tending to infinity.
    horizon : int
        The largest n + 1 used.
    window : int, optional
        The number of final ratios the supremum is taken over. Defaults to a quarter of the horizon.
    """
    if horizon < 2:
        message = f"The growth-rate constant needs a horizon of at least 2; received {horizon}."
        raise ValueError(message)

    window = window or max(1, (horizon - 1) // 4)
    tail_maximum, _ = _xi_from_log_values(log_values=phi.log_values(start=1, stop=horizon), window=window)

    return tail_maximum


@dataclasses.dataclass(frozen=True)
class ScalingInvariants:
    """Horizon-truncated estimates of beta, B and b with the running extremes over the full prefix."""

    horizon: int
    window: int
    beta: float
    B: float
    b: float
    beta_running: float
    B_running: float
    b_running: float
    superlinear: bool
    equiv_increasing: bool
    xi: float | None = None
    xi_running: float | None = None

    @classmethod
    def from_values(
        cls,
        *,
        beta: float | Fraction,
        B: float | Fraction,
        b: float | Fraction,
        superlinear: bool = True,
        equiv_increasing: bool = True,
        xi: float | Fraction | None = None,
    ) -> "ScalingInvariants":
        """Invariants known in closed form, with the running extremes equal to the tail values."""
        return cls(
            horizon=0,
            window=0,
            beta=beta,
            B=B,
            b=b,
            beta_running=beta,
            B_running=B,
            b_running=b,
            superlinear=superlinear,
            equiv_increasing=equiv_increasing,
            xi=xi,
            xi_running=xi,
        )

    def to_dict(self) -> dict:
        return {
            key: float(value) if isinstance(value, Fraction) else value
            for key, value in dataclasses.asdict(self).items()
        }


def invariants(
    psi: ScalingFunction,
    *,
    horizon: int,
    window: int | None = None,
    include_xi: bool = False,
    tolerance: float = _EQUIVALENCE_TOLERANCE,
) -> ScalingInvariants:
    """
    Estimate beta = limsup psi(n+1)/psi(n), B = limsup psi(n)^(1/n) and b = liminf psi(n)^(1/n).

    Parameters
    ----------
    psi : ScalingFunction
        The scaling function.
    horizon : int
        The largest index used; at least 4 and within the range of psi.
    window : int, optional
        The number of final indices the tail extremes are taken over, 1 <= window < horizon.
        Defaults to a quarter of the horizon.
    include_xi : bool, default: False
        Also estimate xi for psi read as a growth-rate function phi.
    tolerance : float, default: 0.1
        The tolerance of the equivalence-to-increasing heuristic.

    Returns
    -------
    ScalingInvariants
        The tail estimates, the running extremes, and the superlinear and equivalence flags.
    """
    if horizon < 4:
        message = f"Scaling invariants need a horizon of at least 4; received {horizon}."
        raise ValueError(message)
    if psi.horizon is not None and horizon > psi.horizon:
        message = f"psi ({psi.description}) is defined only up to n={psi.horizon}; requested horizon {horizon}."
        raise TruncationError(message)

    window = window or max(1, horizon // 4)
    if not 1 <= window < horizon:
        message = f"The window must satisfy 1 <= window < horizon = {horizon}; received {window}."
        raise ValueError(message)

    log_values = psi.log_values(start=1, stop=horizon)
    n = np.arange(1, horizon + 1, dtype=float)

    log_roots = log_values / n
    with np.errstate(invalid="ignore"):
        log_ratios = np.diff(log_values)
    with np.errstate(over="ignore"):
        roots = np.exp(log_roots)
        ratios = np.exp(log_ratios)

    ratio_window = min(window, horizon - 1)

    # psi(n)/n must keep growing: its minimum over the tail exceeds its value at horizon/2
    half_horizon = horizon // 2
    flag_window = min(window, horizon - half_horizon)
    log_linear_quotients = log_values - np.log(n)
    superlinear = bool(log_linear_quotients[-flag_window:].min() > log_linear_quotients[half_horizon - 1])

    equivalent_increasing, _ = _envelope_test(
        log_values=log_values, tolerance=tolerance, window=max(1, horizon // 4)
    )

    xi_estimate = xi_running = None
    if include_xi:
        xi_estimate, xi_running = _xi_from_log_values(log_values=log_values, window=ratio_window)

    return ScalingInvariants(
        horizon=horizon,
        window=window,
        beta=float(ratios[-ratio_window:].max()),
        B=float(roots[-window:].max()),
        b=float(roots[-window:].min()),
        beta_running=float(ratios.max()),
        B_running=float(roots.max()),
        b_running=float(roots.min()),
        superlinear=superlinear,
        equiv_increasing=equivalent_increasing,
        xi=xi_estimate,
        xi_running=xi_running,
    )
