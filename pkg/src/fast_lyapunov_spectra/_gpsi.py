"""Non-decreasing minorants g_psi of a scaling function that touch it infinitely often, built in the log domain."""

import dataclasses
import math
from typing import Literal

import numpy as np
import pandas as pd

from ._exceptions import ConstructionError, TruncationError
from ._globals import _B_INFINITE_THRESHOLD, _B_ONE_TOLERANCE, _DEFAULT_SENTINEL_RUN
from ._indices import l_index_mask, search_key_index
from ._scaling import ScalingFunction, invariants
from ._tail_search import scan_tail

_PROPERTY_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class CrossoverRecord:
    """
    One block [n_j, n_(j+1)) of the anchor construction: g follows f_j up to the crossover n_hat, then h_j.

    `f_params` and `h_params` hold the anchor, the anchor's log psi, and either a geometric log rate or the linear form.
    """

    j: int
    n_j: int
    n_next: int
    n_hat: int
    f_params: dict
    h_params: dict


def _auxiliary_log(params: dict, n: np.ndarray) -> np.ndarray:
    if params["form"] == "linear":
        return params["log_value"] + np.log(n / params["anchor"])
    return params["log_value"] + (n - params["anchor"]) * params["log_rate"]


@dataclasses.dataclass(frozen=True, eq=False)
class GpsiResult:
    """
    log g_psi(n) for n = 1, ..., horizon with its contact indices.

    `log_ratio_bound[i]` bounds log g(i+2) - log g(i+1) where the construction controls it and is NaN elsewhere.
    `contact_map` holds k_n for the infimum construction. `complete` is False when the anchor construction stalled.
    """

    log_g: np.ndarray
    log_psi: np.ndarray
    contact_indices: tuple[int, ...]
    case_label: Literal["simple", "b_infinite", "b_finite", "b_one"]
    epsilon: float
    b_estimate: float
    log_ratio_bound: np.ndarray
    crossovers: tuple[CrossoverRecord, ...] = ()
    epsilon_schedule: tuple[float, ...] = ()
    contact_map: np.ndarray | None = None
    complete: bool = True

    @property
    def horizon(self) -> int:
        return len(self.log_g)

    @property
    def ratios(self) -> np.ndarray:
        """g(n+1)/g(n) for n = 1, ..., horizon - 1."""
        with np.errstate(over="ignore"):
            return np.exp(np.diff(self.log_g))

    def check_properties(self) -> dict[str, list[int]]:
        """
        Return, for each contract, the indices (counted from 1) at which it fails over the horizon.

        The contracts are non_decreasing, below_psi, contact, ratio_bound, crossover (block numbers j), and in the
        b = 1 case g_over_n (g(n)/n non-decreasing from the first anchor).
        """
        log_g, log_psi = self.log_g, self.log_psi
        tolerance = _PROPERTY_TOLERANCE * np.maximum(1.0, np.abs(log_g))

        log_steps = np.diff(log_g)
        violations = {
            "non_decreasing": [int(index) + 2 for index in np.flatnonzero(log_steps < -tolerance[1:])],
            "below_psi": [int(index) + 1 for index in np.flatnonzero(log_g > log_psi + tolerance)],
            "contact": [
                index
                for index in self.contact_indices
                if abs(log_g[index - 1] - log_psi[index - 1]) > tolerance[index - 1]
            ],
        }

        with np.errstate(invalid="ignore"):
            exceeded = log_steps > self.log_ratio_bound + tolerance[1:]
        violations["ratio_bound"] = [int(index) + 1 for index in np.flatnonzero(exceeded)]

        crossover_failures = []
        for record in self.crossovers:
            n = np.arange(record.n_j, record.n_next, dtype=float)
            f_minus_h = _auxiliary_log(record.f_params, n) - _auxiliary_log(record.h_params, n)
            before = n <= record.n_hat
            if (f_minus_h[before] < 0).any() or (f_minus_h[~before] >= 0).any():
                crossover_failures.append(record.j)
        violations["crossover"] = crossover_failures

        if self.case_label == "b_one" and self.contact_indices:
            first_anchor = self.contact_indices[0]
            n = np.arange(first_anchor, self.horizon + 1, dtype=float)
            log_g_over_n = log_g[first_anchor - 1 :] - np.log(n)
            steps = np.diff(log_g_over_n)
            violations["g_over_n"] = [
                int(index) + first_anchor + 1 for index in np.flatnonzero(steps < -tolerance[first_anchor:])
            ]

        return violations

    @property
    def satisfies_properties(self) -> bool:
        return not any(self.check_properties().values())

    def to_frame(self) -> pd.DataFrame:
        n = np.arange(1, self.horizon + 1)
        contacts = set(self.contact_indices)
        with np.errstate(over="ignore"):
            frame = pd.DataFrame(
                {
                    "n": n,
                    "psi": np.exp(self.log_psi),
                    "g_psi": np.exp(self.log_g),
                    "log_psi": self.log_psi,
                    "log_g_psi": self.log_g,
                    "contact_flag": [int(index) in contacts for index in n],
                    "ratio": np.append(self.ratios, np.nan),
                }
            )

        return frame


def _estimate_b(psi: ScalingFunction, horizon: int) -> float:
    return invariants(psi, horizon=horizon).b


def gpsi_simple(
    psi: ScalingFunction,
    *,
    epsilon: float,
    horizon: int,
    b: float | None = None,
    sentinel_run: int = _DEFAULT_SENTINEL_RUN,
) -> GpsiResult:
    """
    g(n) = inf_k c_(n,k) with c_(n,k) = psi(k) (b + epsilon)^(n-k) for k <= n and psi(k) for k > n.

    Parameters
    ----------
    psi : ScalingFunction
        The scaling function; it must be defined far enough past the horizon for the tail infimum to settle.
    epsilon : float
        The rate slack, positive.
    horizon : int
        The last n computed.
    b : float, optional
        The value of b; defaults to the windowed liminf of psi(n)^(1/n) at the horizon.
    sentinel_run : int, default: 64
        The tail search past the horizon stops after this many non-improving values.

    Returns
    -------
    GpsiResult
        With `contact_map` holding k_n, the smallest k attaining the infimum.

    Raises
    ------
    TruncationError
        When psi ends before the tail infimum settles.
    """
    if not epsilon > 0:
        message = f"epsilon must be positive; received {epsilon}."
        raise ValueError(message)
    if horizon < 4:
        message = f"The minorant needs a horizon of at least 4; received {horizon}."
        raise ValueError(message)
    if psi.horizon is not None and psi.horizon < horizon:
        message = f"psi ({psi.description}) is tabulated only up to n={psi.horizon}; requested the horizon {horizon}."
        raise TruncationError(message)

    b = b if b is not None else _estimate_b(psi=psi, horizon=horizon)
    if not math.isfinite(b) or b + epsilon <= 1:
        message = f"The infimum construction needs a finite b with b + epsilon > 1; received b={b}."
        raise ValueError(message)
    log_rate = math.log(b + epsilon)

    extended = scan_tail(
        psi, horizon=horizon, key=lambda n, log_values: log_values, extreme="min", sentinel_run=sentinel_run
    )
    log_psi = extended[:horizon]

    # Suffix minimum over k > n with ties going to the smaller k
    tail_value = np.empty(horizon)
    tail_index = np.empty(horizon, dtype=np.int64)
    best_value, best_index = math.inf, -1
    for position in range(len(extended) - 1, 0, -1):
        if extended[position] <= best_value:
            best_value, best_index = extended[position], position + 1
        if position <= horizon:
            tail_value[position - 1] = best_value
            tail_index[position - 1] = best_index

    # Prefix minimum of log psi(k) - k log(b + epsilon) over k <= n, ties going to the smaller k
    n = np.arange(1, horizon + 1, dtype=float)
    shifted = log_psi - n * log_rate
    prefix_value = np.empty(horizon)
    prefix_index = np.empty(horizon, dtype=np.int64)
    best_value, best_index = math.inf, -1
    for position in range(horizon):
        if shifted[position] < best_value:
            best_value, best_index = shifted[position], position + 1
        prefix_value[position] = best_value + n[position] * log_rate
        prefix_index[position] = best_index

    use_prefix = prefix_value <= tail_value
    log_g = np.where(use_prefix, prefix_value, tail_value)
    contact_map = np.where(use_prefix, prefix_index, tail_index)
    contact_indices = tuple(sorted({int(k) for k in contact_map if k <= horizon}))

    return GpsiResult(
        log_g=log_g,
        log_psi=log_psi,
        contact_indices=contact_indices,
        case_label="simple",
        epsilon=epsilon,
        b_estimate=b,
        log_ratio_bound=np.full(horizon - 1, log_rate),
        contact_map=contact_map,
    )


def _fill_before_first_anchor(log_g: np.ndarray, log_psi: np.ndarray, first_anchor: int) -> None:
    """g(n) = min(g(n+1), psi(n)) for n < first_anchor, in place."""
    for position in range(first_anchor - 2, -1, -1):
        log_g[position] = min(log_g[position + 1], log_psi[position])


def _suffix_minimum_fallback(log_psi: np.ndarray, case_label: str, epsilon: float, b: float) -> GpsiResult:
    log_g = np.minimum.accumulate(log_psi[::-1])[::-1]
    contact_indices = tuple(int(index) + 1 for index in np.flatnonzero(log_g == log_psi))

    return GpsiResult(
        log_g=log_g,
        log_psi=log_psi,
        contact_indices=contact_indices,
        case_label=case_label,
        epsilon=epsilon,
        b_estimate=b,
        log_ratio_bound=np.full(len(log_psi) - 1, np.nan),
        complete=False,
    )


def _classify(b: float) -> Literal["b_infinite", "b_finite", "b_one"]:
    if b >= _B_INFINITE_THRESHOLD:
        return "b_infinite"
    if b <= 1 + _B_ONE_TOLERANCE:
        return "b_one"
    return "b_finite"


def _b_infinite_minorant(log_psi: np.ndarray, epsilon: float, b: float) -> GpsiResult:
    horizon = len(log_psi)
    n = np.arange(1, horizon + 1, dtype=float)
    log_roots = log_psi / n

    anchors = [int(index) + 1 for index in np.flatnonzero(l_index_mask(log_roots) & (log_roots > 0))]
    if not anchors:
        return _suffix_minimum_fallback(log_psi=log_psi, case_label="b_infinite", epsilon=epsilon, b=b)

    log_g = np.empty(horizon)
    for anchor, next_anchor in zip(anchors, anchors[1:] + [horizon + 1]):
        block = slice(anchor - 1, next_anchor - 1)
        log_g[block] = n[block] * log_roots[anchor - 1]
    _fill_before_first_anchor(log_g=log_g, log_psi=log_psi, first_anchor=anchors[0])

    return GpsiResult(
        log_g=log_g,
        log_psi=log_psi,
        contact_indices=tuple(anchors),
        case_label="b_infinite",
        epsilon=epsilon,
        b_estimate=b,
        log_ratio_bound=np.full(horizon - 1, np.nan),
        complete=len(anchors) >= 2,
    )


def _anchors(
    log_psi: np.ndarray, epsilon: float, b: float, case: Literal["b_finite", "b_one"]
) -> tuple[list[int], list[float]]:
    """Key indices n_1 < n_2 < ... with epsilon / j (finite b) or epsilon, then 1 / n_(j-1) (b = 1)."""
    anchors: list[int] = []
    schedule: list[float] = []
    key_case = "finite_b" if case == "b_finite" else "b_one"
    while True:
        j = len(anchors) + 1
        if case == "b_finite":
            epsilon_j = epsilon / j
        else:
            epsilon_j = epsilon if j == 1 else 1 / anchors[-1]

        try:
            anchor = search_key_index(
                log_psi=log_psi, epsilon=epsilon_j, N=anchors[-1] if anchors else 0, case=key_case, b=b
            )
        except ConstructionError:
            break
        anchors.append(anchor)
        schedule.append(epsilon_j)
        if anchor >= len(log_psi):
            break

    return anchors, schedule


def _anchored_minorant(
    log_psi: np.ndarray, epsilon: float, b: float, case: Literal["b_finite", "b_one"]
) -> GpsiResult:
    horizon = len(log_psi)
    if case == "b_finite" and not 0 < epsilon < b - 1:
        message = f"The finite-b construction needs 0 < epsilon < b - 1; received epsilon={epsilon} with b={b:.6g}."
        raise ValueError(message)

    anchors, schedule = _anchors(log_psi=log_psi, epsilon=epsilon, b=b, case=case)
    if not anchors:
        return _suffix_minimum_fallback(log_psi=log_psi, case_label=case, epsilon=epsilon, b=b)

    def _f_params(j: int) -> dict:
        anchor = anchors[j - 1]
        if case == "b_finite":
            return {
                "form": "geometric",
                "anchor": anchor,
                "log_value": log_psi[anchor - 1],
                "log_rate": math.log(b - epsilon / j),
            }
        return {"form": "linear", "anchor": anchor, "log_value": log_psi[anchor - 1]}

    def _h_params(j: int) -> dict:
        anchor, next_anchor = anchors[j - 1], anchors[j]
        log_rate = math.log(b + epsilon / (j + 1)) if case == "b_finite" else math.log1p(1 / anchor)
        return {
            "form": "geometric",
            "anchor": next_anchor,
            "log_value": log_psi[next_anchor - 1],
            "log_rate": log_rate,
        }

    n = np.arange(1, horizon + 1, dtype=float)
    log_g = np.empty(horizon)
    log_ratio_bound = np.full(horizon - 1, np.nan)
    crossovers = []

    for j in range(1, len(anchors)):
        anchor, next_anchor = anchors[j - 1], anchors[j]
        f_params, h_params = _f_params(j), _h_params(j)
        block_n = n[anchor - 1 : next_anchor - 1]
        f_values = _auxiliary_log(f_params, block_n)
        h_values = _auxiliary_log(h_params, block_n)

        log_g[anchor - 1 : next_anchor - 1] = np.maximum(f_values, h_values)
        log_g[anchor - 1] = log_psi[anchor - 1]
        n_hat = anchor + int(np.flatnonzero(f_values >= h_values)[-1])
        crossovers.append(
            CrossoverRecord(j=j, n_j=anchor, n_next=next_anchor, n_hat=n_hat, f_params=f_params, h_params=h_params)
        )

        if case == "b_finite":
            log_ratio_bound[anchor - 1 : next_anchor - 1] = h_params["log_rate"]
        else:
            log_ratio_bound[anchor - 1 : next_anchor - 1] = np.maximum(np.log1p(1 / block_n), h_params["log_rate"])

    # Past the last anchor g follows f_J
    last_j = len(anchors)
    last_anchor = anchors[-1]
    tail_params = _f_params(last_j)
    tail_n = n[last_anchor - 1 :]
    log_g[last_anchor - 1 :] = _auxiliary_log(tail_params, tail_n)
    log_g[last_anchor - 1] = log_psi[last_anchor - 1]
    if last_anchor < horizon:
        if case == "b_finite":
            log_ratio_bound[last_anchor - 1 :] = tail_params["log_rate"]
        else:
            log_ratio_bound[last_anchor - 1 :] = np.log1p(1 / tail_n[:-1])

    _fill_before_first_anchor(log_g=log_g, log_psi=log_psi, first_anchor=anchors[0])

    return GpsiResult(
        log_g=log_g,
        log_psi=log_psi,
        contact_indices=tuple(anchors),
        case_label=case,
        epsilon=epsilon,
        b_estimate=b,
        log_ratio_bound=log_ratio_bound,
        crossovers=tuple(crossovers),
        epsilon_schedule=tuple(schedule),
        complete=len(anchors) >= 2,
    )


def gpsi_appendix(
    psi: ScalingFunction,
    *,
    epsilon: float,
    horizon: int,
    b: float | None = None,
    case: Literal["b_infinite", "b_finite", "b_one"] | None = None,
) -> GpsiResult:
    """
    Build g_psi from anchor indices, dispatching on b.

    b = infinity: anchors are the L-indices of psi(n)^(1/n) above 1 and g(n) = psi(n_k)^(n/n_k) on [n_k, n_(k+1)).
    Finite b > 1 and b = 1: anchors are successive key indices and g = max(f_j, h_j) between them, with the crossover
    recorded per block. Before the first anchor g(n) = min(g(n+1), psi(n)).

    Parameters
    ----------
    psi : ScalingFunction
        The scaling function.
    epsilon : float
        The rate slack; 0 < epsilon < b - 1 in the finite-b case.
    horizon : int
        The last n computed.
    b : float, optional
        The value of b; defaults to the windowed liminf of psi(n)^(1/n) at the horizon.
    case : str, optional
        Overrides the case chosen from b (b >= 64 is infinite, b <= 1.05 is one).

    Returns
    -------
    GpsiResult
        With `complete` False when fewer than two anchors fit in the horizon.
    """
    if not epsilon > 0:
        message = f"epsilon must be positive; received {epsilon}."
        raise ValueError(message)
    if horizon < 4:
        message = f"The minorant needs a horizon of at least 4; received {horizon}."
        raise ValueError(message)

    b = b if b is not None else _estimate_b(psi=psi, horizon=horizon)
    case = case or _classify(b)
    log_psi = psi.log_values(start=1, stop=horizon)

    match case:
        case "b_infinite":
            return _b_infinite_minorant(log_psi=log_psi, epsilon=epsilon, b=b)
        case "b_finite" | "b_one":
            return _anchored_minorant(log_psi=log_psi, epsilon=epsilon, b=b, case=case)

    message = f"Unknown minorant case '{case}'; choose one of ('b_infinite', 'b_finite', 'b_one')."
    raise ValueError(message)
