"""L-indices, P-indices, joint indices, and the anchor indices behind the non-decreasing minorant construction."""

import dataclasses
import math
from collections.abc import Sequence
from typing import Literal

import numpy as np

from ._exceptions import ConstructionError
from ._scaling import ScalingFunction

_PROVISIONAL_FRACTION = 10


@dataclasses.dataclass(frozen=True)
class LPIndexReport:
    """
    Indices (counted from 1) satisfying the L- or P-index definition over a finite horizon.

    An L-index only sees the tail up to the horizon, so those past `certified_through` are provisional.
    A P-index depends on earlier terms only and is always certified.
    """

    kind: Literal["L", "P"]
    indices: tuple[int, ...]
    horizon: int
    certified_through: int

    @property
    def provisional(self) -> tuple[int, ...]:
        return tuple(index for index in self.indices if index > self.certified_through)

    @property
    def certified(self) -> tuple[int, ...]:
        return tuple(index for index in self.indices if index <= self.certified_through)


def _as_array(values: Sequence[float] | np.ndarray, horizon: int | None) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if horizon is not None:
        if horizon > len(array):
            message = f"The sequence has {len(array)} terms; requested the horizon {horizon}."
            raise ValueError(message)
        array = array[:horizon]

    return array


def l_index_mask(values: np.ndarray) -> np.ndarray:
    """mask[i] is True when values[j] > values[i] for every j > i."""
    later_minimum = np.append(np.minimum.accumulate(values[::-1])[::-1][1:], np.inf)
    return values < later_minimum


def p_index_mask(values: np.ndarray) -> np.ndarray:
    """mask[i] is True when values[j] > values[i] for every j < i."""
    earlier_minimum = np.insert(np.minimum.accumulate(values)[:-1], 0, np.inf)
    return values < earlier_minimum


def l_indices(
    a: Sequence[float] | np.ndarray, *, horizon: int | None = None, provisional_window: int | None = None
) -> LPIndexReport:
    """
    Sweep for the L-indices n with a(m) > a(n) for every n < m <= horizon.

    Parameters
    ----------
    a : sequence of float
        The sequence a(1), a(2), ...
    horizon : int, optional
        Only the first `horizon` terms are used. Defaults to the full length.
    provisional_window : int, optional
        L-indices within this many terms of the horizon are flagged provisional. Defaults to a tenth of the horizon.
    """
    values = _as_array(values=a, horizon=horizon)
    horizon = len(values)
    provisional_window = provisional_window if provisional_window is not None else horizon // _PROVISIONAL_FRACTION

    indices = tuple(int(index) + 1 for index in np.flatnonzero(l_index_mask(values)))
    return LPIndexReport(kind="L", indices=indices, horizon=horizon, certified_through=horizon - provisional_window)


def p_indices(c: Sequence[float] | np.ndarray, *, horizon: int | None = None) -> LPIndexReport:
    """Sweep for the P-indices n with c(m) > c(n) for every m < n; index 1 is vacuously one."""
    values = _as_array(values=c, horizon=horizon)
    horizon = len(values)

    indices = tuple(int(index) + 1 for index in np.flatnonzero(p_index_mask(values)))
    return LPIndexReport(kind="P", indices=indices, horizon=horizon, certified_through=horizon)


@dataclasses.dataclass(frozen=True)
class JointIndexResult:
    """The smallest joint index past N (None when absent) and the first index from which a/c is strictly increasing."""

    index: int | None
    monotone_from: int | None

    @property
    def found(self) -> bool:
        return self.index is not None


def _monotone_from(log_ratio: np.ndarray) -> int | None:
    """The smallest n such that the ratio is strictly increasing on [n, horizon]."""
    if len(log_ratio) == 0:
        return None

    increasing = np.diff(log_ratio) > 0
    failures = np.flatnonzero(~increasing)
    if len(failures) == 0:
        return 1
    return int(failures[-1]) + 2


def joint_index(
    a: Sequence[float] | np.ndarray,
    c: Sequence[float] | np.ndarray,
    *,
    N: int,
    horizon: int | None = None,
    log_domain: bool = True,
) -> JointIndexResult:
    """
    Find the smallest n > N that is an L-index of a and a P-index of c within the horizon.

    Parameters
    ----------
    a, c : sequence of float
        The two sequences; by default given as logarithms, which leaves both index notions unchanged.
    N : int
        The returned index exceeds N.
    horizon : int, optional
        Only the first `horizon` terms are used.
    log_domain : bool, default: True
        Whether `a` and `c` are logarithms; only affects how the ratio a/c is formed for `monotone_from`.
    """
    a_values = _as_array(values=a, horizon=horizon)
    c_values = _as_array(values=c, horizon=horizon)
    if len(a_values) != len(c_values):
        message = f"The sequences must share a horizon; received lengths {len(a_values)} and {len(c_values)}."
        raise ValueError(message)

    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = a_values - c_values if log_domain else np.log(a_values) - np.log(c_values)
    monotone_from = _monotone_from(log_ratio=log_ratio)

    if len(a_values) <= N:
        return JointIndexResult(index=None, monotone_from=monotone_from)

    joint_mask = l_index_mask(a_values) & p_index_mask(c_values)
    joint_mask[:N] = False
    candidates = np.flatnonzero(joint_mask)
    index = int(candidates[0]) + 1 if len(candidates) else None

    return JointIndexResult(index=index, monotone_from=monotone_from)


@dataclasses.dataclass(frozen=True)
class KeyIndexSequences:
    """The logarithms of the key-index sequences for a given case, indexed from n = 1."""

    log_a: np.ndarray
    log_c: np.ndarray
    lower_rate: float
    upper_rate: float


def key_index_sequences(
    log_psi: np.ndarray, *, b: float, epsilon: float, case: Literal["finite_b", "b_one"]
) -> KeyIndexSequences:
    """
    finite_b: a = psi(n) / (b - epsilon)^n and c = psi(n) / (b + epsilon)^n.
    b_one: a = psi(n) / n and c = psi(n) / (1 + epsilon)^n.
    """
    n = np.arange(1, len(log_psi) + 1, dtype=float)
    match case:
        case "finite_b":
            if not 0 < epsilon < b - 1:
                message = f"The finite-b case needs 0 < epsilon < b - 1; received epsilon={epsilon} with b={b}."
                raise ValueError(message)
            lower_rate, upper_rate = math.log(b - epsilon), math.log(b + epsilon)
            return KeyIndexSequences(
                log_a=log_psi - n * lower_rate,
                log_c=log_psi - n * upper_rate,
                lower_rate=lower_rate,
                upper_rate=upper_rate,
            )
        case "b_one":
            if not epsilon > 0:
                message = f"The b = 1 case needs epsilon > 0; received {epsilon}."
                raise ValueError(message)
            upper_rate = math.log1p(epsilon)
            return KeyIndexSequences(
                log_a=log_psi - np.log(n), log_c=log_psi - n * upper_rate, lower_rate=math.nan, upper_rate=upper_rate
            )

    message = f"Unknown key-index case '{case}'; choose 'finite_b' or 'b_one'."
    raise ValueError(message)


def key_index_holds(
    log_psi: np.ndarray, index: int, *, b: float, epsilon: float, case: Literal["finite_b", "b_one"]
) -> bool:
    """
    Check the two-sided key inequalities at `index` for every n in the horizon.

    finite_b: psi(n) > (b - epsilon)^(n - n*) psi(n*) for n > n*,
    and psi(n) > (b + epsilon)^(n - n*) psi(n*) for n < n*.
    b_one: n* psi(n) > n psi(n*) for n > n*, and psi(n) > (1 + epsilon)^(n - n*) psi(n*) for n < n*.
    """
    sequences = key_index_sequences(log_psi=log_psi, b=b, epsilon=epsilon, case=case)
    position = index - 1

    later = sequences.log_a[position + 1 :]
    earlier = sequences.log_c[:position]

    return bool((later > sequences.log_a[position]).all() and (earlier > sequences.log_c[position]).all())


def key_index(
    psi: ScalingFunction,
    *,
    epsilon: float,
    N: int,
    horizon: int,
    case: Literal["finite_b", "b_one"],
    b: float | None = None,
) -> int:
    """
    Find an index n* > N satisfying the two-sided key inequalities at every n up to the horizon.

    Candidates are the joint L/P indices of the case sequences; each is verified exhaustively before it is returned.

    Parameters
    ----------
    psi : ScalingFunction
        The scaling function.
    epsilon : float
        The rate slack.
    N : int
        The index returned exceeds N.
    horizon : int
        The last index checked.
    case : "finite_b" or "b_one"
        Which pair of inequalities is required.
    b : float, optional
        The value of b in the finite-b case. Required there; ignored for b_one.

    Raises
    ------
    ConstructionError
        When no index past N satisfies the inequalities within the horizon.
    """
    if case == "finite_b" and b is None:
        message = "The finite-b case of the key index needs the value of b."
        raise ValueError(message)

    if horizon <= N:
        message = f"No key index past N={N} exists within the horizon {horizon}."
        raise ConstructionError(message)

    return search_key_index(
        log_psi=psi.log_values(start=1, stop=horizon), epsilon=epsilon, N=N, case=case, b=b if b is not None else 1.0
    )


def search_key_index(
    log_psi: np.ndarray, *, epsilon: float, N: int, case: Literal["finite_b", "b_one"], b: float = 1.0
) -> int:
    """Key-index search over an already tabulated log psi; the horizon is its length."""
    horizon = len(log_psi)
    sequences = key_index_sequences(log_psi=log_psi, b=b, epsilon=epsilon, case=case)

    joint_mask = l_index_mask(sequences.log_a) & p_index_mask(sequences.log_c)
    joint_mask[:N] = False
    for position in np.flatnonzero(joint_mask):
        candidate = int(position) + 1
        if key_index_holds(log_psi=log_psi, index=candidate, b=b, epsilon=epsilon, case=case):
            return candidate

    message = f"No key index past N={N} exists within the horizon {horizon} ({case}, epsilon={epsilon})."
    raise ConstructionError(message)
