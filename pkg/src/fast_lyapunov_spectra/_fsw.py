"""The envelope sequence d_n whose partial products track e^(alpha psi(n)) from above at rate B + epsilon."""

import dataclasses
import math

import mpmath
import numpy as np
import pandas as pd

from ._config import get_default_precision_bits
from ._globals import _DEFAULT_DECAY_BITS, _DEFAULT_SENTINEL_RUN
from ._scaling import ScalingFunction, invariants
from ._sequences import SequencePair, fsw_sequence_pair
from ._tail_search import scan_tail

_INCREMENT_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class EnvelopeChecks:
    """Horizon-restricted checks of the three envelope properties over the final window."""

    window: int
    sum_ratio_liminf: float
    sum_over_n_growing: bool
    increment_violations: tuple[int, ...]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True, eq=False)
class EnvelopeSequence:
    """
    log d_n for n = 1, ..., horizon, with log E_n = log d_1 + ... + log d_n = alpha exp(M_n).

    `log_envelope_exponent[i]` is M_(i+1) = max(max_(k<=n) log psi(k), max_(k>n) log psi(k) + (n-k) log(B + epsilon)).
    """

    log_d: tuple[mpmath.mpf, ...]
    log_envelope_exponent: np.ndarray
    log_psi: np.ndarray
    alpha: float
    epsilon: float
    B: float

    @property
    def horizon(self) -> int:
        return len(self.log_d)

    @property
    def sum_ratio(self) -> np.ndarray:
        """(log d_1 + ... + log d_n) / psi(n)."""
        return self.alpha * np.exp(self.log_envelope_exponent - self.log_psi)

    @property
    def log_sum_over_n(self) -> np.ndarray:
        """log((log d_1 + ... + log d_n) / n)."""
        n = np.arange(1, self.horizon + 1, dtype=float)
        return math.log(self.alpha) + self.log_envelope_exponent - np.log(n)

    def checks(self, *, window: int | None = None) -> EnvelopeChecks:
        window = window or max(1, self.horizon // 4)
        half_horizon = max(1, self.horizon // 2)

        log_sum_over_n = self.log_sum_over_n
        sum_over_n_growing = bool(log_sum_over_n[-window:].min() > log_sum_over_n[half_horizon - 1])

        # log d_(n+1) / (log d_1 + ... + log d_n) = expm1(M_(n+1) - M_n)
        increments = np.expm1(np.diff(self.log_envelope_exponent))
        allowed = self.B + self.epsilon - 1
        increment_violations = tuple(
            int(index) + 1 for index in np.flatnonzero(increments > allowed + _INCREMENT_TOLERANCE * max(1.0, allowed))
        )

        return EnvelopeChecks(
            window=window,
            sum_ratio_liminf=float(self.sum_ratio[-window:].min()),
            sum_over_n_growing=sum_over_n_growing,
            increment_violations=increment_violations,
        )

    def sequence_pair(self) -> SequencePair:
        """s_n = t_n = 2 d_n."""
        return fsw_sequence_pair(log_d=list(self.log_d))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "n": np.arange(1, self.horizon + 1),
                "log_d": [float(value) for value in self.log_d],
                "log_envelope_exponent": self.log_envelope_exponent,
                "sum_ratio": self.sum_ratio,
            }
        )


def fsw_sequence(
    psi: ScalingFunction,
    *,
    alpha: float,
    epsilon: float,
    horizon: int,
    B: float | None = None,
    sentinel_run: int = _DEFAULT_SENTINEL_RUN,
) -> EnvelopeSequence:
    """
    Construct d_1 = E_1 and d_n = E_n / E_(n-1) with E_n = sup_k d_(n,k).

    Here d_(n,k) = e^(alpha psi(k)) for k <= n and e^(alpha psi(k) (B + epsilon)^(n-k)) for k > n.

    Parameters
    ----------
    psi : ScalingFunction
        The scaling function; it must be defined far enough past the horizon for the supremum to settle.
    alpha : float
        The level, positive.
    epsilon : float
        The rate slack, positive.
    horizon : int
        The last n computed.
    B : float, optional
        The value of B; defaults to the windowed limsup of psi(n)^(1/n) at the horizon (which needs a horizon >= 4).
    sentinel_run : int, default: 64
        The supremum search past the horizon stops once this many values have fallen below the incumbent by a
        factor 2^10.

    Raises
    ------
    TruncationError
        When psi ends before the supremum settles.
    """
    if not alpha > 0 or not epsilon > 0:
        message = f"alpha and epsilon must be positive; received alpha={alpha}, epsilon={epsilon}."
        raise ValueError(message)
    if horizon < 1:
        message = f"The horizon must be at least 1; received {horizon}."
        raise ValueError(message)

    B = B if B is not None else invariants(psi, horizon=horizon).B
    if not math.isfinite(B):
        message = "The envelope construction needs a finite B."
        raise ValueError(message)
    log_rate = math.log(B + epsilon)

    shifted = scan_tail(
        psi,
        horizon=horizon,
        key=lambda n, log_values: log_values - n * log_rate,
        extreme="max",
        sentinel_run=sentinel_run,
        margin=_DEFAULT_DECAY_BITS * math.log(2),
    )

    n = np.arange(1, horizon + 1, dtype=float)
    log_psi = psi.log_values(start=1, stop=horizon)
    prefix_maximum = np.maximum.accumulate(log_psi)
    later_maximum = np.maximum.accumulate(shifted[::-1])[::-1][1 : horizon + 1]
    log_envelope_exponent = np.maximum(prefix_maximum, later_maximum + n * log_rate)

    with mpmath.workprec(get_default_precision_bits()):
        log_envelope = [alpha * mpmath.exp(mpmath.mpf(float(value))) for value in log_envelope_exponent]
        log_d = [log_envelope[0]] + [current - previous for previous, current in zip(log_envelope, log_envelope[1:])]

    return EnvelopeSequence(
        log_d=tuple(log_d),
        log_envelope_exponent=log_envelope_exponent,
        log_psi=log_psi,
        alpha=alpha,
        epsilon=epsilon,
        B=B,
    )
