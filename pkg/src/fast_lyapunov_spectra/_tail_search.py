from collections.abc import Callable
from typing import Literal

import numpy as np

from ._exceptions import TruncationError
from ._globals import _DEFAULT_SCAN_CAP, _DEFAULT_SENTINEL_RUN
from ._scaling import ScalingFunction

_MINIMUM_CHUNK = 256


def scan_tail(
    psi: ScalingFunction,
    *,
    horizon: int,
    key: Callable[[np.ndarray, np.ndarray], np.ndarray],
    extreme: Literal["min", "max"],
    sentinel_run: int = _DEFAULT_SENTINEL_RUN,
    margin: float = 0.0,
    scan_cap: int = _DEFAULT_SCAN_CAP,
) -> np.ndarray:
    """
    Evaluate key(n, log psi(n)) for n = 1, 2, ... past `horizon` until the tail extreme has settled.

    The scan stops once the final `sentinel_run` values all fall short of the running extreme by more than `margin`.

    Returns
    -------
    numpy.ndarray
        The key values for n = 1, ..., K with K > horizon.

    Raises
    ------
    TruncationError
        When psi ends, or the scan cap is reached, before the tail settles.
    """
    stop = horizon + max(sentinel_run, _MINIMUM_CHUNK)
    while True:
        if psi.horizon is not None:
            stop = min(stop, psi.horizon)
        if stop < horizon + sentinel_run:
            message = (
                f"psi ({psi.description}) ends at n={psi.horizon}; the tail search past the horizon {horizon} "
                f"needs at least {sentinel_run} further values."
            )
            raise TruncationError(message)

        n = np.arange(1, stop + 1, dtype=float)
        values = key(n, psi.log_values(start=1, stop=stop))

        tail = values[horizon:]
        final_run = tail[-sentinel_run:]
        if extreme == "min":
            settled = bool((final_run > tail.min() + margin).all())
        else:
            settled = bool((final_run < tail.max() - margin).all())
        if settled:
            return values

        if psi.horizon is not None and stop >= psi.horizon:
            message = (
                f"psi ({psi.description}) ends at n={psi.horizon} before the tail search past the horizon {horizon} "
                f"settled over a run of {sentinel_run} values."
            )
            raise TruncationError(message)
        if stop - horizon >= scan_cap:
            message = f"The tail search past the horizon {horizon} did not settle within the scan cap of {scan_cap}."
            raise TruncationError(message)

        stop = horizon + 2 * (stop - horizon)
