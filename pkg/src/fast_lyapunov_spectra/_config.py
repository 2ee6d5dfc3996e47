import os
import pathlib

FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH = pathlib.Path.home() / ".fast_lyapunov_spectra"
FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH.mkdir(exist_ok=True)

_PRECISION_BITS_ENVIRONMENT_VARIABLE = "FAST_LYAPUNOV_SPECTRA_PRECISION_BITS"
_FALLBACK_PRECISION_BITS = 256


def get_default_precision_bits() -> int:
    """
    Return the default working precision (in bits) for high-precision real arithmetic.

    Read from the `FAST_LYAPUNOV_SPECTRA_PRECISION_BITS` environment variable at call time so that a shell session
    (or a test) can raise it without reloading the package.
    """
    raw_value = os.environ.get(_PRECISION_BITS_ENVIRONMENT_VARIABLE)
    if raw_value is None:
        return _FALLBACK_PRECISION_BITS

    if not raw_value.strip().isdigit() or int(raw_value) < 53:
        message = (
            f"The environment variable `{_PRECISION_BITS_ENVIRONMENT_VARIABLE}` must be an integer of at least 53 "
            f"(double precision); received '{raw_value}'."
        )
        raise ValueError(message)

    return int(raw_value)
