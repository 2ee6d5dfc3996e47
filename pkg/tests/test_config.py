import pytest

import fast_lyapunov_spectra


def test_default_precision_bits(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv("FAST_LYAPUNOV_SPECTRA_PRECISION_BITS", raising=False)

    assert fast_lyapunov_spectra.get_default_precision_bits() == 256


def test_precision_bits_from_environment(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("FAST_LYAPUNOV_SPECTRA_PRECISION_BITS", "512")

    assert fast_lyapunov_spectra.get_default_precision_bits() == 512


@pytest.mark.parametrize("raw_value", ["abc", "10", "-64"])
def test_invalid_precision_bits(monkeypatch: pytest.MonkeyPatch, raw_value: str):
    monkeypatch.setenv("FAST_LYAPUNOV_SPECTRA_PRECISION_BITS", raw_value)

    with pytest.raises(ValueError, match="must be an integer of at least 53"):
        fast_lyapunov_spectra.get_default_precision_bits()
