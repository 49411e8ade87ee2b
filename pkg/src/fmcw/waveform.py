"""Linear FMCW chirp description and sampled waveform synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamsError, NyquistError, OutOfRangeError

REPRESENTATIONS = ("complex_baseband", "real", "baseband_real")


@dataclass(frozen=True)
class ChirpParams:
    """One linear up-chirp, repeated ``num_chirps`` times per frame.

    Parameters
    ----------
    f_start : float
        Start frequency in Hz (the carrier for the simulator).
    bandwidth : float
        Swept bandwidth in Hz; the chirp ends at ``f_start + bandwidth``.
    duration : float
        Sweep time in seconds. Chirps are transmitted back to back, so this
        is also the chirp repetition interval.
    sample_rate : float
        ADC sample rate in Hz.
    num_chirps : int
        Chirps per frame.
    """

    f_start: float
    bandwidth: float
    duration: float
    sample_rate: float
    num_chirps: int = 1

    def __post_init__(self):
        validate_chirp(self)

    @property
    def f_stop(self) -> float:
        return self.f_start + self.bandwidth

    @property
    def samples_per_chirp(self) -> int:
        # floor(fs*T); the trailing partial sample is dropped
        return int(math.floor(self.sample_rate * self.duration))

    def slope(self) -> float:
        return self.bandwidth / self.duration

    def sample_times(self) -> np.ndarray:
        return np.arange(self.samples_per_chirp) / self.sample_rate


def validate_chirp(params: ChirpParams) -> None:
    checks = [
        ("bandwidth", params.bandwidth > 0, "must be > 0"),
        ("duration", params.duration > 0, "must be > 0"),
        ("sample_rate", params.sample_rate > 0, "must be > 0"),
        ("num_chirps", int(params.num_chirps) == params.num_chirps and params.num_chirps >= 1,
         "must be an integer >= 1"),
    ]
    for name, ok, why in checks:
        if not ok:
            raise InvalidParamsError(f"chirp.{name} {why} (got {getattr(params, name)!r})")
    for name in ("f_start", "bandwidth", "duration", "sample_rate"):
        if not math.isfinite(getattr(params, name)):
            raise InvalidParamsError(f"chirp.{name} must be finite")
    if math.floor(params.sample_rate * params.duration) < 2:
        raise InvalidParamsError(
            "chirp.sample_rate * chirp.duration must give at least 2 samples per chirp"
        )


def chirp_slope(params: ChirpParams) -> float:
    """Frequency slope S = B / T in Hz/s."""
    validate_chirp(params)
    return params.bandwidth / params.duration


def instantaneous_frequency(params: ChirpParams, t: float) -> float:
    """Transmit frequency ``f_start + S*t`` at time ``t`` within the sweep."""
    if not 0.0 <= t <= params.duration:
        raise OutOfRangeError(f"t={t!r} outside [0, {params.duration!r}]")
    return params.f_start + chirp_slope(params) * t


def synthesize_chirp(params: ChirpParams, representation: str = "complex_baseband") -> np.ndarray:
    """Sample one chirp at ``n / sample_rate`` for ``n < samples_per_chirp``.

    ``complex_baseband`` removes the carrier: ``exp(i*pi*S*t**2)``, unit modulus.
    ``real`` is the RF sinusoid ``sin(2*pi*(f_start*t + S*t**2/2))`` and is
    refused when ``f_stop`` exceeds Nyquist. ``baseband_real`` treats the
    carrier as already down-converted: ``sin(pi*S*t**2)``, sweeping 0 to B
    (the imaginary part of ``complex_baseband``). It is not Nyquist-checked
    and aliases when ``bandwidth > fs/2``.
    """
    if representation not in REPRESENTATIONS:
        raise ValueError(f"unknown representation {representation!r}; expected one of {REPRESENTATIONS}")
    slope = chirp_slope(params)
    t = params.sample_times()
    if representation == "complex_baseband":
        return np.exp(1j * np.pi * slope * t * t)
    if representation == "real" and params.f_stop > params.sample_rate / 2:
        raise NyquistError(
            f"f_start + bandwidth = {params.f_stop:g} Hz exceeds Nyquist "
            f"({params.sample_rate / 2:g} Hz); use 'complex_baseband' or 'baseband_real'"
        )
    if representation == "baseband_real":
        return np.sin(np.pi * slope * t * t)
    return np.sin(2 * np.pi * (params.f_start * t + 0.5 * slope * t * t))
