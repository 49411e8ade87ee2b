"""Range, Doppler and angle FFT processing of a raw frame cube.

Axis conventions: the range axis is unshifted (bin 0 = zero range); the
Doppler and angle axes are stored centre-shifted, so stored index ``j`` of an
axis of length ``N`` corresponds to signed bin ``j - N // 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import fft as _fft
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, InvalidParamsError, OutOfRangeError, TooFewChirpsError
from .scene import RawFrameCube
from .waveform import ChirpParams

WINDOWS = ("none", "hann")


@dataclass(frozen=True)
class RangeDopplerGrid:
    """Physical meaning of the range and Doppler axes of a processed frame."""

    chirp: ChirpParams
    carrier_frequency: float
    range_fft_size: int
    c: float = SPEED_OF_LIGHT

    @property
    def range_resolution(self) -> float:
        return self.c / (2.0 * self.chirp.bandwidth)

    @property
    def range_bin_width(self) -> float:
        return bin_to_range(1, max(self.range_fft_size, 2), self.chirp.sample_rate, self.chirp.slope(), self.c)

    @property
    def doppler_velocity_resolution(self) -> float:
        return bin_to_velocity(1, self.chirp.num_chirps, self.chirp.duration, self.carrier_frequency, self.c)

    def range_of(self, range_bin: int) -> float:
        return bin_to_range(range_bin, self.range_fft_size, self.chirp.sample_rate, self.chirp.slope(), self.c)

    def velocity_of(self, doppler_index: int) -> float:
        """Velocity of a stored (centre-shifted) Doppler index."""
        n = self.chirp.num_chirps
        return bin_to_velocity(doppler_index - n // 2, n, self.chirp.duration, self.carrier_frequency, self.c)


@dataclass(frozen=True)
class RangeDopplerMap:
    magnitudes: np.ndarray  # [range_bin][doppler_bin]
    grid: RangeDopplerGrid

    @property
    def range_resolution(self) -> float:
        return self.grid.range_resolution

    @property
    def doppler_velocity_resolution(self) -> float:
        return self.grid.doppler_velocity_resolution

    @property
    def chirp_params(self) -> ChirpParams:
        return self.grid.chirp

    @property
    def carrier_frequency(self) -> float:
        return self.grid.carrier_frequency


@dataclass(frozen=True)
class RadarCube:
    magnitudes: np.ndarray  # [range_bin][doppler_bin][angle_bin]
    rx_count: int
    spacing_wavelengths: float
    angle_fft_size: int
    grid: Optional[RangeDopplerGrid] = None

    def __post_init__(self):
        if self.angle_fft_size < self.rx_count:
            raise InvalidParamsError("angle_fft_size must be >= rx_count")

    def angle_of(self, angle_index: int) -> float:
        """Azimuth in degrees of a stored angle index; NaN outside the arcsin domain."""
        u = (angle_index - self.angle_fft_size // 2) / self.angle_fft_size
        s = u / self.spacing_wavelengths
        if abs(s) > 1.0:
            return math.nan
        return math.degrees(math.asin(s))

    def angle_axis(self) -> np.ndarray:
        return np.array([self.angle_of(b) for b in range(self.angle_fft_size)])

    def angle_bin_width(self) -> float:
        """Width in degrees of the angle bin nearest broadside."""
        c = self.angle_fft_size // 2
        if self.angle_fft_size < 2:
            return 180.0
        return self.angle_of(c + 1) - self.angle_of(c)


@dataclass(frozen=True)
class Heatmap:
    values: np.ndarray
    source: Optional[RangeDopplerGrid] = None


def _window(name: Optional[str], n: int) -> Optional[np.ndarray]:
    if name is None or name == "none":
        return None
    if name == "hann":
        return np.hanning(n) if n > 1 else np.ones(1)
    raise ValueError(f"unknown window {name!r}; expected one of {WINDOWS}")


def dft(seq, size=None) -> np.ndarray:
    return _fft.dft(seq, size)


def range_fft(cube: Union[RawFrameCube, np.ndarray], fft_size: Optional[int] = None,
              window: Optional[str] = None) -> np.ndarray:
    """First FFT: transform each chirp's samples into a range profile.

    Returns a complex ``[rx][chirp][range_bin]`` array. Real-valued input
    keeps only the ``fft_size // 2`` non-negative frequency bins; complex
    baseband input keeps all of them.
    """
    samples = cube.samples if isinstance(cube, RawFrameCube) else np.asarray(cube)
    if samples.ndim != 3:
        raise InvalidParamsError(f"expected a [rx][chirp][sample] array, got shape {samples.shape}")
    n = samples.shape[-1]
    size = n if fft_size is None else int(fft_size)
    w = _window(window, n)
    data = samples if w is None else samples * w
    spectrum = _fft.fft(data, n=size, axis=-1)
    if np.isrealobj(samples):
        spectrum = spectrum[..., : size // 2]
    return spectrum


def doppler_fft(range_profiles: np.ndarray, window: Optional[str] = None) -> np.ndarray:
    """Second FFT across chirps, centre-shifted; returns ``[rx][range_bin][doppler_bin]``."""
    rp = np.asarray(range_profiles)
    if rp.ndim != 3:
        raise InvalidParamsError(f"expected a [rx][chirp][range_bin] array, got shape {rp.shape}")
    n_chirps = rp.shape[1]
    if n_chirps < 2:
        raise TooFewChirpsError(f"Doppler processing needs >= 2 chirps (got {n_chirps})")
    w = _window(window, n_chirps)
    if w is not None:
        rp = rp * w[None, :, None]
    spectrum = _fft.fft(rp, axis=1)
    spectrum = _fft.fftshift(spectrum, axis=1)
    return np.swapaxes(spectrum, 1, 2)


def default_angle_fft_size(rx_count: int) -> int:
    # single antenna: one bin, azimuth unobservable
    return 1 if rx_count == 1 else max(64, rx_count)


def angle_fft(doppler_cube: np.ndarray, angle_fft_size: Optional[int] = None,
              spacing_wavelengths: float = 0.5, window: Optional[str] = None,
              grid: Optional[RangeDopplerGrid] = None) -> RadarCube:
    """Third FFT across receive antennas, zero-padded and centre-shifted.

    Stored angle index ``b`` corresponds to normalised spatial frequency
    ``u = (b - A//2) / A`` cycles per element, i.e. azimuth
    ``asin(u / spacing_wavelengths)``. Bins whose argument leaves [-1, 1]
    are kept in the cube but map to NaN degrees.
    """
    dc = np.asarray(doppler_cube)
    if dc.ndim != 3:
        raise InvalidParamsError(f"expected a [rx][range_bin][doppler_bin] array, got shape {dc.shape}")
    rx_count = dc.shape[0]
    size = default_angle_fft_size(rx_count) if angle_fft_size is None else int(angle_fft_size)
    if size < rx_count:
        raise InvalidParamsError(f"angle_fft_size {size} smaller than rx_count {rx_count}")
    if not spacing_wavelengths > 0:
        raise InvalidParamsError("spacing_wavelengths must be > 0")
    w = _window(window, rx_count)
    if w is not None:
        dc = dc * w[:, None, None]
    spectrum = _fft.fftshift(_fft.fft(dc, n=size, axis=0), axis=0)
    mags = np.abs(np.moveaxis(spectrum, 0, -1))
    return RadarCube(mags, rx_count, spacing_wavelengths, size, grid)


def range_doppler_map(doppler_cube: np.ndarray, grid: RangeDopplerGrid) -> RangeDopplerMap:
    """Non-coherent (mean magnitude) combination of the rx channels."""
    return RangeDopplerMap(np.abs(np.asarray(doppler_cube)).mean(axis=0), grid)


def process_frame(cube: RawFrameCube, range_fft_size: Optional[int] = None,
                  angle_fft_size: Optional[int] = None, window: Optional[str] = None,
                  carrier_frequency: Optional[float] = None, c: Optional[float] = None):
    """Run all three FFTs on one frame; returns ``(RangeDopplerMap, RadarCube)``."""
    scene = cube.scene_meta
    if carrier_frequency is None:
        carrier_frequency = scene.carrier_frequency if scene is not None else cube.chirp_params.f_start
    if c is None:
        c = scene.c if scene is not None else SPEED_OF_LIGHT
    spacing = scene.rx_spacing_wavelengths if scene is not None else 0.5
    n = cube.chirp_params.samples_per_chirp
    size = n if range_fft_size is None else int(range_fft_size)
    grid = RangeDopplerGrid(cube.chirp_params, carrier_frequency, size, c)

    rp = range_fft(cube, size, window)
    dc = doppler_fft(rp, window)
    rd = range_doppler_map(dc, grid)
    rc = angle_fft(dc, angle_fft_size, spacing, window, grid)
    return rd, rc


def aoa_from_phase(delta_phi: float, spacing: float, wavelength: float) -> float:
    """Azimuth in degrees from the phase difference between two antennas."""
    arg = delta_phi * wavelength / (2.0 * math.pi * spacing)
    if abs(arg) > 1.0:
        # tolerate round-off at the boundary only
        if abs(arg) - 1.0 > 1e-12:
            raise DomainError(f"arcsin argument {arg:.6g} outside [-1, 1]")
        arg = math.copysign(1.0, arg)
    return math.degrees(math.asin(arg))


def bin_to_range(range_bin: int, fft_size: int, sample_rate: float, slope: float,
                 c: float = SPEED_OF_LIGHT) -> float:
    if not 0 <= range_bin < fft_size:
        raise OutOfRangeError(f"range bin {range_bin} outside [0, {fft_size})")
    f_beat = range_bin * sample_rate / fft_size
    return f_beat * c / (2.0 * slope)


def bin_to_velocity(doppler_bin_centered: int, num_chirps: int, chirp_duration: float,
                    carrier: float, c: float = SPEED_OF_LIGHT) -> float:
    if abs(doppler_bin_centered) > num_chirps / 2:
        raise OutOfRangeError(f"Doppler bin {doppler_bin_centered} outside +-{num_chirps / 2}")
    f_doppler = doppler_bin_centered / (num_chirps * chirp_duration)
    return f_doppler * (c / carrier) / 2.0


def normalize_heatmap(rd_map: Union[RangeDopplerMap, np.ndarray]) -> Heatmap:
    """Scale magnitudes to [0, 1] by the global maximum; all-zero stays zero."""
    if isinstance(rd_map, RangeDopplerMap):
        mags, grid = rd_map.magnitudes, rd_map.grid
    else:
        mags, grid = np.asarray(rd_map, dtype=float), None
    peak = float(np.max(mags)) if mags.size else 0.0
    if peak <= 0.0:
        return Heatmap(np.zeros_like(mags, dtype=float), grid)
    return Heatmap(np.clip(mags / peak, 0.0, 1.0), grid)
