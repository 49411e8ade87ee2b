"""Ground-truth targets and dechirped (beat) signal simulation.

The simulator writes the post-mixer signal directly under the stop-and-hop
assumption: within a chirp a target produces a constant beat tone, and its
radial motion shows up only as a phase step from one chirp to the next.

Noise uses numpy's PCG64 bit generator seeded through
``SeedSequence(seed mod 2**64, spawn_key=(frame_index,))``. One frame draws a
single ``(rx, chirp, sample, 2)`` standard-normal block in C order, so each
noise value is fixed by its index rather than by call history.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import InvalidParamsError, NyquistError
from .waveform import ChirpParams, chirp_slope


@dataclass(frozen=True)
class Target:
    """Point scatterer. ``radial_velocity`` is positive when receding."""

    range: float
    radial_velocity: float = 0.0
    azimuth: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.range >= 0:
            raise InvalidParamsError(f"target.range must be >= 0 (got {self.range!r})")
        if not abs(self.azimuth) < 90:
            raise InvalidParamsError(f"target.azimuth must lie in (-90, 90) degrees (got {self.azimuth!r})")
        if not self.amplitude > 0:
            raise InvalidParamsError(f"target.amplitude must be > 0 (got {self.amplitude!r})")


@dataclass(frozen=True)
class SceneConfig:
    targets: Sequence[Target] = field(default_factory=tuple)
    carrier_frequency: float = 77e9
    rx_count: int = 1
    rx_spacing_wavelengths: float = 0.5
    noise_std: float = 0.0
    rng_seed: int = 0
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.carrier_frequency > 0:
            raise InvalidParamsError("scene.carrier_frequency must be > 0")
        if int(self.rx_count) != self.rx_count or self.rx_count < 1:
            raise InvalidParamsError(f"scene.rx_count must be an integer >= 1 (got {self.rx_count!r})")
        if not self.rx_spacing_wavelengths > 0:
            raise InvalidParamsError("scene.rx_spacing_wavelengths must be > 0")
        if not self.noise_std >= 0:
            raise InvalidParamsError("scene.noise_std must be >= 0")
        if not self.c > 0:
            raise InvalidParamsError("scene.c must be > 0")

    def wavelength(self) -> float:
        return self.c / self.carrier_frequency

    def advanced(self, elapsed: float) -> "SceneConfig":
        """Scene after ``elapsed`` seconds of radial motion at constant velocity."""
        moved = []
        for tgt in self.targets:
            moved.append(replace(tgt, range=max(0.0, tgt.range + tgt.radial_velocity * elapsed)))
        return replace(self, targets=tuple(moved))


@dataclass(frozen=True)
class RawFrameCube:
    """Complex baseband samples indexed ``[rx][chirp][sample]``."""

    samples: np.ndarray
    chirp_params: ChirpParams
    scene_meta: Optional[SceneConfig] = None

    def __post_init__(self):
        s = self.samples
        if s.ndim != 3:
            raise InvalidParamsError(f"cube samples must be 3-D [rx][chirp][sample], got shape {s.shape}")
        expect = (self.chirp_params.num_chirps, self.chirp_params.samples_per_chirp)
        if s.shape[1:] != expect:
            raise InvalidParamsError(f"cube shape {s.shape} inconsistent with chirp params {expect}")
        if self.scene_meta is not None and s.shape[0] != self.scene_meta.rx_count:
            raise InvalidParamsError(f"cube has {s.shape[0]} rx channels, scene says {self.scene_meta.rx_count}")

    @property
    def shape(self):
        return self.samples.shape


def beat_frequency(slope: float, range_m: float, c: float = SPEED_OF_LIGHT) -> float:
    """Beat tone ``S * 2R / c`` of a scatterer at ``range_m``."""
    if not slope > 0:
        raise InvalidParamsError(f"slope must be > 0 (got {slope!r})")
    if not range_m >= 0:
        raise InvalidParamsError(f"range must be >= 0 (got {range_m!r})")
    return slope * 2.0 * range_m / c


def range_from_beat(slope: float, f_beat: float, c: float = SPEED_OF_LIGHT) -> float:
    return f_beat * c / (2.0 * slope)


def doppler_shift(radial_velocity: float, carrier_frequency: float, c: float = SPEED_OF_LIGHT) -> float:
    if not carrier_frequency > 0:
        raise InvalidParamsError("carrier_frequency must be > 0")
    return 2.0 * radial_velocity * carrier_frequency / c


def velocity_from_doppler(f_doppler: float, carrier_frequency: float, c: float = SPEED_OF_LIGHT) -> float:
    if not carrier_frequency > 0:
        raise InvalidParamsError("carrier_frequency must be > 0")
    return f_doppler * c / (2.0 * carrier_frequency)


def antenna_phase(azimuth: float, rx_index: int, spacing_wavelengths: float) -> float:
    """Phase lead (rad) of element ``rx_index`` relative to element 0 of a ULA."""
    if not abs(azimuth) < 90:
        raise InvalidParamsError(f"azimuth must lie in (-90, 90) degrees (got {azimuth!r})")
    if rx_index < 0:
        raise InvalidParamsError("rx_index must be >= 0")
    return 2.0 * math.pi * spacing_wavelengths * rx_index * math.sin(math.radians(azimuth))


def _range_phase(f_start: float, range_m: float, c: float) -> float:
    cycles = math.fmod(f_start * 2.0 * range_m / c, 1.0)
    return 2.0 * math.pi * cycles


def noise_generator(seed: int, frame_index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) % 2**64, spawn_key=(int(frame_index),))
    return np.random.Generator(np.random.PCG64(ss))


def simulate_frame(scene: SceneConfig, chirp: ChirpParams, frame_index: int = 0) -> RawFrameCube:
    """Synthesize one frame of dechirped samples for every rx channel.

    Each target contributes
    ``a * exp(i*(2*pi*f_b*t_n + 2*pi*f_D*k*T + phi_rx + phi_0))`` to sample
    ``[rx][k][n]``; circular Gaussian noise with ``noise_std`` per real and
    imaginary component is added on top.
    """
    slope = chirp_slope(chirp)
    n_rx, n_chirp, n_samp = scene.rx_count, chirp.num_chirps, chirp.samples_per_chirp
    t = chirp.sample_times()
    k = np.arange(n_chirp)
    rx = np.arange(n_rx)

    out = np.zeros((n_rx, n_chirp, n_samp), dtype=np.complex128)
    for idx, tgt in enumerate(scene.targets):
        fb = beat_frequency(slope, tgt.range, scene.c)
        if fb >= chirp.sample_rate:
            raise NyquistError(
                f"target {idx} at {tgt.range:g} m has beat frequency {fb:g} Hz >= sample rate "
                f"{chirp.sample_rate:g} Hz"
            )
        fd = doppler_shift(tgt.radial_velocity, scene.carrier_frequency, scene.c)
        phi0 = _range_phase(chirp.f_start, tgt.range, scene.c)
        sin_az = math.sin(math.radians(tgt.azimuth))
        fast = np.exp(1j * 2 * np.pi * fb * t)
        slow = np.exp(1j * 2 * np.pi * fd * chirp.duration * k)
        spatial = np.exp(1j * 2 * np.pi * scene.rx_spacing_wavelengths * sin_az * rx)
        out += (tgt.amplitude * np.exp(1j * phi0)) * (
            spatial[:, None, None] * slow[None, :, None] * fast[None, None, :]
        )

    if scene.noise_std > 0:
        rng = noise_generator(scene.rng_seed, frame_index)
        w = rng.standard_normal((n_rx, n_chirp, n_samp, 2))
        out += scene.noise_std * (w[..., 0] + 1j * w[..., 1])
    return RawFrameCube(out, chirp, scene)
