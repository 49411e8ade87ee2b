"""JSON pipeline configuration: schema, defaults and validation.

Top-level keys (all sections optional except ``chirp``)::

    {
      "chirp":   {"f_start", "bandwidth", "duration", "sample_rate", "num_chirps"},
      "scene":   {"targets": [{"range", "radial_velocity", "azimuth", "amplitude"}],
                  "carrier_frequency", "rx_count", "rx_spacing_wavelengths",
                  "noise_std", "rng_seed"},
      "dsp":     {"range_fft_size", "angle_fft_size", "window"},
      "detect":  {"threshold_factor", "max_peaks", "relative_floor"},
      "dbscan":  {"eps", "min_pts", "axis_scales", "neighbor_search"},
      "tracker": {"dt", "process_noise_scale", "process_model", "measurement_noise",
                  "initial_covariance_scale", "joseph_form", "association",
                  "confirm_threshold", "delete_threshold", "gate", "initial_velocity"},
      "num_frames", "frame_period", "output_dir", "c_override", "write_binary"
    }

See README.md for units and defaults.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from .cluster import DbscanParams
from .constants import SPEED_OF_LIGHT
from .detect import DetectPolicy
from .errors import ConfigError, FmcwError
from .scene import SceneConfig, Target
from .track import KalmanConfig, TrackerConfig
from .waveform import ChirpParams

log = logging.getLogger(__name__)

SEED_ENV = "FMCW_SEED"

_SCHEMA = {
    "chirp": {"f_start", "bandwidth", "duration", "sample_rate", "num_chirps"},
    "scene": {"targets", "carrier_frequency", "rx_count", "rx_spacing_wavelengths", "noise_std", "rng_seed"},
    "target": {"range", "radial_velocity", "azimuth", "amplitude"},
    "dsp": {"range_fft_size", "angle_fft_size", "window"},
    "detect": {"threshold_factor", "max_peaks", "relative_floor"},
    "dbscan": {"eps", "min_pts", "axis_scales", "neighbor_search"},
    "tracker": {"dt", "process_noise_scale", "process_model", "measurement_noise", "initial_covariance_scale",
                "joseph_form", "association", "confirm_threshold", "delete_threshold", "gate",
                "initial_velocity"},
    "": {"chirp", "scene", "dsp", "detect", "dbscan", "tracker", "num_frames", "frame_period",
         "output_dir", "c_override", "write_binary"},
}


@dataclass(frozen=True)
class DspOptions:
    range_fft_size: Optional[int] = None
    angle_fft_size: Optional[int] = None
    window: str = "none"


@dataclass(frozen=True)
class PipelineConfig:
    chirp: ChirpParams
    scene: SceneConfig
    dsp: DspOptions = field(default_factory=DspOptions)
    detect: DetectPolicy = field(default_factory=DetectPolicy)
    dbscan: DbscanParams = field(default_factory=lambda: DbscanParams(eps=2.0, min_pts=1))
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    num_frames: int = 1
    frame_period: float = 0.05
    output_dir: Optional[str] = None
    c_override: Optional[float] = None
    write_binary: bool = False

    def to_dict(self) -> Dict[str, Any]:
        """Normalised form with every default filled in (``output_dir`` excluded)."""
        ch, sc, k = self.chirp, self.scene, self.tracker.kalman
        return {
            "chirp": {"f_start": ch.f_start, "bandwidth": ch.bandwidth, "duration": ch.duration,
                      "sample_rate": ch.sample_rate, "num_chirps": ch.num_chirps},
            "scene": {
                "targets": [{"range": t.range, "radial_velocity": t.radial_velocity,
                             "azimuth": t.azimuth, "amplitude": t.amplitude} for t in sc.targets],
                "carrier_frequency": sc.carrier_frequency, "rx_count": sc.rx_count,
                "rx_spacing_wavelengths": sc.rx_spacing_wavelengths, "noise_std": sc.noise_std,
                "rng_seed": sc.rng_seed,
            },
            "dsp": {"range_fft_size": self.dsp.range_fft_size, "angle_fft_size": self.dsp.angle_fft_size,
                    "window": self.dsp.window},
            "detect": {"threshold_factor": self.detect.threshold_factor, "max_peaks": self.detect.max_peaks,
                       "relative_floor": self.detect.relative_floor},
            "dbscan": {"eps": self.dbscan.eps, "min_pts": self.dbscan.min_pts,
                       "axis_scales": None if self.dbscan.axis_scales is None else list(self.dbscan.axis_scales),
                       "neighbor_search": self.dbscan.neighbor_search},
            "tracker": {
                "dt": k.dt, "process_noise_scale": k.process_noise_scale, "process_model": k.process_model,
                "measurement_noise": k.measurement_noise.tolist(),
                "initial_covariance_scale": k.initial_covariance_scale, "joseph_form": k.joseph_form,
                "association": self.tracker.association, "confirm_threshold": self.tracker.confirm_threshold,
                "delete_threshold": self.tracker.delete_threshold, "gate": self.tracker.gate,
                "initial_velocity": list(self.tracker.initial_velocity),
            },
            "num_frames": self.num_frames,
            "frame_period": self.frame_period,
            "c_override": self.c_override,
            "write_binary": self.write_binary,
        }

    def parameter_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("ascii")).hexdigest()

    @property
    def c(self) -> float:
        return self.scene.c


class _Reader:
    """Pulls typed, validated values out of one JSON object."""

    def __init__(self, obj, path: str, lenient: bool):
        if not isinstance(obj, dict):
            raise ConfigError(f"{path or 'config'} must be a JSON object", field=path or None)
        self.obj, self.path = obj, path
        known = _SCHEMA["target" if path.startswith("scene.targets[") else path]
        for key in obj:
            if key not in known:
                msg = f"unknown key {self._name(key)!r}"
                if not lenient:
                    raise ConfigError(msg, field=self._name(key))
                log.warning(msg)

    def _name(self, key):
        return f"{self.path}.{key}" if self.path else key

    def fail(self, key, why):
        raise ConfigError(f"{self._name(key)} {why}", field=self._name(key))

    def raw(self, key, default=None):
        return self.obj.get(key, default)

    def number(self, key, default=None, check=None, why="", allow_none=False):
        val = self.obj.get(key, default)
        if val is None:
            if allow_none:
                return None
            self.fail(key, "is required")
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            self.fail(key, "must be a finite number")
        if check is not None and not check(val):
            self.fail(key, why)
        return float(val)

    def integer(self, key, default=None, check=None, why="", allow_none=False):
        val = self.obj.get(key, default)
        if val is None:
            if allow_none:
                return None
            self.fail(key, "is required")
        if isinstance(val, bool) or not isinstance(val, int):
            self.fail(key, "must be an integer")
        if check is not None and not check(val):
            self.fail(key, why)
        return int(val)

    def choice(self, key, default, options):
        val = self.obj.get(key, default)
        if val not in options:
            self.fail(key, f"must be one of {list(options)}")
        return val

    def boolean(self, key, default):
        val = self.obj.get(key, default)
        if not isinstance(val, bool):
            self.fail(key, "must be true or false")
        return val


def _positive(x):
    return x > 0


def _non_negative(x):
    return x >= 0


def parse_config(doc: dict, lenient: bool = False, seed: Optional[int] = None) -> PipelineConfig:
    """Validate a decoded JSON document and build a :class:`PipelineConfig`.

    Seed precedence: ``seed`` argument, then ``scene.rng_seed``, then the
    ``FMCW_SEED`` environment variable, then 0.
    """
    top = _Reader(doc, "", lenient)
    if "chirp" not in doc:
        raise ConfigError("chirp section is required", field="chirp")

    c = top.number("c_override", None, _positive, "must be > 0", allow_none=True)

    r = _Reader(doc["chirp"], "chirp", lenient)
    f_start = r.number("f_start", None, _non_negative, "must be >= 0")
    bandwidth = r.number("bandwidth", None, _positive, "must be > 0")
    duration = r.number("duration", None, _positive, "must be > 0")
    fs = r.number("sample_rate", None, _positive, "must be > 0")
    n_chirps = r.integer("num_chirps", 1, lambda v: v >= 1, "must be >= 1")
    if math.floor(fs * duration) < 2:
        r.fail("sample_rate", "times chirp.duration must give at least 2 samples")
    chirp = ChirpParams(f_start, bandwidth, duration, fs, n_chirps)

    r = _Reader(doc.get("scene", {}), "scene", lenient)
    targets = []
    raw_targets = r.raw("targets", [])
    if not isinstance(raw_targets, list):
        r.fail("targets", "must be a list")
    for i, t in enumerate(raw_targets):
        tr = _Reader(t, f"scene.targets[{i}]", lenient)
        targets.append(Target(
            tr.number("range", None, _non_negative, "must be >= 0"),
            tr.number("radial_velocity", 0.0),
            tr.number("azimuth", 0.0, lambda v: abs(v) < 90, "must lie in (-90, 90) degrees"),
            tr.number("amplitude", 1.0, _positive, "must be > 0"),
        ))
    if seed is None:
        seed = r.integer("rng_seed", None, allow_none=True)
    if seed is None and os.environ.get(SEED_ENV, "").strip():
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer", field=SEED_ENV) from None
    if seed is None:
        seed = 0
    for i, t in enumerate(targets):
        if chirp.slope() * 2.0 * t.range / (SPEED_OF_LIGHT if c is None else c) >= fs:
            raise ConfigError(f"scene.targets[{i}].range {t.range:g} m puts its beat frequency at or above "
                              f"the sample rate", field=f"scene.targets[{i}].range")
    scene = SceneConfig(
        targets,
        carrier_frequency=r.number("carrier_frequency", f_start, _positive, "must be > 0"),
        rx_count=r.integer("rx_count", 1, lambda v: v >= 1, "must be >= 1"),
        rx_spacing_wavelengths=r.number("rx_spacing_wavelengths", 0.5, _positive, "must be > 0"),
        noise_std=r.number("noise_std", 0.0, _non_negative, "must be >= 0"),
        rng_seed=int(seed),
        c=SPEED_OF_LIGHT if c is None else c,
    )

    r = _Reader(doc.get("dsp", {}), "dsp", lenient)
    dsp = DspOptions(
        r.integer("range_fft_size", None, lambda v: v >= chirp.samples_per_chirp,
                  f"must be >= samples per chirp ({chirp.samples_per_chirp})", allow_none=True),
        r.integer("angle_fft_size", None, lambda v: v >= scene.rx_count,
                  f"must be >= scene.rx_count ({scene.rx_count})", allow_none=True),
        r.choice("window", "none", ("none", "hann")),
    )

    r = _Reader(doc.get("detect", {}), "detect", lenient)
    detect = DetectPolicy(
        r.number("threshold_factor", 8.0, _positive, "must be > 0"),
        r.integer("max_peaks", 32, lambda v: v >= 1, "must be >= 1"),
        r.number("relative_floor", 0.0, lambda v: 0 <= v < 1, "must lie in [0, 1)"),
    )

    r = _Reader(doc.get("dbscan", {}), "dbscan", lenient)
    scales = r.raw("axis_scales")
    if scales is not None:
        if (not isinstance(scales, list) or len(scales) != 3
                or not all(isinstance(s, (int, float)) and not isinstance(s, bool) and s > 0 for s in scales)):
            r.fail("axis_scales", "must be a list of 3 positive numbers")
    dbscan = DbscanParams(
        r.number("eps", 2.0, _positive, "must be > 0"),
        r.integer("min_pts", 1, lambda v: v >= 1, "must be >= 1"),
        scales,
        r.choice("neighbor_search", "brute", ("brute", "grid")),
    )

    frame_period = top.number("frame_period", 0.05, _positive, "must be > 0")
    r = _Reader(doc.get("tracker", {}), "tracker", lenient)
    mnoise = r.raw("measurement_noise", [[5.0, 0.0], [0.0, 5.0]])
    try:
        R = np.array(mnoise, dtype=float)
        ok = R.shape == (2, 2) and np.allclose(R, R.T) and np.all(np.linalg.eigvalsh(R) > 0)
    except (TypeError, ValueError):
        ok = False
    if not ok:
        r.fail("measurement_noise", "must be a symmetric positive-definite 2x2 matrix")
    init_v = r.raw("initial_velocity", [0.0, 0.0])
    if (not isinstance(init_v, list) or len(init_v) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in init_v)):
        r.fail("initial_velocity", "must be a list of 2 numbers")
    kalman = KalmanConfig(
        dt=r.number("dt", frame_period, _positive, "must be > 0"),
        process_noise_scale=r.number("process_noise_scale", 1.0, _non_negative, "must be >= 0"),
        measurement_noise=R,
        initial_covariance_scale=r.number("initial_covariance_scale", 1000.0, _positive, "must be > 0"),
        process_model=r.choice("process_model", "identity", ("identity", "white_acceleration")),
        joseph_form=r.boolean("joseph_form", False),
    )
    tracker = TrackerConfig(
        kalman,
        association=r.choice("association", "optimal", ("optimal", "nn")),
        confirm_threshold=r.integer("confirm_threshold", 3, lambda v: v >= 1, "must be >= 1"),
        delete_threshold=r.integer("delete_threshold", 3, lambda v: v >= 1, "must be >= 1"),
        gate=r.number("gate", None, _positive, "must be > 0", allow_none=True),
        initial_velocity=(float(init_v[0]), float(init_v[1])),
    )

    out_dir = top.raw("output_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        top.fail("output_dir", "must be a string")

    return PipelineConfig(
        chirp=chirp, scene=scene, dsp=dsp, detect=detect, dbscan=dbscan, tracker=tracker,
        num_frames=top.integer("num_frames", 1, lambda v: v >= 1, "must be >= 1"),
        frame_period=frame_period,
        output_dir=out_dir,
        c_override=c,
        write_binary=top.boolean("write_binary", False),
    )


def load_config(path, lenient: bool = False, seed: Optional[int] = None) -> PipelineConfig:
    """Read and validate a JSON config file.

    Raises :class:`ConfigError` carrying ``line``/``column`` for syntax
    errors and ``field`` for validation failures.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: JSON parse error: {exc.msg}",
                          line=exc.lineno, column=exc.colno) from None
    try:
        return parse_config(doc, lenient=lenient, seed=seed)
    except ConfigError:
        raise
    except FmcwError as exc:
        raise ConfigError(str(exc)) from exc
