"""Peak picking on range-Doppler maps / radar cubes and Cartesian conversion.

Note the point-cloud convention: ``z`` is the radial velocity in m/s, *not*
height. Clustering and tracking downstream operate in this (x, y, v) space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from .dsp import RadarCube, RangeDopplerGrid, RangeDopplerMap
from .errors import InvalidAngleBinError, InvalidParamsError

MAD_TO_SIGMA = 1.4826
# cells below this fraction of the peak are FFT round-off on noiseless data
ROUNDOFF_FLOOR = 1e-10


@dataclass(frozen=True)
class DetectPolicy:
    """Peak acceptance rule.

    ``relative_floor`` additionally rejects peaks below that fraction of the
    strongest cell; 0 disables it. It suppresses FFT sidelobes of strong
    targets, which the median/MAD rule cannot see on noiseless data.
    """

    threshold_factor: float = 8.0
    max_peaks: int = 32
    relative_floor: float = 0.0

    def __post_init__(self):
        if not self.threshold_factor > 0:
            raise InvalidParamsError("detect.threshold_factor must be > 0")
        if int(self.max_peaks) != self.max_peaks or self.max_peaks < 1:
            raise InvalidParamsError("detect.max_peaks must be an integer >= 1")
        if not 0 <= self.relative_floor < 1:
            raise InvalidParamsError("detect.relative_floor must lie in [0, 1)")


@dataclass(frozen=True)
class Detection:
    range_bin: int
    doppler_bin: int
    angle_bin: Optional[int]
    magnitude: float

    def key(self):
        return (self.range_bin, self.doppler_bin, -1 if self.angle_bin is None else self.angle_bin)


@dataclass(frozen=True)
class RadarPoint:
    x: float
    y: float
    z: float  # radial velocity, m/s
    magnitude: float = 0.0

    def as_tuple(self):
        return (self.x, self.y, self.z)


def detection_threshold(mags: np.ndarray, threshold_factor: float) -> float:
    """``median + k * 1.4826 * MAD`` of all cells."""
    flat = np.asarray(mags, dtype=float).ravel()
    med = float(np.median(flat))
    mad = float(np.median(np.abs(flat - med)))
    return med + threshold_factor * MAD_TO_SIGMA * mad


def strict_local_maxima(mags: np.ndarray, wrap_axes: Sequence[int] = ()) -> np.ndarray:
    """Boolean mask of cells strictly greater than every neighbour.

    Axes listed in ``wrap_axes`` are circular (first and last bins are
    neighbours), as for the periodic Doppler and angle spectra; other axes
    end at the grid edge. A circular axis of length 1 is treated as open.
    """
    a = np.asarray(mags, dtype=float)
    wrap = {ax % a.ndim for ax in wrap_axes if a.shape[ax % a.ndim] > 1}
    padded = np.pad(a, [(1, 1) if ax in wrap else (0, 0) for ax in range(a.ndim)], mode="wrap")
    padded = np.pad(padded, [(0, 0) if ax in wrap else (1, 1) for ax in range(a.ndim)],
                    mode="constant", constant_values=-np.inf)
    mask = np.ones(a.shape, dtype=bool)
    for offset in itertools.product((-1, 0, 1), repeat=a.ndim):
        if not any(offset):
            continue
        shifted = tuple(slice(1 + o, 1 + o + n) for o, n in zip(offset, a.shape))
        mask &= a > padded[shifted]
    return mask


def detect_peaks(source: Union[RadarCube, RangeDopplerMap, np.ndarray],
                 policy: Optional[DetectPolicy] = None) -> List[Detection]:
    """Strict local maxima above the robust threshold, strongest first.

    Ties in magnitude are broken by ascending (range, Doppler, angle) index.
    For a RadarCube or RangeDopplerMap the Doppler and angle axes wrap
    around when testing neighbours; a bare array is treated as open.
    """
    policy = policy or DetectPolicy()
    if isinstance(source, (RadarCube, RangeDopplerMap)):
        mags = np.asarray(source.magnitudes, dtype=float)
        wrap = (1, 2) if isinstance(source, RadarCube) else (1,)
    else:
        mags = np.asarray(source, dtype=float)
        wrap = ()
    if mags.ndim not in (2, 3):
        raise InvalidParamsError(f"expected a 2-D or 3-D magnitude grid, got shape {mags.shape}")
    if mags.size == 0:
        return []

    thresh = detection_threshold(mags, policy.threshold_factor)
    floor = max(policy.relative_floor, ROUNDOFF_FLOOR)
    thresh = max(thresh, floor * float(mags.max()))
    hits = strict_local_maxima(mags, wrap) & (mags > thresh)
    idx = np.argwhere(hits)  # row-major, so already ascending by index
    if idx.size == 0:
        return []
    vals = mags[tuple(idx.T)]
    order = np.argsort(-vals, kind="stable")[: policy.max_peaks]

    out = []
    for i in order:
        cell = [int(v) for v in idx[i]]
        angle = cell[2] if mags.ndim == 3 else None
        out.append(Detection(cell[0], cell[1], angle, float(vals[i])))
    return out


def polar_to_point(range_m: float, azimuth_deg: float, velocity: float, magnitude: float = 0.0) -> RadarPoint:
    th = math.radians(azimuth_deg)
    return RadarPoint(range_m * math.cos(th), range_m * math.sin(th), velocity, magnitude)


def to_point_cloud(detections: Sequence[Detection],
                   meta: Union[RadarCube, RangeDopplerMap, RangeDopplerGrid]) -> List[RadarPoint]:
    """Map detections to ``x = R cos(az)``, ``y = R sin(az)``, ``z = v``.

    Detections without an angle bin (from a 2-D map) are placed at azimuth 0.
    """
    cube = meta if isinstance(meta, RadarCube) else None
    if isinstance(meta, RangeDopplerGrid):
        grid = meta
    else:
        grid = meta.grid
    if grid is None:
        raise InvalidParamsError("point-cloud conversion needs range/Doppler grid metadata")

    points = []
    for det in detections:
        rng = grid.range_of(det.range_bin)
        vel = grid.velocity_of(det.doppler_bin)
        if det.angle_bin is None:
            az = 0.0
        else:
            if cube is None:
                raise InvalidParamsError("angle bins need RadarCube metadata")
            az = cube.angle_of(det.angle_bin)
            if math.isnan(az):
                raise InvalidAngleBinError(
                    f"angle bin {det.angle_bin} maps outside [-90, 90] degrees "
                    f"for spacing {cube.spacing_wavelengths} wavelengths"
                )
        points.append(polar_to_point(rng, az, vel, det.magnitude))
    return points


def points_array(points) -> np.ndarray:
    """``(n, 3)`` float array from RadarPoints or coordinate triples."""
    rows = [p.as_tuple() if isinstance(p, RadarPoint) else tuple(p) for p in points]
    if not rows:
        return np.zeros((0, 3))
    return np.asarray(rows, dtype=float)
