"""Deterministic FMCW radar simulation and processing chain.

chirp synthesis -> beat-signal cube -> range/Doppler/angle FFTs -> peak
detection -> (x, y, v) point cloud -> DBSCAN -> Kalman multi-target tracking.
"""

__version__ = "0.1.0"

from .constants import SPEED_OF_LIGHT
from .waveform import ChirpParams, chirp_slope, instantaneous_frequency, synthesize_chirp
from .scene import (RawFrameCube, SceneConfig, Target, antenna_phase, beat_frequency,
                    doppler_shift, range_from_beat, simulate_frame, velocity_from_doppler)
from .dsp import (Heatmap, RadarCube, RangeDopplerGrid, RangeDopplerMap, angle_fft, aoa_from_phase,
                  bin_to_range, bin_to_velocity, dft, doppler_fft, normalize_heatmap, process_frame,
                  range_fft)
from .detect import DetectPolicy, Detection, RadarPoint, detect_peaks, to_point_cloud
from .cluster import DbscanParams, Labeling, dbscan, default_min_pts, k_distance, suggest_eps
from .track import (Assignment, KalmanConfig, Track, Tracker, TrackerConfig, associate_nn,
                    associate_optimal, kf_predict, kf_update, step_tracker)
