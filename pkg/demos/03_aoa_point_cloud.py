"""Angle FFT over an 8-element array and the (x, y, v) point cloud.

Note z carries radial velocity, not height.

Run: python demos/03_aoa_point_cloud.py
"""
import math

from fmcw import (ChirpParams, SceneConfig, Target, aoa_from_phase, antenna_phase, detect_peaks, process_frame,
                  simulate_frame, to_point_cloud)
from fmcw.detect import DetectPolicy

# phase-difference AoA for a single antenna pair
dphi = math.pi / 4
print(f"two antennas 0.5 m apart at 3 cm wavelength, dphi = pi/4 -> {aoa_from_phase(dphi, 0.5, 0.03):.5f} deg")
print(f"half-wavelength pair, target at 30 deg -> dphi = {antenna_phase(30.0, 1, 0.5):.4f} rad")

chirp = ChirpParams(77e9, 150e6, 20e-6, 10e6, num_chirps=64)
truth = [Target(15.0, 2.0, 30.0), Target(25.0, -1.5, -35.0), Target(35.0, 3.0, 45.0)]
scene = SceneConfig(truth, rx_count=8, rx_spacing_wavelengths=0.5, noise_std=0.02, rng_seed=3)
_, rc = process_frame(simulate_frame(scene, chirp), angle_fft_size=64, window="hann")
print(f"\nradar cube {rc.magnitudes.shape} [range][doppler][angle], "
      f"angle bin near broadside {rc.angle_bin_width():.2f} deg")

# bins past +-90 deg exist in the cube but have no physical angle
dets = [d for d in detect_peaks(rc, DetectPolicy(relative_floor=0.2)) if not math.isnan(rc.angle_of(d.angle_bin))]
print(f"{'x_m':>8} {'y_m':>8} {'v_mps':>7} {'R_m':>7} {'az_deg':>7}")
for p in to_point_cloud(dets, rc):
    print(f"{p.x:8.3f} {p.y:8.3f} {p.z:7.3f} {math.hypot(p.x, p.y):7.2f} "
          f"{math.degrees(math.atan2(p.y, p.x)):7.2f}")
print("truth:", ", ".join(f"({t.range:g} m, {t.azimuth:g} deg, {t.radial_velocity:g} m/s)" for t in truth))
