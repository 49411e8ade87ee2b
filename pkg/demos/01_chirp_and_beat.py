"""Chirp synthesis and the range <-> beat-frequency relation.

Run: python demos/01_chirp_and_beat.py
"""
import numpy as np

from fmcw import ChirpParams, beat_frequency, chirp_slope, instantaneous_frequency, range_from_beat, synthesize_chirp

# --- a slow audio-rate chirp we can inspect sample by sample ---
audio = ChirpParams(f_start=0.0, bandwidth=100.0, duration=1.0, sample_rate=1000.0)
s = synthesize_chirp(audio, "real")
print(f"audio chirp: {len(s)} samples, slope {chirp_slope(audio):g} Hz/s")
for t in (0.0, 0.25, 0.5, 1.0):
    print(f"  f({t:4.2f} s) = {instantaneous_frequency(audio, t):6.1f} Hz")

# zero crossings in a 0.1 s window around the midpoint give ~50 Hz
win = s[450:550]
crossings = np.count_nonzero(np.diff(np.sign(win[win != 0])))
print(f"  zero-crossing estimate near t=0.5 s: {crossings / 0.2:.1f} Hz")

# --- an automotive chirp: 77 GHz, 150 MHz sweep in 20 us ---
car = ChirpParams(77e9, 150e6, 20e-6, 10e6, num_chirps=128)
S = chirp_slope(car)
print(f"\n77 GHz chirp: slope {S:.3e} Hz/s, {car.samples_per_chirp} samples per chirp")
for r in (1.0, 50.0, 150.0):
    fb = beat_frequency(S, r)
    print(f"  R = {r:6.1f} m -> f_b = {fb / 1e3:9.3f} kHz -> back to {range_from_beat(S, fb):.6f} m")
print(f"  unambiguous range at fs/2 (real sampling) ~ {range_from_beat(S, car.sample_rate / 2):.1f} m,"
      f" at fs (complex) ~ {range_from_beat(S, car.sample_rate):.1f} m")

# complex baseband replica has unit modulus everywhere
bb = synthesize_chirp(car)
print(f"  complex baseband |s| range: [{np.abs(bb).min():.15f}, {np.abs(bb).max():.15f}]")
