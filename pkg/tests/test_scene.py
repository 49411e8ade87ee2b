import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmcw.errors import InvalidParamsError, NyquistError
from fmcw.scene import (SceneConfig, Target, antenna_phase, beat_frequency, doppler_shift,
                        range_from_beat, simulate_frame, velocity_from_doppler)
from fmcw.waveform import ChirpParams

SMALL = ChirpParams(77e9, 150e6, 20e-6, 10e6, 16)


def test_beat_frequency_examples():
    assert beat_frequency(1e14, 0.0) == 0.0
    assert beat_frequency(2e11, 37.5, c=3e8) == pytest.approx(50e3, rel=1e-12)
    with pytest.raises(InvalidParamsError):
        beat_frequency(0.0, 1.0)
    with pytest.raises(InvalidParamsError):
        beat_frequency(1.0, -1.0)


@given(st.floats(1e9, 1e16), st.floats(0, 1e4))
def test_range_beat_round_trip(slope, r):
    assert range_from_beat(slope, beat_frequency(slope, r)) == pytest.approx(r, rel=1e-12, abs=1e-12)


def test_doppler_examples():
    assert doppler_shift(0.0, 77e9) == 0.0
    assert doppler_shift(30.0, 77e9, c=3e8) == pytest.approx(15.4e3, rel=1e-12)
    assert velocity_from_doppler(doppler_shift(-7.5, 24e9), 24e9) == pytest.approx(-7.5, rel=1e-12)


def test_antenna_phase():
    assert antenna_phase(0.0, 3, 0.5) == 0.0
    assert antenna_phase(30.0, 1, 0.5) == pytest.approx(math.pi / 2, rel=1e-12)
    with pytest.raises(InvalidParamsError):
        antenna_phase(90.0, 1, 0.5)


def test_target_validation():
    with pytest.raises(InvalidParamsError):
        Target(range=-1.0)
    with pytest.raises(InvalidParamsError):
        Target(range=1.0, azimuth=95)
    with pytest.raises(InvalidParamsError):
        SceneConfig(rx_count=0)


def test_zero_targets_zero_noise_is_all_zero():
    cube = simulate_frame(SceneConfig(rx_count=2), SMALL)
    assert cube.shape == (2, 16, 200)
    assert not np.any(cube.samples)


def test_single_target_is_pure_tone():
    scene = SceneConfig([Target(30.0, 5.0, 10.0, 2.0)], rx_count=4)
    s = simulate_frame(scene, SMALL).samples
    assert np.allclose(np.abs(s), 2.0, atol=1e-12)
    # constant phase step along fast time equals 2*pi*f_b/fs
    fb = beat_frequency(SMALL.slope(), 30.0)
    step = np.angle(s[0, 0, 1:] * np.conj(s[0, 0, :-1]))
    assert np.allclose(step, 2 * np.pi * fb / SMALL.sample_rate, atol=1e-9)
    # rx phase step from the azimuth
    d = np.angle(s[1, 0, 0] * np.conj(s[0, 0, 0]))
    assert d == pytest.approx(antenna_phase(10.0, 1, 0.5), abs=1e-9)
    # chirp-to-chirp Doppler phase step
    fd = doppler_shift(5.0, 77e9)
    d = np.angle(s[0, 1, 0] * np.conj(s[0, 0, 0]))
    assert d == pytest.approx(2 * np.pi * fd * SMALL.duration, abs=1e-9)


def test_targets_superpose():
    a, b = Target(20.0, 1.0), Target(60.0, -3.0, 5.0)
    sa = simulate_frame(SceneConfig([a], rx_count=2), SMALL).samples
    sb = simulate_frame(SceneConfig([b], rx_count=2), SMALL).samples
    sab = simulate_frame(SceneConfig([a, b], rx_count=2), SMALL).samples
    assert np.allclose(sab, sa + sb, atol=1e-12)


def test_nyquist_error_names_target():
    far = Target(10_000.0)
    with pytest.raises(NyquistError, match="target 1"):
        simulate_frame(SceneConfig([Target(10.0), far]), SMALL)


def test_noise_is_seeded_and_frame_dependent():
    scene = SceneConfig(noise_std=0.1, rng_seed=7)
    a = simulate_frame(scene, SMALL, 0).samples
    b = simulate_frame(scene, SMALL, 0).samples
    c = simulate_frame(scene, SMALL, 1).samples
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)
    assert np.std(a.real) == pytest.approx(0.1, rel=0.05)


def test_advanced_moves_and_clamps():
    scene = SceneConfig([Target(10.0, 2.0), Target(1.0, -5.0)])
    moved = scene.advanced(1.0)
    assert [t.range for t in moved.targets] == [12.0, 0.0]


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 140.0), st.floats(-30, 30), st.floats(-60, 60))
def test_amplitude_bounded_by_sum_of_targets(r, v, az):
    cube = simulate_frame(SceneConfig([Target(r, v, az, 1.5)], rx_count=3), SMALL)
    assert np.max(np.abs(cube.samples)) <= 1.5 + 1e-9


def test_reference_examples():
    assert beat_frequency(1e14, 100.0, c=3e8) == pytest.approx(6.6667e7, rel=1e-4)
    assert velocity_from_doppler(1e3, 77e9, c=3e8) == pytest.approx(1.9481, rel=1e-4)
    # d=0.5 m at lambda=0.03 m is 16.667 wavelengths
    assert antenna_phase(0.42971, 1, 0.5 / 0.03) == pytest.approx(math.pi / 4, rel=1e-4)


def test_range_peak_matches_naive_dft():
    from oracles import naive_dft
    r = 42.0
    cube = simulate_frame(SceneConfig([Target(r, 3.0, 0.0)], rx_count=2), SMALL)
    n = SMALL.samples_per_chirp
    expect = round(beat_frequency(SMALL.slope(), r) * n / SMALL.sample_rate)
    for rx in range(2):
        for k in range(0, SMALL.num_chirps, 5):
            spectrum = np.abs(naive_dft(cube.samples[rx, k])) / n
            assert int(np.argmax(spectrum)) == expect


def test_doppler_phase_regression():
    v = 4.0
    cube = simulate_frame(SceneConfig([Target(42.0, v)]), SMALL)
    n = SMALL.samples_per_chirp
    b = round(beat_frequency(SMALL.slope(), 42.0) * n / SMALL.sample_rate)
    basis = np.exp(-2j * np.pi * b * np.arange(n) / n)
    ph = np.unwrap(np.angle(cube.samples[0] @ basis))
    slope = np.polyfit(np.arange(SMALL.num_chirps), ph, 1)[0]
    expect = 2 * np.pi * doppler_shift(v, 77e9) * SMALL.duration
    assert slope == pytest.approx(expect, rel=1e-6)
