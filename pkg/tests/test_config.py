import json

import numpy as np
import pytest

from fmcw.config import SEED_ENV, load_config, parse_config
from fmcw.errors import ConfigError

MIN = {"chirp": {"f_start": 77e9, "bandwidth": 150e6, "duration": 20e-6, "sample_rate": 10e6},
       "scene": {"targets": [{"range": 20.0}]}}


def _doc(**over):
    d = json.loads(json.dumps(MIN))
    for path, val in over.items():
        node = d
        keys = path.split("__")
        for k in keys[:-1]:
            node = node.setdefault(k, {})
        node[keys[-1]] = val
    return d


def test_minimal_defaults():
    cfg = parse_config(_doc())
    assert cfg.chirp.num_chirps == 1
    t = cfg.scene.targets[0]
    assert (t.radial_velocity, t.azimuth, t.amplitude) == (0.0, 0.0, 1.0)
    assert cfg.scene.carrier_frequency == 77e9 and cfg.scene.rx_count == 1
    assert cfg.detect.threshold_factor == 8.0 and cfg.detect.max_peaks == 32
    assert (cfg.dbscan.eps, cfg.dbscan.min_pts) == (2.0, 1)
    assert cfg.tracker.confirm_threshold == 3 and cfg.tracker.delete_threshold == 3
    assert cfg.tracker.kalman.dt == cfg.frame_period == 0.05
    assert np.array_equal(cfg.tracker.kalman.R, 5 * np.eye(2))
    assert cfg.num_frames == 1 and cfg.c == 299792458.0


@pytest.mark.parametrize("path,val,field", [
    ("chirp__bandwidth", -1.0, "chirp.bandwidth"),
    ("chirp__num_chirps", 0, "chirp.num_chirps"),
    ("chirp__num_chirps", 2.5, "chirp.num_chirps"),
    ("scene__rx_count", 0, "scene.rx_count"),
    ("scene__targets", [{"range": -3.0}], "scene.targets[0].range"),
    ("scene__targets", [{"range": 5000.0}], "scene.targets[0].range"),
    ("dsp__window", "kaiser", "dsp.window"),
    ("dbscan__eps", 0, "dbscan.eps"),
    ("tracker__measurement_noise", [[1, 2], [2, 1]], "tracker.measurement_noise"),
    ("num_frames", 0, "num_frames"),
])
def test_validation_names_field(path, val, field):
    with pytest.raises(ConfigError) as ei:
        parse_config(_doc(**{path: val}))
    assert ei.value.field == field
    assert field in str(ei.value)


def test_unknown_keys_strict_and_lenient(caplog):
    doc = _doc(chirp__colour="red")
    with pytest.raises(ConfigError, match="chirp.colour"):
        parse_config(doc)
    cfg = parse_config(doc, lenient=True)
    assert cfg.chirp.bandwidth == 150e6
    assert "chirp.colour" in caplog.text


def test_parse_error_line_column(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "chirp": {,\n}')
    with pytest.raises(ConfigError) as ei:
        load_config(p)
    assert (ei.value.line, ei.value.column) == (2, 13)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.json")


def test_matlab_scenario_loads():
    cfg = load_config("configs/matlab_scenario.json")
    assert [t.range for t in cfg.scene.targets] == [50.0, 150.0]
    assert [t.radial_velocity for t in cfg.scene.targets] == [30.0, -20.0]
    assert cfg.chirp.bandwidth == 200e6 and cfg.scene.carrier_frequency == 77e9


def test_seed_precedence(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "99")
    assert parse_config(_doc()).scene.rng_seed == 99
    assert parse_config(_doc(scene__rng_seed=5)).scene.rng_seed == 5
    assert parse_config(_doc(scene__rng_seed=5), seed=7).scene.rng_seed == 7
    monkeypatch.delenv(SEED_ENV)
    assert parse_config(_doc()).scene.rng_seed == 0
    monkeypatch.setenv(SEED_ENV, "abc")
    with pytest.raises(ConfigError):
        parse_config(_doc())


def test_parameter_hash():
    a = parse_config(_doc())
    assert a.parameter_hash() == parse_config(_doc()).parameter_hash()
    # spelling out a default is not a semantic change
    assert parse_config(_doc(detect__max_peaks=32)).parameter_hash() == a.parameter_hash()
    assert parse_config(_doc(output_dir="elsewhere")).parameter_hash() == a.parameter_hash()
    for path, val in [("detect__max_peaks", 31), ("scene__noise_std", 0.1), ("scene__rng_seed", 1),
                      ("tracker__gate", 4.0), ("c_override", 3e8), ("dsp__window", "hann")]:
        assert parse_config(_doc(**{path: val})).parameter_hash() != a.parameter_hash(), path


def test_c_override_reaches_scene():
    cfg = parse_config(_doc(c_override=3e8))
    assert cfg.c == 3e8 and cfg.scene.c == 3e8
