import json

import numpy as np
import pytest

from fmcw import io as fio
from fmcw.config import load_config, parse_config
from fmcw.errors import StageError
from fmcw.pipeline import process_single_frame, run_pipeline
from fmcw.track import Tracker


def test_desk_scene_confirms_two_tracks(desk_config, tmp_path):
    cfg = load_config(desk_config)
    m = run_pipeline(cfg, tmp_path / "out")
    assert m["confirmed_tracks"] == 2
    assert all(f["detections"] == 2 and f["clusters"] == 2 for f in m["frames"])
    assert m["seed"] == 1234 and m["parameter_hash"] == cfg.parameter_hash()
    names = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert names[:5] == ["frame_0000_heatmap.pgm", "frame_0000_points.csv", "frame_0000_rdmap.csv",
                         "frame_0000_tracks.csv", "frame_0001_heatmap.pgm"]
    assert "manifest.json" in names
    on_disk = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert on_disk == json.loads(json.dumps(m))


def test_tracks_follow_truth(desk_config):
    cfg = load_config(desk_config)
    tracker = Tracker(cfg.tracker)
    for f in range(cfg.num_frames):
        res = process_single_frame(cfg, f, tracker)
    truth = []
    for tgt in cfg.scene.advanced((cfg.num_frames - 1) * cfg.frame_period).targets:
        th = np.radians(tgt.azimuth)
        truth.append(tgt.range * np.array([np.cos(th), np.sin(th)]))
    for t in tracker.confirmed:
        assert min(np.linalg.norm(t.position - p) for p in truth) < 2.0
    # every clustered point carries its cluster's track id
    assert all(tid is not None for tid in res.track_ids)


def test_empty_scene(configs_dir, tmp_path):
    m = run_pipeline(load_config(configs_dir / "empty_scene.json"), tmp_path)
    assert m["confirmed_tracks"] == 0 and m["final_tracks"] == []
    for f in range(m["num_frames"]):
        assert fio.read_point_cloud_csv(tmp_path / f"frame_{f:04d}_points.csv") == []
        assert fio.read_tracks_csv(tmp_path / f"frame_{f:04d}_tracks.csv") == []
    assert set(fio.read_pgm(tmp_path / "frame_0000_heatmap.pgm").ravel()) == {0}


def test_rerun_identical_checksums(configs_dir, tmp_path):
    doc = json.loads((configs_dir / "desk_two_targets.json").read_text())
    doc["num_frames"] = 2
    doc["write_binary"] = True
    cfg = parse_config(doc)
    a = run_pipeline(cfg, tmp_path / "a")
    b = run_pipeline(cfg, tmp_path / "b")
    assert a["frames"] == b["frames"]
    assert "frame_0000_rdmap.f32" in a["frames"][0]["files"]
    assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()


def test_stage_error_names_stage(configs_dir, tmp_path):
    cfg = load_config(configs_dir / "empty_scene.json")
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    with pytest.raises(StageError) as ei:
        run_pipeline(cfg, blocker / "out")
    assert ei.value.stage == "output"
    # one chirp cannot be Doppler-processed
    doc = {"chirp": {"f_start": 77e9, "bandwidth": 150e6, "duration": 20e-6, "sample_rate": 10e6,
                     "num_chirps": 1}}
    with pytest.raises(StageError) as ei:
        run_pipeline(parse_config(doc), tmp_path / "x")
    assert ei.value.stage == "process" and "[process]" in str(ei.value)
