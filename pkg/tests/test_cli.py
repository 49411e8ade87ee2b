import json

import pytest

from fmcw import __version__
from fmcw import io as fio
from fmcw.cli import main


def test_version(capsys):
    assert main(["version"]) == 0
    assert capsys.readouterr().out.strip() == f"fmcw {__version__}"


def test_pipeline_command(desk_config, tmp_path, capsys):
    assert main(["pipeline", "-c", str(desk_config), "-o", str(tmp_path / "o")]) == 0
    assert "2 confirmed tracks" in capsys.readouterr().out
    m = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert m["seed"] == 1234


def test_seed_flag_overrides(desk_config, tmp_path):
    assert main(["pipeline", "-c", str(desk_config), "-o", str(tmp_path / "o"), "--seed", "5"]) == 0
    assert json.loads((tmp_path / "o" / "manifest.json").read_text())["seed"] == 5


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"chirp": {"f_start": 0, "bandwidth": -1, "duration": 1e-3, "sample_rate": 1e6}}')
    assert main(["pipeline", "-c", str(bad), "-o", str(tmp_path / "o")]) == 2
    assert "chirp.bandwidth" in capsys.readouterr().err
    unknown = tmp_path / "u.json"
    unknown.write_text('{"chirp": {"f_start": 77e9, "bandwidth": 1e6, "duration": 1e-3, "sample_rate": 1e6, "num_chirps": 2},'
                       ' "extra": 1}')
    assert main(["pipeline", "-c", str(unknown), "-o", str(tmp_path / "o")]) == 2
    assert main(["pipeline", "-c", str(unknown), "-o", str(tmp_path / "o"), "--lenient"]) == 0


def test_runtime_error_exit_3(configs_dir, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    assert main(["pipeline", "-c", str(configs_dir / "empty_scene.json"), "-o", str(blocker / "o")]) == 3
    assert "output" in capsys.readouterr().err
    assert main(["kdist", "-i", str(tmp_path / "missing.csv"), "-k", "1"]) == 3


def test_stage_by_stage(configs_dir, tmp_path, capsys):
    doc = json.loads((configs_dir / "desk_two_targets.json").read_text())
    doc["num_frames"] = 4
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps(doc))
    assert main(["simulate", "-c", str(conf), "-o", str(tmp_path / "cubes")]) == 0
    cubes = sorted((tmp_path / "cubes").glob("*_cube.bin"))
    assert len(cubes) == 4
    assert main(["process", "-i", str(cubes[0]), "-o", str(tmp_path / "rd")]) == 0
    assert (tmp_path / "rd" / "frame_0000_heatmap.pgm").exists()
    point_files = []
    for cube in cubes:
        assert main(["detect", "-i", str(cube), "-o", str(tmp_path / "pts")]) == 0
    point_files = sorted((tmp_path / "pts").glob("*_points.csv"))
    assert len(fio.read_point_cloud_csv(point_files[0])) == 2
    clustered = []
    for pf in point_files:
        out = tmp_path / "cl" / pf.name
        assert main(["cluster", "-i", str(pf), "-o", str(out), "--eps", "2", "--min-pts", "1"]) == 0
        clustered.append(str(out))
    rows = fio.read_point_cloud_csv(clustered[0])
    assert sorted(r["cluster"] for r in rows) == [0, 1]
    capsys.readouterr()
    assert main(["track", "-i", *clustered, "-o", str(tmp_path / "tracks.csv"), "-c", str(conf)]) == 0
    assert capsys.readouterr().out.startswith("2 confirmed tracks")
    last = [r for r in fio.read_tracks_csv(tmp_path / "tracks.csv") if r["frame"] == 3]
    assert [r["status"] for r in last] == ["confirmed", "confirmed"]


def test_stage_outputs_match_pipeline(configs_dir, tmp_path):
    doc = json.loads((configs_dir / "desk_two_targets.json").read_text())
    doc["num_frames"] = 1
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps(doc))
    main(["simulate", "-c", str(conf), "-o", str(tmp_path / "s")])
    main(["process", "-i", str(tmp_path / "s" / "frame_0000_cube.bin"), "-o", str(tmp_path / "s")])
    main(["pipeline", "-c", str(conf), "-o", str(tmp_path / "p")])
    for name in ("frame_0000_rdmap.csv", "frame_0000_heatmap.pgm"):
        assert (tmp_path / "s" / name).read_bytes() == (tmp_path / "p" / name).read_bytes()


def test_kdist_command(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    fio.write_point_cloud_csv([(0, 0, 0), (1, 0, 0), (3, 0, 0)], pts)
    assert main(["kdist", "-i", str(pts), "-k", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:3] == ["1.0", "1.0", "2.0"]
    assert out[3].startswith("suggested eps: ")


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as ei:
        main([])
    assert ei.value.code == 2
