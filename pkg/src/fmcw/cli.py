"""``fmcw`` command line entry point.

Exit codes: 0 success, 2 configuration error, 3 runtime / stage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import OrderedDict
from pathlib import Path

import numpy as np

from . import __version__
from . import io as fio
from .cluster import NOISE, DbscanParams, Labeling, cluster_centroids, dbscan, k_distance, suggest_eps
from .config import PipelineConfig, load_config, parse_config
from .detect import detect_peaks, to_point_cloud
from .dsp import normalize_heatmap, process_frame
from .errors import ConfigError, FmcwError, StageError
from .pipeline import run_pipeline
from .scene import RawFrameCube, simulate_frame
from .track import Tracker

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _cube_frames(path):
    samples, header = fio.read_cube(path)
    try:
        cfg = parse_config(header["config"], seed=header["config"]["scene"]["rng_seed"])
    except KeyError as exc:
        raise ConfigError(f"{path}: cube header lacks {exc}") from None
    scene = cfg.scene.advanced(header.get("frame", 0) * cfg.frame_period)
    cube = RawFrameCube(samples, cfg.chirp, scene)
    return cube, cfg, int(header.get("frame", 0))


def cmd_simulate(args):
    cfg = load_config(args.config, lenient=args.lenient, seed=args.seed)
    out = Path(args.output)
    for f in range(cfg.num_frames):
        scene = cfg.scene.advanced(f * cfg.frame_period)
        try:
            cube = simulate_frame(scene, cfg.chirp, frame_index=f)
        except FmcwError as exc:
            raise StageError("simulate", str(exc)) from exc
        path = out / f"frame_{f:04d}_cube.bin"
        fio.write_cube(cube.samples, path, {"frame": f, "config": cfg.to_dict()})
        print(path)
    return EXIT_OK


def cmd_process(args):
    cube, cfg, frame = _cube_frames(args.input)
    rd, _ = process_frame(cube, cfg.dsp.range_fft_size, cfg.dsp.angle_fft_size, cfg.dsp.window)
    out = Path(args.output)
    stem = f"frame_{frame:04d}"
    fio.write_rdmap_csv(rd, out / f"{stem}_rdmap.csv")
    fio.write_heatmap_pgm(normalize_heatmap(rd), out / f"{stem}_heatmap.pgm")
    if cfg.write_binary:
        fio.write_rdmap_binary(rd, out / f"{stem}_rdmap.f32")
    print(out / f"{stem}_rdmap.csv")
    return EXIT_OK


def cmd_detect(args):
    cube, cfg, frame = _cube_frames(args.input)
    _, rc = process_frame(cube, cfg.dsp.range_fft_size, cfg.dsp.angle_fft_size, cfg.dsp.window)
    dets = [d for d in detect_peaks(rc, cfg.detect) if not np.isnan(rc.angle_of(d.angle_bin))]
    points = to_point_cloud(dets, rc)
    path = Path(args.output) / f"frame_{frame:04d}_points.csv"
    fio.write_point_cloud_csv(points, path, frame=frame)
    print(path)
    return EXIT_OK


def _dbscan_params(args) -> DbscanParams:
    base = load_config(args.config).dbscan if args.config else DbscanParams(eps=2.0, min_pts=1)
    return DbscanParams(
        eps=base.eps if args.eps is None else args.eps,
        min_pts=base.min_pts if args.min_pts is None else args.min_pts,
        axis_scales=base.axis_scales if args.axis_scales is None else args.axis_scales,
        neighbor_search=base.neighbor_search,
    )


def cmd_cluster(args):
    params = _dbscan_params(args)
    rows = fio.read_point_cloud_csv(args.input)
    labels = [None] * len(rows)
    frames = OrderedDict()
    for i, r in enumerate(rows):
        frames.setdefault(r["frame"], []).append(i)
    for idx in frames.values():
        labeling = dbscan(fio.point_rows_to_array([rows[i] for i in idx]), params)
        for i, lab in zip(idx, labeling.labels):
            labels[i] = int(lab)
    points = [(r["x_m"], r["y_m"], r["v_mps"], r["magnitude"]) for r in rows]
    fio.write_point_cloud_csv(points, args.output, labels, [r["track_id"] for r in rows],
                              frame=[r["frame"] for r in rows])
    print(args.output)
    return EXIT_OK


def cmd_track(args):
    cfg = load_config(args.config).tracker if args.config else None
    tracker = Tracker(cfg)
    rows = []
    for path in args.input:
        rows.extend(fio.read_point_cloud_csv(path))
    frames = OrderedDict()
    for r in sorted(rows, key=lambda r: r["frame"]):
        frames.setdefault(r["frame"], []).append(r)
    history = []
    for frame, group in frames.items():
        pts = fio.point_rows_to_array(group)
        if all(r["cluster"] is None for r in group):
            labels = np.arange(len(group))
        else:
            labels = np.array([NOISE if r["cluster"] is None else r["cluster"] for r in group])
        lab = Labeling(labels, labels != NOISE)
        weights = [r["magnitude"] if r["magnitude"] > 0 else 1.0 for r in group]
        cents = cluster_centroids(pts, lab, weights) if len(group) else np.zeros((0, 3))
        for t in tracker.step(cents[:, :2]):
            history.append((frame, t))
    fio.write_tracks_csv(history, args.output)
    print(f"{len(tracker.confirmed)} confirmed tracks -> {args.output}")
    return EXIT_OK


def cmd_kdist(args):
    rows = fio.read_point_cloud_csv(args.input)
    kd = k_distance(fio.point_rows_to_array(rows), args.k)
    for d in kd:
        print(fio.fmt_number(d))
    if len(kd) >= 3:
        sug = suggest_eps(kd)
        flag = " (degenerate curve)" if sug.degenerate else ""
        print(f"suggested eps: {fio.fmt_number(sug.eps)}{flag}")
    return EXIT_OK


def cmd_pipeline(args):
    cfg: PipelineConfig = load_config(args.config, lenient=args.lenient, seed=args.seed)
    manifest = run_pipeline(cfg, args.output)
    print(f"{manifest['num_frames']} frames, {manifest['confirmed_tracks']} confirmed tracks, "
          f"parameter hash {manifest['parameter_hash'][:12]}")
    return EXIT_OK


def cmd_version(args):
    print(f"fmcw {__version__}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fmcw", description="FMCW radar simulation and processing chain")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="write raw frame cubes")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--lenient", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("process", help="range-Doppler map and heatmap from a cube")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_process)

    s = sub.add_parser("detect", help="point cloud from a cube")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("cluster", help="DBSCAN labels for a point-cloud CSV")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("-c", "--config")
    s.add_argument("--eps", type=float)
    s.add_argument("--min-pts", type=int)
    s.add_argument("--axis-scales", type=float, nargs=3)
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("track", help="Kalman tracks from point-cloud CSVs")
    s.add_argument("-i", "--input", required=True, nargs="+")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("-c", "--config")
    s.set_defaults(func=cmd_track)

    s = sub.add_parser("kdist", help="sorted k-distances and a suggested eps")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-k", type=int, required=True)
    s.set_defaults(func=cmd_kdist)

    s = sub.add_parser("pipeline", help="run the full chain")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--lenient", action="store_true")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("version", help="print the version")
    s.set_defaults(func=cmd_version)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="fmcw: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"fmcw: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(f"fmcw: stage '{exc.stage}' failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (FmcwError, OSError, ValueError) as exc:
        print(f"fmcw: {args.command} failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
