"""End-to-end orchestration: simulate -> process -> detect -> cluster -> track.

Frame ``f`` simulates the scene after ``f * frame_period`` seconds of radial
motion, so targets drift along their azimuth line from frame to frame.
Per-frame outputs in the run directory::

    frame_0000_rdmap.csv      range-Doppler magnitudes (+ .f32/.f32.json if write_binary)
    frame_0000_heatmap.pgm    normalised map, 8-bit plain PGM
    frame_0000_points.csv     point cloud with cluster and track ids
    frame_0000_tracks.csv     live and newly deleted tracks after this frame
    manifest.json             seed, parameter hash, versions, checksums, final tracks
"""

from __future__ import annotations

import hashlib
import json
import logging
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from . import io as fio
from .cluster import NOISE, cluster_centroids, dbscan
from .config import PipelineConfig
from .detect import Detection, RadarPoint, detect_peaks, to_point_cloud
from .dsp import RadarCube, RangeDopplerMap, normalize_heatmap, process_frame
from .errors import FmcwError, StageError
from .scene import simulate_frame
from .track import CONFIRMED, Track, Tracker

log = logging.getLogger(__name__)


@dataclass
class FrameResult:
    frame: int
    rd_map: RangeDopplerMap
    cube: RadarCube
    detections: List[Detection]
    points: List[RadarPoint]
    labels: np.ndarray
    track_ids: list
    tracks: List[Track]


@contextmanager
def _stage(name):
    """Re-raise library errors inside a stage as a StageError naming it."""
    try:
        yield
    except StageError:
        raise
    except (FmcwError, ValueError, ArithmeticError, OSError) as exc:
        raise StageError(name, str(exc)) from exc


def process_single_frame(config: PipelineConfig, frame: int, tracker: Optional[Tracker] = None) -> FrameResult:
    with _stage("simulate"):
        scene = config.scene.advanced(frame * config.frame_period)
        raw = simulate_frame(scene, config.chirp, frame_index=frame)
    with _stage("process"):
        rd, rc = process_frame(raw, config.dsp.range_fft_size, config.dsp.angle_fft_size, config.dsp.window)
    with _stage("detect"):
        dets = detect_peaks(rc, config.detect)
        valid = [d for d in dets if not np.isnan(rc.angle_of(d.angle_bin))]
        if len(valid) != len(dets):
            log.info("frame %d: dropped %d detections on invalid angle bins", frame, len(dets) - len(valid))
        points = to_point_cloud(valid, rc)
    with _stage("cluster"):
        labeling = dbscan(points, config.dbscan)
        weights = [p.magnitude for p in points]
        centroids = cluster_centroids(points, labeling, weights) if points else np.zeros((0, 3))
    track_ids = [None] * len(points)
    stepped = []
    if tracker is not None:
        with _stage("track"):
            stepped = tracker.step(centroids[:, :2])
            by_cluster = {t.last_detection: t.id for t in stepped if t.last_detection is not None}
            track_ids = [by_cluster.get(int(lab)) if lab != NOISE else None for lab in labeling.labels]
    return FrameResult(frame, rd, rc, valid, points, labeling.labels, track_ids, stepped)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _track_summary(t: Track) -> dict:
    return {
        "id": int(t.id), "status": t.status, "hits": int(t.hits), "misses": int(t.misses),
        "state": [float(fio.fmt_number(v)) for v in t.state],
    }


def run_pipeline(config: PipelineConfig, out_dir=None) -> dict:
    """Run every frame, write all artifacts and return the manifest dict.

    Identical config and seed give byte-identical output trees.
    """
    out = Path(out_dir if out_dir is not None else (config.output_dir or "fmcw_out"))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StageError("output", f"cannot create {out}: {exc.strerror or exc}") from exc

    tracker = Tracker(config.tracker)
    frames = []
    for f in range(config.num_frames):
        res = process_single_frame(config, f, tracker)
        stem = f"frame_{f:04d}"
        files = {}
        with _stage("write"):
            p = out / f"{stem}_rdmap.csv"
            fio.write_rdmap_csv(res.rd_map, p)
            files[p.name] = p
            if config.write_binary:
                p = out / f"{stem}_rdmap.f32"
                side = fio.write_rdmap_binary(res.rd_map, p)
                files[p.name] = p
                files[side.name] = side
            p = out / f"{stem}_heatmap.pgm"
            fio.write_heatmap_pgm(normalize_heatmap(res.rd_map), p)
            files[p.name] = p
            p = out / f"{stem}_points.csv"
            fio.write_point_cloud_csv(res.points, p, res.labels, res.track_ids, frame=f)
            files[p.name] = p
            p = out / f"{stem}_tracks.csv"
            fio.write_tracks_csv([(f, t) for t in res.tracks], p)
            files[p.name] = p
        n_clusters = int(res.labels.max()) + 1 if len(res.labels) else 0
        frames.append({
            "frame": f,
            "detections": len(res.detections),
            "clusters": n_clusters,
            "noise_points": int(np.sum(res.labels == NOISE)),
            "files": {name: _sha256(path) for name, path in sorted(files.items())},
        })

    manifest = {
        "tool": "fmcw",
        "version": __version__,
        "numpy_version": np.__version__,
        "seed": config.scene.rng_seed,
        "rng": "numpy PCG64 via SeedSequence(seed, spawn_key=(frame,))",
        "parameter_hash": config.parameter_hash(),
        "config": config.to_dict(),
        "num_frames": config.num_frames,
        "frames": frames,
        "final_tracks": [_track_summary(t) for t in tracker.tracks],
        "confirmed_tracks": len([t for t in tracker.tracks if t.status == CONFIRMED]),
    }
    with _stage("write"):
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                           encoding="ascii")
    return manifest
