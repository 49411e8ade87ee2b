"""Readers and writers for every on-disk artifact.

All text formats use '.' as the decimal separator and the ``fmt_number``
rule (shortest round-trip form after rounding to 9 significant digits), so
write -> read -> write reproduces files byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .detect import RadarPoint
from .dsp import Heatmap, RangeDopplerMap

POINT_CLOUD_HEADER = ["frame", "x_m", "y_m", "v_mps", "magnitude", "cluster", "track_id"]
TRACK_HEADER = ["frame", "track_id", "status", "x_m", "y_m", "vx_mps", "vy_mps", "hits", "misses"]


def fmt_number(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return repr(x)
    y = float(f"{x:.9g}")
    if y == 0.0:
        y = 0.0  # drop the sign of -0.0
    return repr(y)


def _open_for_write(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, "w", newline="", encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


# -- heatmap (plain PGM) -----------------------------------------------------

def quantize_heatmap(values: np.ndarray, maxval: int = 255) -> np.ndarray:
    """Round-half-up of ``v * maxval`` on values clipped to [0, 1]."""
    v = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    return np.floor(v * maxval + 0.5).astype(int)


def write_heatmap_pgm(heatmap, path) -> None:
    values = heatmap.values if isinstance(heatmap, Heatmap) else np.asarray(heatmap)
    if values.ndim != 2:
        raise ValueError("heatmap must be 2-D")
    q = quantize_heatmap(values)
    h, w = q.shape
    with _open_for_write(path) as fh:
        fh.write(f"P2\n{w} {h}\n255\n")
        for row in q:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def read_pgm(path) -> np.ndarray:
    tokens = []
    for line in _read_text(path).splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens or tokens[0] != "P2":
        raise ValueError(f"{path}: not a plain (P2) PGM file")
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    data = np.array([int(t) for t in tokens[4:4 + w * h]], dtype=int)
    if data.size != w * h:
        raise ValueError(f"{path}: expected {w * h} pixels, found {data.size}")
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    return data.reshape(h, w)


# -- range-Doppler map --------------------------------------------------------

def _rd_metadata(rd: RangeDopplerMap) -> Dict[str, str]:
    g = rd.grid
    return {
        "range_bins": str(rd.magnitudes.shape[0]),
        "doppler_bins": str(rd.magnitudes.shape[1]),
        "range_resolution_m": fmt_number(g.range_resolution),
        "range_bin_width_m": fmt_number(g.range_bin_width),
        "doppler_velocity_resolution_mps": fmt_number(g.doppler_velocity_resolution),
        "range_fft_size": str(g.range_fft_size),
        "carrier_frequency_hz": fmt_number(g.carrier_frequency),
        "doppler_axis": "centered",
    }


def write_rdmap_csv(rd_map, path, metadata: Optional[Dict[str, str]] = None) -> None:
    """One row per range bin; Doppler bins across, centre-shifted."""
    if isinstance(rd_map, RangeDopplerMap):
        mags = rd_map.magnitudes
        meta = _rd_metadata(rd_map)
    else:
        mags = np.asarray(rd_map, dtype=float)
        meta = {"range_bins": str(mags.shape[0]), "doppler_bins": str(mags.shape[1])}
    if metadata:
        meta.update(metadata)
    with _open_for_write(path) as fh:
        fh.write("# fmcw range-doppler map\n")
        for key, val in meta.items():
            fh.write(f"# {key}={val}\n")
        for row in mags:
            fh.write(",".join(fmt_number(v) for v in row) + "\n")


def read_rdmap_csv(path):
    """Returns ``(magnitudes, metadata_dict)``."""
    meta, rows = {}, []
    for line in _read_text(path).splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, val = body.split("=", 1)
                meta[key.strip()] = val.strip()
        elif line.strip():
            rows.append([float(v) for v in line.split(",")])
    return np.array(rows, dtype=float), meta


def write_rdmap_binary(rd_map, path, metadata: Optional[dict] = None) -> Path:
    """Little-endian float32, row-major, plus a ``<path>.json`` sidecar."""
    mags = rd_map.magnitudes if isinstance(rd_map, RangeDopplerMap) else np.asarray(rd_map)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(np.ascontiguousarray(mags, dtype="<f4").tobytes())
    header = {"dtype": "<f4", "order": "C", "shape": list(mags.shape)}
    if isinstance(rd_map, RangeDopplerMap):
        header["metadata"] = _rd_metadata(rd_map)
    if metadata:
        header.setdefault("metadata", {}).update(metadata)
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n", encoding="ascii")
    return sidecar


def read_rdmap_binary(path):
    path = Path(path)
    header = json.loads(path.with_name(path.name + ".json").read_text(encoding="ascii"))
    data = np.frombuffer(path.read_bytes(), dtype=header["dtype"])
    return data.reshape(header["shape"]).astype(float), header


# -- point clouds -------------------------------------------------------------

def write_point_cloud_csv(points, path, labels=None, track_ids=None, frame=0) -> None:
    """Write points as ``frame,x_m,y_m,v_mps,magnitude,cluster,track_id``.

    ``labels`` / ``track_ids`` may be omitted or hold None entries, which are
    written as empty fields. ``frame`` is one number or one per point.
    """
    n = len(points)
    frames = [frame] * n if np.isscalar(frame) else list(frame)
    labels = [None] * n if labels is None else list(labels)
    track_ids = [None] * n if track_ids is None else list(track_ids)
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(POINT_CLOUD_HEADER)
        for p, lab, tid, fr in zip(points, labels, track_ids, frames):
            if isinstance(p, RadarPoint):
                x, y, z, mag = p.x, p.y, p.z, p.magnitude
            else:
                vals = [float(v) for v in p]
                x, y, z = vals[:3]
                mag = vals[3] if len(vals) > 3 else 0.0
            w.writerow([int(fr), fmt_number(x), fmt_number(y), fmt_number(z), fmt_number(mag),
                        "" if lab is None else int(lab), "" if tid is None else int(tid)])


def read_point_cloud_csv(path) -> List[dict]:
    """Rows as dicts; ``cluster``/``track_id`` are None when empty."""
    text = _read_text(path)
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != POINT_CLOUD_HEADER:
        raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
    rows = []
    for r in reader:
        rows.append({
            "frame": int(r["frame"]),
            "x_m": float(r["x_m"]),
            "y_m": float(r["y_m"]),
            "v_mps": float(r["v_mps"]),
            "magnitude": float(r["magnitude"]),
            "cluster": int(r["cluster"]) if r["cluster"] != "" else None,
            "track_id": int(r["track_id"]) if r["track_id"] != "" else None,
        })
    return rows


def point_rows_to_array(rows: Sequence[dict]) -> np.ndarray:
    if not rows:
        return np.zeros((0, 3))
    return np.array([[r["x_m"], r["y_m"], r["v_mps"]] for r in rows], dtype=float)


# -- tracks -------------------------------------------------------------------

def write_tracks_csv(rows, path) -> None:
    """``rows`` are ``(frame, Track)`` pairs."""
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACK_HEADER)
        for frame, t in rows:
            x, y, vx, vy = t.state
            w.writerow([int(frame), int(t.id), t.status, fmt_number(x), fmt_number(y),
                        fmt_number(vx), fmt_number(vy), int(t.hits), int(t.misses)])


def read_tracks_csv(path) -> List[dict]:
    reader = csv.DictReader(io.StringIO(_read_text(path)))
    if reader.fieldnames != TRACK_HEADER:
        raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
    out = []
    for r in reader:
        out.append({
            "frame": int(r["frame"]), "track_id": int(r["track_id"]), "status": r["status"],
            "x_m": float(r["x_m"]), "y_m": float(r["y_m"]),
            "vx_mps": float(r["vx_mps"]), "vy_mps": float(r["vy_mps"]),
            "hits": int(r["hits"]), "misses": int(r["misses"]),
        })
    return out


# -- raw frame cubes ----------------------------------------------------------

def write_cube(samples: np.ndarray, path, header: dict) -> Path:
    """Complex128 little-endian samples plus a ``<path>.json`` sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(np.ascontiguousarray(samples, dtype="<c16").tobytes())
    meta = dict(header)
    meta.update({"dtype": "<c16", "order": "C", "shape": list(samples.shape)})
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="ascii")
    return sidecar


def read_cube(path):
    """Returns ``(samples, header)``."""
    path = Path(path)
    sidecar = path.with_name(path.name + ".json")
    try:
        header = json.loads(sidecar.read_text(encoding="ascii"))
        raw = path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read cube {path}: {exc.strerror or exc}") from exc
    samples = np.frombuffer(raw, dtype=header["dtype"]).reshape(header["shape"]).astype(np.complex128)
    return samples, header
