"""DBSCAN over radar point clouds, plus k-distance tools for choosing eps.

Conventions worth knowing before comparing against other DBSCAN codes:

* a point's eps-neighbourhood *includes the point itself*, so ``min_pts=2``
  makes any pair of points within eps a cluster;
* distances equal to eps count as neighbours (``<=``);
* a border point reachable from several clusters joins the one created first.
  Clusters are seeded in ascending point index order, so results are fully
  deterministic.
"""

from __future__ import annotations

import itertools
import warnings
from collections import deque
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .detect import points_array
from .errors import InvalidParamsError

NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    eps: float
    min_pts: int
    axis_scales: Optional[Sequence[float]] = None
    neighbor_search: str = "brute"  # or "grid"

    def __post_init__(self):
        if not self.eps > 0:
            raise InvalidParamsError(f"dbscan.eps must be > 0 (got {self.eps!r})")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise InvalidParamsError(f"dbscan.min_pts must be an integer >= 1 (got {self.min_pts!r})")
        if self.axis_scales is not None:
            scales = tuple(float(s) for s in self.axis_scales)
            if not all(s > 0 for s in scales):
                raise InvalidParamsError("dbscan.axis_scales must all be > 0")
            object.__setattr__(self, "axis_scales", scales)
        if self.neighbor_search not in ("brute", "grid"):
            raise InvalidParamsError("dbscan.neighbor_search must be 'brute' or 'grid'")


@dataclass(frozen=True)
class Labeling:
    labels: np.ndarray  # cluster id per point, NOISE for noise
    core_flags: np.ndarray

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def members(self, cluster_id: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster_id)


def _scaled(points, axis_scales) -> np.ndarray:
    X = points_array(points) if not isinstance(points, np.ndarray) else np.asarray(points, dtype=float)
    if X.ndim != 2:
        X = X.reshape(len(X), -1)
    if axis_scales is not None:
        if len(axis_scales) != X.shape[1]:
            raise InvalidParamsError(f"axis_scales has {len(axis_scales)} entries for {X.shape[1]}-D points")
        X = X * np.asarray(axis_scales, dtype=float)
    return X


def _neighbors_brute(X: np.ndarray, eps: float) -> List[np.ndarray]:
    out = []
    for i in range(len(X)):
        d = np.sqrt(((X - X[i]) ** 2).sum(axis=1))
        out.append(np.flatnonzero(d <= eps))
    return out


def _neighbors_grid(X: np.ndarray, eps: float) -> List[np.ndarray]:
    cells = {}
    keys = np.floor(X / eps).astype(np.int64)
    for i, key in enumerate(map(tuple, keys)):
        cells.setdefault(key, []).append(i)
    offsets = list(itertools.product((-1, 0, 1), repeat=X.shape[1]))
    out = []
    for i, key in enumerate(map(tuple, keys)):
        cand = []
        for off in offsets:
            cand.extend(cells.get(tuple(k + o for k, o in zip(key, off)), ()))
        cand = np.array(sorted(cand), dtype=np.intp)
        d = np.sqrt(((X[cand] - X[i]) ** 2).sum(axis=1))
        out.append(cand[d <= eps])
    return out


def dbscan(points, params: DbscanParams) -> Labeling:
    """Label every point with a cluster id (0, 1, ...) or ``NOISE``."""
    X = _scaled(points, params.axis_scales)
    n = len(X)
    if n == 0:
        return Labeling(np.zeros(0, dtype=int), np.zeros(0, dtype=bool))
    search = _neighbors_grid if params.neighbor_search == "grid" else _neighbors_brute
    nbrs = search(X, params.eps)
    core = np.array([len(nb) >= params.min_pts for nb in nbrs])

    labels = np.full(n, NOISE, dtype=int)
    cluster_id = 0
    for i in range(n):
        if labels[i] != NOISE or not core[i]:
            continue
        labels[i] = cluster_id
        queue = deque([i])
        while queue:
            p = queue.popleft()
            for q in nbrs[p]:
                if labels[q] == NOISE:
                    labels[q] = cluster_id
                    if core[q]:
                        queue.append(q)
        cluster_id += 1
    return Labeling(labels, core)


def k_distance(points, k: int, axis_scales=None) -> np.ndarray:
    """Ascending distances from each point to its k-th nearest other point."""
    X = _scaled(points, axis_scales)
    n = len(X)
    if k < 1:
        raise InvalidParamsError("k must be >= 1")
    if k >= n:
        raise InvalidParamsError(f"k={k} needs more than {k} points (got {n})")
    d = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(d, np.inf)
    kth = np.sort(d, axis=1)[:, k - 1]
    return np.sort(kth)


class EpsSuggestion(NamedTuple):
    eps: float
    index: int
    degenerate: bool


def suggest_eps(kdist: Sequence[float]) -> EpsSuggestion:
    """Knee of a sorted k-distance curve.

    Picks the point farthest (perpendicular) from the chord joining the first
    and last samples, with (index, distance) as plane coordinates; ties go to
    the larger index. A curve that never leaves the chord is flagged
    ``degenerate`` and its last value is returned.
    """
    y = np.asarray(kdist, dtype=float)
    n = len(y)
    if n < 3:
        raise InvalidParamsError("suggest_eps needs at least 3 distances")
    x = np.arange(n, dtype=float)
    dx, dy = x[-1] - x[0], y[-1] - y[0]
    dev = np.abs(dy * (x - x[0]) - dx * (y - y[0])) / np.hypot(dx, dy)
    scale = max(np.abs(y).max(), 1.0)
    if dev.max() <= 1e-12 * scale:
        warnings.warn("k-distance curve has no knee; returning its last value", RuntimeWarning, stacklevel=2)
        return EpsSuggestion(float(y[-1]), n - 1, True)
    best = int(np.flatnonzero(dev >= dev.max() - 1e-12 * scale)[-1])
    return EpsSuggestion(float(y[best]), best, False)


def default_min_pts(dimensions: int) -> int:
    """Rule-of-thumb ``min_pts = 2 * dimensions``."""
    if dimensions < 1:
        raise InvalidParamsError("dimensions must be >= 1")
    return 2 * dimensions


def cluster_centroids(points, labeling: Labeling, weights=None) -> np.ndarray:
    """Mean coordinates of each cluster, row ``i`` for cluster id ``i``."""
    X = points_array(points) if not isinstance(points, np.ndarray) else np.asarray(points, dtype=float)
    rows = []
    for cid in range(labeling.n_clusters):
        m = labeling.members(cid)
        w = None if weights is None else np.asarray(weights, dtype=float)[m]
        rows.append(np.average(X[m], axis=0, weights=w))
    return np.array(rows).reshape(len(rows), X.shape[1] if X.ndim == 2 else 3)
