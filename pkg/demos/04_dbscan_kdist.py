"""DBSCAN on a small point cloud and picking eps from the k-distance curve.

Run: python demos/04_dbscan_kdist.py
"""
import numpy as np

from fmcw import DbscanParams, dbscan, default_min_pts, k_distance, suggest_eps

# three dense blobs in (x, y, v) plus scattered clutter
pts = np.array([[10, 20, 1], [11, 21, 1], [12, 22, 1], [30, 40, -2], [31, 41, -2], [100, 100, 10]], float)
lab = dbscan(pts, DbscanParams(eps=2.0, min_pts=2))
print("six-point example, eps=2, min_pts=2:")
for p, l, c in zip(pts, lab.labels, lab.core_flags):
    print(f"  {p} -> {'noise' if l < 0 else f'cluster {l}'}{' (core)' if c else ''}")

rng = np.random.default_rng(0)
blobs = [rng.normal(c, 0.6, (40, 3)) for c in ([0, 0, 0], [8, 3, 1], [-6, 9, -2])]
clutter = rng.uniform(-15, 15, (25, 3))
X = np.vstack(blobs + [clutter])

min_pts = default_min_pts(3)
kd = k_distance(X, k=min_pts - 1)
s = suggest_eps(kd)
print(f"\n{len(X)} points, min_pts = 2 * 3 = {min_pts}")
print("k-distance curve (every 10th):", " ".join(f"{v:.2f}" for v in kd[::10]))
print(f"knee at index {s.index}: eps = {s.eps:.3f}")

lab = dbscan(X, DbscanParams(eps=s.eps, min_pts=min_pts))
sizes = [len(lab.members(c)) for c in range(lab.n_clusters)]
print(f"clusters: {lab.n_clusters} with sizes {sizes}, noise points {int(np.sum(lab.labels == -1))}")
