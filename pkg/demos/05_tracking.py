"""Kalman tracking: one filter step by hand, then the full multi-target loop.

Run: python demos/05_tracking.py
"""
import numpy as np

from fmcw import KalmanConfig, Track, Tracker, TrackerConfig, associate_nn, associate_optimal, kf_predict, kf_update

# one predict + update from x=[0,0,1,1], P=1000 I, R=5 I, Q=I
cfg = KalmanConfig(dt=1.0, process_noise_scale=1.0, measurement_noise=5 * np.eye(2), initial_covariance_scale=1000)
t = Track(0, np.array([0.0, 0.0, 1.0, 1.0]), cfg.initial_covariance())
t = kf_predict(t, cfg)
print("predicted state ", t.state)
t = kf_update(t, [10.0, 10.0], cfg)
print("updated state   ", np.round(t.state, 6))

# where greedy nearest neighbour and optimal assignment disagree
tracks, dets = [(0.0, 0.0), (3.0, 0.0)], [(1.0, 0.0), (-1.5, 0.0)]
nn, opt = associate_nn(tracks, dets, 10.0), associate_optimal(tracks, dets, 10.0)
print(f"\nnn pairs {nn.pairs} cost {nn.total_cost:.3f}; optimal pairs {opt.pairs} cost {opt.total_cost:.3f}")

# two constant-velocity targets seen through 3 m measurement noise
rng = np.random.default_rng(5)
kcfg = KalmanConfig(dt=0.1, process_noise_scale=1.0, process_model="white_acceleration", measurement_noise=9 * np.eye(2))
tracker = Tracker(TrackerConfig(kcfg, gate=12.0))
truth = np.array([[0.0, 0.0, 10.0, 5.0], [40.0, 40.0, -10.0, 0.0]])
F = tracker.config.kalman.F
for k in range(40):
    z = truth[:, :2] + rng.normal(0, 3.0, (2, 2))
    if k % 13 == 7:
        z = z[:1]  # the second target drops out for a frame
    tracker.step(z)
    truth = truth @ F.T
print(f"\nafter 40 frames: {len(tracker.confirmed)} confirmed tracks")
for trk in tracker.confirmed:
    print(f"  track {trk.id}: pos {np.round(trk.position, 1)}, vel {np.round(trk.velocity, 1)}, hits {trk.hits}")
print("truth velocities:", truth[:, 2:].tolist())
