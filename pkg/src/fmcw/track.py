"""Constant-velocity Kalman tracking with gated data association.

State vector is ``[x, y, vx, vy]`` (m, m, m/s, m/s); measurements are
Cartesian positions ``[x, y]``. No control input is modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidParamsError, SingularInnovationError

TENTATIVE = "tentative"
CONFIRMED = "confirmed"
DELETED = "deleted"

H = np.array([[1.0, 0.0, 0.0, 0.0],
              [0.0, 1.0, 0.0, 0.0]])


@dataclass(frozen=True)
class KalmanConfig:
    """Filter matrices for one time step ``dt``.

    ``process_model="identity"`` uses ``Q = process_noise_scale * I``;
    ``"white_acceleration"`` uses the discretised continuous white-noise
    acceleration model with spectral density ``process_noise_scale``.
    """

    dt: float = 1.0
    process_noise_scale: float = 1.0
    measurement_noise: np.ndarray = field(default_factory=lambda: 5.0 * np.eye(2))
    initial_covariance_scale: float = 1000.0
    process_model: str = "identity"
    joseph_form: bool = False

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParamsError("tracker.dt must be > 0")
        if not self.process_noise_scale >= 0:
            raise InvalidParamsError("tracker.process_noise_scale must be >= 0")
        if not self.initial_covariance_scale > 0:
            raise InvalidParamsError("tracker.initial_covariance_scale must be > 0")
        R = np.asarray(self.measurement_noise, dtype=float)
        if R.shape != (2, 2) or not np.allclose(R, R.T):
            raise InvalidParamsError("tracker.measurement_noise must be a symmetric 2x2 matrix")
        object.__setattr__(self, "measurement_noise", R)
        if self.process_model not in ("identity", "white_acceleration"):
            raise InvalidParamsError("tracker.process_model must be 'identity' or 'white_acceleration'")

    @property
    def F(self) -> np.ndarray:
        dt = self.dt
        return np.array([[1.0, 0.0, dt, 0.0],
                         [0.0, 1.0, 0.0, dt],
                         [0.0, 0.0, 1.0, 0.0],
                         [0.0, 0.0, 0.0, 1.0]])

    @property
    def H(self) -> np.ndarray:
        return H.copy()

    @property
    def Q(self) -> np.ndarray:
        q = self.process_noise_scale
        if self.process_model == "identity":
            return q * np.eye(4)
        dt = self.dt
        blk = np.array([[dt**3 / 3, dt**2 / 2], [dt**2 / 2, dt]])
        Q = np.zeros((4, 4))
        Q[np.ix_([0, 2], [0, 2])] = blk
        Q[np.ix_([1, 3], [1, 3])] = blk
        return q * Q

    @property
    def R(self) -> np.ndarray:
        return self.measurement_noise

    def initial_covariance(self) -> np.ndarray:
        return self.initial_covariance_scale * np.eye(4)


@dataclass(frozen=True)
class Track:
    id: int
    state: np.ndarray
    covariance: np.ndarray
    hits: int = 1
    misses: int = 0
    status: str = TENTATIVE
    last_detection: Optional[int] = None  # detection index used in the latest step

    @property
    def position(self) -> np.ndarray:
        return self.state[:2]

    @property
    def velocity(self) -> np.ndarray:
        return self.state[2:]


def _sym(P: np.ndarray) -> np.ndarray:
    return 0.5 * (P + P.T)


def kf_predict(track: Track, config: KalmanConfig) -> Track:
    if track.status == DELETED:
        raise InvalidParamsError(f"cannot predict deleted track {track.id}")
    F = config.F
    x = F @ track.state
    P = _sym(F @ track.covariance @ F.T + config.Q)
    return replace(track, state=x, covariance=P)


def innovation_covariance(track: Track, config: KalmanConfig) -> np.ndarray:
    return H @ track.covariance @ H.T + config.R


def kf_update(track: Track, z, config: KalmanConfig) -> Track:
    if track.status == DELETED:
        raise InvalidParamsError(f"cannot update deleted track {track.id}")
    z = np.asarray(z, dtype=float).reshape(2)
    P = track.covariance
    S = innovation_covariance(track, config)
    try:
        if not np.all(np.isfinite(S)) or np.linalg.cond(S) > 1e15:
            raise np.linalg.LinAlgError
        K = np.linalg.solve(S, H @ P).T  # S symmetric: P H^T S^-1 = (S^-1 H P)^T
    except np.linalg.LinAlgError:
        raise SingularInnovationError(f"innovation covariance of track {track.id} is singular") from None
    x = track.state + K @ (z - H @ track.state)
    I_KH = np.eye(4) - K @ H
    if config.joseph_form:
        P_new = I_KH @ P @ I_KH.T + K @ config.R @ K.T
    else:
        P_new = I_KH @ P
    return replace(track, state=x, covariance=_sym(P_new))


def default_gate(track: Track, config: KalmanConfig) -> float:
    """Three standard deviations along the largest axis of the innovation covariance."""
    eig = np.linalg.eigvalsh(innovation_covariance(track, config))
    return 3.0 * math.sqrt(max(float(eig[-1]), 0.0))


@dataclass
class Assignment:
    pairs: List[Tuple[int, int]]  # (track index, detection index)
    unassigned_tracks: List[int]
    unassigned_detections: List[int]
    total_cost: float


def _as_positions(items) -> np.ndarray:
    rows = [it.position if isinstance(it, Track) else it for it in items]
    if not rows:
        return np.zeros((0, 2))
    return np.asarray(rows, dtype=float).reshape(len(rows), -1)[:, :2]


def distance_matrix(tracks, detections) -> np.ndarray:
    T, D = _as_positions(tracks), _as_positions(detections)
    return np.sqrt(((T[:, None, :] - D[None, :, :]) ** 2).sum(axis=-1))


def _cost2d(cost) -> np.ndarray:
    a = np.asarray(cost, dtype=float)
    if a.ndim != 2:
        if a.size:
            raise InvalidParamsError(f"cost matrix must be 2-D, got shape {a.shape}")
        a = np.zeros((0, 0))
    return a


def _gates(gate, n_tracks: int) -> np.ndarray:
    g = np.broadcast_to(np.asarray(gate, dtype=float), (n_tracks,)).astype(float)
    if np.any(~(g > 0)):
        raise InvalidParamsError("association gate must be > 0")
    return g


def _finish(cost, pairs) -> Assignment:
    n_t, n_d = cost.shape
    pairs = sorted(pairs)
    used_t = {t for t, _ in pairs}
    used_d = {d for _, d in pairs}
    total = float(sum(cost[t, d] for t, d in pairs))
    return Assignment(pairs, [t for t in range(n_t) if t not in used_t],
                      [d for d in range(n_d) if d not in used_d], total)


def greedy_assignment(cost, gate=math.inf, track_keys=None) -> Assignment:
    """Repeatedly take the cheapest remaining gated pair.

    Equal costs are resolved by ``(track key, detection index)``; track keys
    default to row indices.
    """
    cost = _cost2d(cost)
    n_t, n_d = cost.shape
    g = _gates(gate, n_t)
    keys = list(range(n_t)) if track_keys is None else list(track_keys)
    cand = [(cost[t, d], keys[t], d, t) for t in range(n_t) for d in range(n_d) if cost[t, d] <= g[t]]
    cand.sort()
    taken_t, taken_d, pairs = set(), set(), []
    for _, _, d, t in cand:
        if t in taken_t or d in taken_d:
            continue
        taken_t.add(t)
        taken_d.add(d)
        pairs.append((t, d))
    return _finish(cost, pairs)


def optimal_assignment(cost, gate=math.inf) -> Assignment:
    """Minimum-cost one-to-one assignment with gated (forbidden) pairs.

    Among assignments using only gated pairs, the result has the largest
    possible number of pairs and, among those, the smallest total cost.
    """
    cost = _cost2d(cost)
    n_t, n_d = cost.shape
    if n_t == 0 or n_d == 0:
        return _finish(cost, [])
    g = _gates(gate, n_t)
    allowed = cost <= g[:, None]
    if not allowed.any():
        return _finish(cost, [])
    # any forbidden pair costs more than every allowed pair together
    big = 1.0 + 2.0 * float(np.abs(cost[allowed]).sum())
    work = np.where(allowed, cost, big)
    rows, cols = linear_sum_assignment(work)
    pairs = [(int(t), int(d)) for t, d in zip(rows, cols) if allowed[t, d]]
    return _finish(cost, pairs)


def associate_nn(predicted_tracks, detections, gate) -> Assignment:
    keys = [t.id if isinstance(t, Track) else i for i, t in enumerate(predicted_tracks)]
    return greedy_assignment(distance_matrix(predicted_tracks, detections), gate, keys)


def associate_optimal(predicted_tracks, detections, gate) -> Assignment:
    return optimal_assignment(distance_matrix(predicted_tracks, detections), gate)


@dataclass(frozen=True)
class TrackerConfig:
    kalman: KalmanConfig = field(default_factory=KalmanConfig)
    association: str = "optimal"  # or "nn"
    confirm_threshold: int = 3
    delete_threshold: int = 3
    gate: Optional[float] = None  # None: per-track default_gate
    initial_velocity: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.association not in ("optimal", "nn"):
            raise InvalidParamsError("tracker.association must be 'optimal' or 'nn'")
        if self.confirm_threshold < 1 or self.delete_threshold < 1:
            raise InvalidParamsError("tracker confirm/delete thresholds must be >= 1")
        if self.gate is not None and not self.gate > 0:
            raise InvalidParamsError("tracker.gate must be > 0")


def new_track(track_id: int, z, config: TrackerConfig) -> Track:
    x = np.array([z[0], z[1], config.initial_velocity[0], config.initial_velocity[1]], dtype=float)
    return Track(track_id, x, config.kalman.initial_covariance(), hits=1, misses=0, status=TENTATIVE)


def step_tracker(tracks: Sequence[Track], detections, config: TrackerConfig,
                 next_id: Optional[int] = None) -> List[Track]:
    """Advance every live track by one frame.

    Returns live, newly deleted and newly spawned tracks, in that order.
    Tracks already deleted on input are passed through untouched. New ids
    start at ``next_id`` (default: one past the largest id seen).
    """
    kcfg = config.kalman
    dets = _as_positions(detections)
    if next_id is None:
        next_id = max((t.id for t in tracks), default=-1) + 1

    live = [kf_predict(t, kcfg) for t in tracks if t.status != DELETED]
    passed = [t for t in tracks if t.status == DELETED]

    if config.gate is None:
        gate = [default_gate(t, kcfg) for t in live]
    else:
        gate = config.gate
    assoc = associate_optimal if config.association == "optimal" else associate_nn
    result = assoc(live, dets, gate)

    out = []
    matched = dict(result.pairs)
    for i, trk in enumerate(live):
        if i in matched:
            trk = kf_update(trk, dets[matched[i]], kcfg)
            trk = replace(trk, hits=trk.hits + 1, misses=0, last_detection=matched[i])
            if trk.status == TENTATIVE and trk.hits >= config.confirm_threshold:
                trk = replace(trk, status=CONFIRMED)
        else:
            trk = replace(trk, misses=trk.misses + 1, last_detection=None)
            if trk.misses >= config.delete_threshold:
                trk = replace(trk, status=DELETED)
        out.append(trk)
    for d in result.unassigned_detections:
        out.append(replace(new_track(next_id, dets[d], config), last_detection=d))
        next_id += 1
    return passed + out


class Tracker:
    """Stateful multi-target tracker; ids are never reused within an instance."""

    def __init__(self, config: Optional[TrackerConfig] = None):
        self.config = config or TrackerConfig()
        self.tracks: List[Track] = []
        self._next_id = 0

    def step(self, detections) -> List[Track]:
        """Process one frame; returns all tracks touched this frame, deleted ones included."""
        stepped = step_tracker(self.tracks, detections, self.config, self._next_id)
        self._next_id = max([self._next_id - 1] + [t.id for t in stepped]) + 1
        self.tracks = [t for t in stepped if t.status != DELETED]
        return stepped

    @property
    def confirmed(self) -> List[Track]:
        return [t for t in self.tracks if t.status == CONFIRMED]
