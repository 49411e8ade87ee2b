"""Independent reference implementations used only by the tests.

None of these import the code paths they check.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def naive_dft(x, size=None):
    x = np.asarray(x, dtype=complex)
    n = len(x) if size is None else size
    xp = np.zeros(n, dtype=complex)
    xp[: len(x)] = x
    k = np.arange(n)
    W = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return W @ xp


def zero_crossing_frequency(sig, fs, t0, t1):
    """Frequency estimate from sign changes of a real signal on [t0, t1)."""
    n0, n1 = int(round(t0 * fs)), int(round(t1 * fs))
    s = np.sign(sig[n0:n1])
    s = s[s != 0]
    crossings = np.count_nonzero(s[1:] != s[:-1])
    return crossings / (2.0 * (t1 - t0))


def brute_force_assignment(cost, gate=math.inf):
    """Best partial matching over gated pairs: most pairs first, then least cost.

    Returns ``(n_pairs, total_cost)``.
    """
    cost = np.asarray(cost, dtype=float)
    n_t, n_d = cost.shape
    best = (0, 0.0)
    k = min(n_t, n_d)
    for rows in itertools.combinations(range(n_t), k):
        for cols in itertools.permutations(range(n_d), k):
            used = [(t, d) for t, d in zip(rows, cols) if cost[t, d] <= gate]
            cand = (len(used), sum(cost[t, d] for t, d in used))
            if (-cand[0], cand[1]) < (-best[0], best[1]):
                best = cand
    return best


def reference_dbscan(X, eps, min_pts):
    """DBSCAN via connected components of the core graph (union-find).

    Components are numbered by their smallest core index; a border point
    joins the lowest-numbered component among its neighbouring cores.
    """
    X = np.asarray(X, dtype=float)
    n = len(X)
    if n == 0:
        return np.zeros(0, dtype=int)
    D = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    adj = D <= eps
    core = adj.sum(1) >= min_pts

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if core[i] and core[j] and adj[i, j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    roots = sorted({find(i) for i in range(n) if core[i]})
    cid = {r: c for c, r in enumerate(roots)}
    labels = np.full(n, -1)
    for i in range(n):
        if core[i]:
            labels[i] = cid[find(i)]
    for i in range(n):
        if not core[i]:
            near = [cid[find(j)] for j in range(n) if core[j] and adj[i, j]]
            if near:
                labels[i] = min(near)
    return labels


def same_partition(a, b):
    """True when two labelings agree up to a bijection of non-noise ids."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or not np.array_equal(a == -1, b == -1):
        return False
    fwd, back = {}, {}
    for x, y in zip(a, b):
        if x == -1:
            continue
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def kalman_step_fraction(x0, v0, p0, q, r, z, dt=1):
    """One CV predict+update for a single decoupled axis in exact arithmetic.

    Initial covariance is ``p0 * I``; Q is ``q * I``. Returns
    ``(pos, vel, P)`` with ``P`` a 2x2 nested list of Fractions.
    """
    F = Fraction
    x0, v0, p0, q, r, z, dt = map(F, (x0, v0, p0, q, r, z, dt))
    # predict
    xp, vp = x0 + dt * v0, v0
    Ppp = p0 + dt * dt * p0 + q
    Ppv = dt * p0
    Pvv = p0 + q
    # update with H = [1, 0]
    S = Ppp + r
    k_pos, k_vel = Ppp / S, Ppv / S
    innov = z - xp
    pos, vel = xp + k_pos * innov, vp + k_vel * innov
    P = [[(1 - k_pos) * Ppp, (1 - k_pos) * Ppv],
         [Ppv - k_vel * Ppp, Pvv - k_vel * Ppv]]
    return pos, vel, P
