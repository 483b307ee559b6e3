"""Gaussian-kernel mean-shift clustering with automatic bandwidth selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist


@dataclass
class ClusterLabeling:
    """Hard partition of embedded points: label per point, mode per cluster."""

    ids: list
    labels: np.ndarray
    modes: np.ndarray
    bandwidth: float

    @property
    def k(self) -> int:
        return int(self.modes.shape[0])


def _points_of(obj):
    pts = getattr(obj, "points", obj)
    return np.asarray(pts, dtype=np.float64)


def _ids_of(obj, n):
    ids = getattr(obj, "ids", None)
    return list(ids) if ids is not None else list(range(n))


def auto_bandwidth(emb, k: int = 30, mode: str = "mean") -> float:
    """Kernel bandwidth from the k-nearest-neighbor distances.

    mode "mean" averages, over all points, the mean distance to the k
    nearest neighbors (self excluded); mode "kth" averages the distance to
    the k-th neighbor only. A zero bandwidth (all points coincident) is
    rejected.
    """
    pts = _points_of(emb)
    n = pts.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k >= n:
        raise ValueError(f"k must be smaller than the point count ({k} >= {n})")
    if mode not in ("mean", "kth"):
        raise ValueError(f"mode must be 'mean' or 'kth', got {mode!r}")
    dist, _ = cKDTree(pts).query(pts, k=k + 1)
    nn = dist[:, 1:]
    sigma = float(nn.mean()) if mode == "mean" else float(nn[:, -1].mean())
    if sigma <= 0.0:
        raise ValueError("bandwidth is zero: all points coincide")
    return sigma


def shift_points(points, sigma, tol=None, max_iter=500):
    """Iterate every point to its kernel-density mode.

    Each point moves to the Gaussian-weighted mean of all original points
    until its displacement drops below ``tol`` (default 1e-4 * sigma).
    Returns (converged positions, per-iteration max displacement).
    """
    y = np.asarray(points, dtype=np.float64)
    if sigma <= 0.0:
        raise ValueError(f"bandwidth must be > 0, got {sigma}")
    if tol is None:
        tol = 1e-4 * sigma
    x = y.copy()
    active = np.ones(len(y), dtype=bool)
    inv = 1.0 / (2.0 * sigma * sigma)
    history = []
    for _ in range(max_iter):
        if not active.any():
            break
        d2 = cdist(x[active], y, "sqeuclidean")
        w = np.exp(-d2 * inv)
        total = w.sum(axis=1)
        moved = (w @ y) / np.maximum(total, 1e-300)[:, None]
        still = total <= 0.0
        if still.any():
            moved[still] = x[active][still]
        disp = np.sqrt(((moved - x[active]) ** 2).sum(axis=1))
        history.append(float(disp.max()))
        x[active] = moved
        idx = np.flatnonzero(active)
        active[idx] = disp > tol
    return x, history


def mean_shift(emb, sigma, tol=None, max_iter=500, merge_factor=0.5) -> ClusterLabeling:
    """Cluster points by Gaussian mean-shift; the cluster count is discovered.

    Converged positions that land within ``merge_factor * sigma`` of each
    other collapse into one mode. Modes are claimed greedily in decreasing
    kernel-density order, so label 0 is the densest cluster and the result
    is deterministic for a fixed input.
    """
    pts = _points_of(emb)
    ids = _ids_of(emb, pts.shape[0])
    converged, _ = shift_points(pts, sigma, tol=tol, max_iter=max_iter)
    density = np.exp(-cdist(converged, pts, "sqeuclidean") / (2.0 * sigma * sigma)).sum(axis=1)
    order = np.argsort(-density, kind="stable")
    labels = np.full(pts.shape[0], -1, dtype=np.int64)
    modes = []
    radius = merge_factor * sigma
    for p in order:
        if labels[p] >= 0:
            continue
        mode = converged[p]
        claim = (labels < 0) & (np.sqrt(((converged - mode) ** 2).sum(axis=1)) < radius)
        labels[claim] = len(modes)
        modes.append(mode)
    return ClusterLabeling(
        ids=ids,
        labels=labels,
        modes=np.asarray(modes),
        bandwidth=float(sigma),
    )
