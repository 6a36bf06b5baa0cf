"""Point clouds and the distance primitives built on them.

All coordinates are meters. Nearest-neighbor queries are exact (k-d tree);
approximate NN is deliberately not used because Chamfer values feed an argmin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

_NORMAL_TOL = 1e-6


@dataclass(frozen=True)
class PointCloud:
    """N x 3 positions with optional unit normals, integer labels and feature rows."""

    points: np.ndarray
    normals: np.ndarray | None = None
    labels: np.ndarray | None = None
    features: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 1:
            raise ValueError(f"points must be (N, 3) with N >= 1, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        n = pts.shape[0]

        if self.normals is not None:
            nrm = np.asarray(self.normals, dtype=np.float64)
            if nrm.shape != (n, 3):
                raise ValueError(f"normals must be ({n}, 3), got {nrm.shape}")
            lengths = np.linalg.norm(nrm, axis=1)
            if np.max(np.abs(lengths - 1.0)) > _NORMAL_TOL:
                raise ValueError("normals must be unit length within 1e-6")
            nrm.setflags(write=False)
            object.__setattr__(self, "normals", nrm)

        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (n,):
                raise ValueError(f"labels must be ({n},), got {lab.shape}")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

        if self.features is not None:
            feat = np.asarray(self.features, dtype=np.float64)
            if feat.ndim != 2 or feat.shape[0] != n:
                raise ValueError(f"features must be ({n}, D), got {feat.shape}")
            feat.setflags(write=False)
            object.__setattr__(self, "features", feat)

    def __len__(self) -> int:
        return self.points.shape[0]

    def select(self, indices: np.ndarray) -> "PointCloud":
        """Subset cloud by index array; normals/labels/features are carried along."""
        idx = np.asarray(indices, dtype=np.int64)
        return PointCloud(
            points=self.points[idx],
            normals=None if self.normals is None else self.normals[idx],
            labels=None if self.labels is None else self.labels[idx],
            features=None if self.features is None else self.features[idx],
        )


def chamfer_distance(a: PointCloud, b: PointCloud) -> float:
    """Symmetric mean squared nearest-neighbor distance between two clouds (m^2).

    (1/|a|) sum_p min_q ||p-q||^2  +  (1/|b|) sum_q min_p ||q-p||^2
    """
    if len(a) == 0 or len(b) == 0:  # PointCloud forbids this, but guard raw misuse
        raise ValueError("empty cloud")
    da, _ = cKDTree(b.points).query(a.points, k=1)
    db, _ = cKDTree(a.points).query(b.points, k=1)
    return float(np.mean(da**2) + np.mean(db**2))


def farthest_point_sample(cloud: PointCloud, count: int, seed: int) -> PointCloud:
    """Greedy farthest-point subset of ``count`` points; start point chosen by seed."""
    n = len(cloud)
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > n:
        raise ValueError(f"count {count} exceeds cloud size {n}")
    rng = np.random.default_rng(seed)
    chosen = np.empty(count, dtype=np.int64)
    chosen[0] = rng.integers(n)
    d2 = np.sum((cloud.points - cloud.points[chosen[0]]) ** 2, axis=1)
    for i in range(1, count):
        nxt = int(np.argmax(d2))
        chosen[i] = nxt
        d2 = np.minimum(d2, np.sum((cloud.points - cloud.points[nxt]) ** 2, axis=1))
    return cloud.select(chosen)


def extract_contact_region(
    hand_cloud: PointCloud, object_cloud: PointCloud, threshold: float
) -> PointCloud | None:
    """Object points in labeled contact with the hand surface.

    A point qualifies when its nearest hand point lies within ``threshold`` and its
    outward normal makes an angle <= 90 degrees with the direction toward that hand
    point (normal-compatibility stand-in for an aligned-distance contact map).
    Returns None when no point qualifies.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if hand_cloud.normals is None or object_cloud.normals is None:
        raise ValueError("both clouds must carry normals")
    dist, idx = cKDTree(hand_cloud.points).query(object_cloud.points, k=1)
    toward = hand_cloud.points[idx] - object_cloud.points
    facing = np.einsum("ij,ij->i", object_cloud.normals, toward) >= 0.0
    keep = (dist <= threshold) & facing
    if not np.any(keep):
        return None
    return object_cloud.select(np.nonzero(keep)[0])
