"""Pointwise feature fields over object clouds.

Fields either load from fixture files (a DGD1 matrix paired with a PLY
cloud) or come from a deterministic geometric encoder. Downstream scoring
is cosine-based, so feature provenance does not change the math.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from ..arrays import read_array, write_array
from ..geometry import PointCloud, load_ply, save_ply


@dataclass(frozen=True)
class PointFeatureField:
    cloud: PointCloud
    features: np.ndarray  # (z, D)

    def __post_init__(self):
        feat = np.asarray(self.features, dtype=np.float64)
        if feat.ndim != 2 or feat.shape[0] != len(self.cloud):
            raise ValueError(f"features must be ({len(self.cloud)}, D), got {feat.shape}")
        if not np.all(np.isfinite(feat)):
            raise ValueError("features must be finite")
        if np.any(np.linalg.norm(feat, axis=1) == 0.0):
            raise ValueError("zero-norm feature row")
        feat.setflags(write=False)
        object.__setattr__(self, "features", feat)

    def __len__(self) -> int:
        return len(self.cloud)


def encode_point_features(
    cloud: PointCloud, dim: int = 32, seed: int = 0, neighbors: int = 8
) -> PointFeatureField:
    """Deterministic geometric stand-in for a learned point encoder.

    Raw per-point features are position, unit normal and a curvature proxy
    (mean normal disagreement with the nearest neighbors), projected to
    `dim` channels by a fixed seeded random matrix.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if cloud.normals is None:
        raise ValueError("cloud must carry normals")
    pts = cloud.points
    nrm = cloud.normals
    k = min(neighbors, len(cloud) - 1)
    if k >= 1:
        _, idx = cKDTree(pts).query(pts, k=k + 1)
        neigh = nrm[idx[:, 1:]]
        curvature = np.mean(1.0 - np.einsum("ij,ikj->ik", nrm, neigh), axis=1) / 2.0
    else:
        curvature = np.zeros(len(cloud))
    raw = np.concatenate([pts, nrm, curvature[:, None]], axis=1)
    rng = np.random.default_rng(seed)
    projection = rng.normal(size=(raw.shape[1], dim)) / np.sqrt(raw.shape[1])
    return PointFeatureField(cloud=cloud, features=raw @ projection)


def save_feature_field(dgd1_path: str | Path, ply_path: str | Path, field: PointFeatureField) -> None:
    write_array(dgd1_path, field.features)
    save_ply(ply_path, field.cloud)


def load_feature_field(dgd1_path: str | Path, ply_path: str | Path) -> PointFeatureField:
    features = read_array(dgd1_path).astype(np.float64)
    cloud = load_ply(ply_path)
    if features.ndim != 2 or features.shape[0] != len(cloud):
        raise ValueError(
            f"feature rows ({features.shape}) do not pair with cloud of {len(cloud)} points"
        )
    return PointFeatureField(cloud=cloud, features=features)
