"""Canonical-frame helpers.

A grasp record stores a hand pose together with an object rotation R. The
canonical frame is the one in which the hand was posed with an identity root
orientation: canonical coordinates are x_c = R^T x. These helpers move
clouds, meshes, and translations between the object frame and that frame.
"""

from __future__ import annotations

import numpy as np

from ..geometry import PointCloud, Rotation3, TriangleMesh


def canonicalize_translation(t: np.ndarray, rotation: Rotation3) -> np.ndarray:
    return rotation.inverse().apply(np.asarray(t).reshape(1, 3))[0]


def decanonicalize_translation(t: np.ndarray, rotation: Rotation3) -> np.ndarray:
    return rotation.apply(np.asarray(t).reshape(1, 3))[0]


def _remap(cloud: PointCloud, rot: Rotation3) -> PointCloud:
    return PointCloud(
        points=rot.apply(cloud.points),
        normals=None if cloud.normals is None else rot.apply(cloud.normals),
        labels=cloud.labels,
        features=cloud.features,
    )


def canonicalize_cloud(cloud: PointCloud, rotation: Rotation3) -> PointCloud:
    """Counter-rotate an object-frame cloud into the grasp's canonical frame."""
    return _remap(cloud, rotation.inverse())


def decanonicalize_cloud(cloud: PointCloud, rotation: Rotation3) -> PointCloud:
    """Rotate a canonical-frame cloud back into the object frame."""
    return _remap(cloud, rotation)


def canonicalize_mesh(mesh: TriangleMesh, rotation: Rotation3) -> TriangleMesh:
    """Object mesh in the canonical frame (vertices counter-rotated)."""
    return TriangleMesh(rotation.inverse().apply(mesh.vertices), mesh.triangles)
