import numpy as np

from graspsynth.geometry import PointCloud, make_box, random_rotation
from graspsynth.hands import (
    canonicalize_cloud,
    canonicalize_mesh,
    canonicalize_translation,
    decanonicalize_cloud,
    decanonicalize_translation,
)


def make_cloud(seed=0):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(30, 3))
    normals = rng.normal(size=(30, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return PointCloud(points=pts, normals=normals, labels=np.arange(30, dtype=np.int64))


def test_cloud_roundtrip_is_identity():
    cloud = make_cloud()
    r = random_rotation(seed=5)
    back = decanonicalize_cloud(canonicalize_cloud(cloud, r), r)
    np.testing.assert_allclose(back.points, cloud.points, atol=1e-12)
    np.testing.assert_allclose(back.normals, cloud.normals, atol=1e-12)
    np.testing.assert_array_equal(back.labels, cloud.labels)


def test_canonicalize_uses_inverse_rotation():
    cloud = make_cloud(1)
    r = random_rotation(seed=6)
    canon = canonicalize_cloud(cloud, r)
    np.testing.assert_allclose(canon.points, cloud.points @ r.matrix, atol=1e-12)


def test_translation_roundtrip():
    r = random_rotation(seed=7)
    t = np.array([0.2, -0.1, 0.05])
    np.testing.assert_allclose(
        decanonicalize_translation(canonicalize_translation(t, r), r), t, atol=1e-12
    )


def test_distances_preserved():
    cloud = make_cloud(2)
    r = random_rotation(seed=8)
    canon = canonicalize_cloud(cloud, r)
    d0 = np.linalg.norm(cloud.points[0] - cloud.points[1])
    d1 = np.linalg.norm(canon.points[0] - canon.points[1])
    assert abs(d0 - d1) < 1e-12


def test_mesh_canonicalization_consistent_with_cloud():
    mesh = make_box((0.1, 0.2, 0.3))
    r = random_rotation(seed=9)
    canon = canonicalize_mesh(mesh, r)
    np.testing.assert_allclose(canon.vertices, mesh.vertices @ r.matrix, atol=1e-12)
    np.testing.assert_array_equal(canon.triangles, mesh.triangles)
