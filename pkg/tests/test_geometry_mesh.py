import numpy as np
import pytest
from hypothesis import given, strategies as st

from graspsynth.geometry import (
    TriangleMesh,
    is_watertight,
    load_mesh,
    load_off,
    load_stl,
    make_box,
    make_capsule,
    make_cylinder,
    make_icosphere,
    mesh_volume_centroid,
    random_rotation,
    sample_surface_points,
    save_stl,
    transform_mesh,
)


def test_validation_rejects_bad_indices():
    v = np.eye(3)
    with pytest.raises(ValueError):
        TriangleMesh(v, np.array([[0, 1, 3]]))


def test_validation_rejects_degenerate_triangle():
    v = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        TriangleMesh(v, np.array([[0, 1, 2]]))


def test_box_volume_and_centroid():
    m = make_box((0.2, 0.3, 0.4), center=(0.1, -0.2, 0.3))
    vol, cen = mesh_volume_centroid(m)
    assert vol == pytest.approx(0.2 * 0.3 * 0.4, rel=1e-12)
    np.testing.assert_allclose(cen, [0.1, -0.2, 0.3], atol=1e-12)


def test_primitives_watertight():
    for m in (
        make_box((0.1, 0.1, 0.1)),
        make_icosphere(0.05, subdivisions=1),
        make_cylinder(0.03, 0.1, segments=16),
        make_capsule(0.01, 0.04),
    ):
        assert is_watertight(m)
        vol, _ = mesh_volume_centroid(m)
        assert vol > 0.0


def test_icosphere_volume_approaches_sphere():
    r = 0.07
    m = make_icosphere(r, subdivisions=3)
    vol, cen = mesh_volume_centroid(m)
    assert vol == pytest.approx(4.0 / 3.0 * np.pi * r**3, rel=1e-2)
    assert vol < 4.0 / 3.0 * np.pi * r**3  # inscribed, so strictly smaller
    np.testing.assert_allclose(cen, [0.0, 0.0, 0.0], atol=1e-12)


def test_cylinder_volume():
    m = make_cylinder(0.05, 0.2, segments=64)
    vol, _ = mesh_volume_centroid(m)
    assert vol == pytest.approx(np.pi * 0.05**2 * 0.2, rel=5e-3)


def test_capsule_volume_and_extent():
    r, length = 0.01, 0.05
    m = make_capsule(r, length, segments=24, rings=8)
    vol, _ = mesh_volume_centroid(m)
    expected = np.pi * r**2 * length + 4.0 / 3.0 * np.pi * r**3
    assert vol == pytest.approx(expected, rel=2e-2)
    assert m.vertices[:, 2].min() == pytest.approx(-r)
    assert m.vertices[:, 2].max() == pytest.approx(length + r)


def test_face_normals_outward_on_box():
    m = make_box((1.0, 1.0, 1.0))
    centers = m.vertices[m.triangles].mean(axis=1)
    assert np.all((m.face_normals * centers).sum(axis=1) > 0)


def test_sample_surface_face_fractions():
    # cube faces have equal area so each should get about a sixth of samples
    m = make_box((0.1, 0.1, 0.1))
    cloud = sample_surface_points(m, 6000, seed=0)
    face = cloud.labels // 2  # two triangles per face
    frac = np.bincount(face, minlength=6) / 6000.0
    np.testing.assert_allclose(frac, 1.0 / 6.0, atol=0.02)


def test_sample_surface_points_on_surface():
    m = make_box((0.2, 0.2, 0.2))
    cloud = sample_surface_points(m, 500, seed=1)
    assert np.abs(cloud.points).max() <= 0.1 + 1e-12
    on_face = np.isclose(np.abs(cloud.points), 0.1).any(axis=1)
    assert on_face.all()


def test_sample_surface_deterministic():
    m = make_icosphere(0.05, subdivisions=1)
    a = sample_surface_points(m, 64, seed=9)
    b = sample_surface_points(m, 64, seed=9)
    np.testing.assert_array_equal(a.points, b.points)


def test_sample_surface_rejects_bad_count():
    m = make_box((0.1, 0.1, 0.1))
    with pytest.raises(ValueError):
        sample_surface_points(m, 0, seed=0)


@given(st.integers(min_value=0, max_value=200))
def test_sample_normals_match_radial_direction(seed):
    m = make_icosphere(1.0, subdivisions=2)
    cloud = sample_surface_points(m, 32, seed=seed)
    radial = cloud.points / np.linalg.norm(cloud.points, axis=1, keepdims=True)
    # faceted sphere normals stay close to the radial direction
    assert ((cloud.normals * radial).sum(axis=1) > 0.98).all()


def test_transform_preserves_volume():
    m = make_box((0.1, 0.2, 0.3))
    r = random_rotation(seed=4)
    t = np.array([0.5, -0.1, 0.2])
    moved = transform_mesh(m, rotation=r.matrix, translation=t)
    vol0, cen0 = mesh_volume_centroid(m)
    vol1, cen1 = mesh_volume_centroid(moved)
    assert vol1 == pytest.approx(vol0, rel=1e-12)
    np.testing.assert_allclose(cen1, r.apply(cen0.reshape(1, 3))[0] + t, atol=1e-12)


def test_stl_roundtrip(tmp_path):
    m = make_box((0.1, 0.2, 0.3), center=(0.01, 0.02, 0.03))
    path = tmp_path / "box.stl"
    save_stl(path, m)
    back = load_stl(path)
    assert len(back.vertices) == 8
    assert len(back.triangles) == 12
    assert is_watertight(back)
    vol, cen = mesh_volume_centroid(back)
    assert vol == pytest.approx(0.1 * 0.2 * 0.3, rel=1e-5)
    np.testing.assert_allclose(cen, [0.01, 0.02, 0.03], atol=1e-6)


def test_ascii_stl(tmp_path):
    text = """solid tri
facet normal 0 0 1
 outer loop
  vertex 0 0 0
  vertex 1 0 0
  vertex 0 1 0
 endloop
endfacet
facet normal 0 0 -1
 outer loop
  vertex 0 0 0
  vertex 0 1 0
  vertex 1 0 0
 endloop
endfacet
endsolid tri
"""
    path = tmp_path / "tri.stl"
    path.write_text(text)
    m = load_stl(path)
    assert len(m.vertices) == 3
    assert len(m.triangles) == 2


def test_off_loader(tmp_path):
    text = """OFF
# tetrahedron
4 4 0
0 0 0
1 0 0
0 1 0
0 0 1
3 0 2 1
3 0 1 3
3 0 3 2
3 1 2 3
"""
    path = tmp_path / "tet.off"
    path.write_text(text)
    m = load_off(path)
    assert len(m.vertices) == 4
    assert is_watertight(m)
    vol, _ = mesh_volume_centroid(m)
    assert vol == pytest.approx(1.0 / 6.0, rel=1e-12)


def test_load_mesh_dispatch(tmp_path):
    m = make_box((0.1, 0.1, 0.1))
    path = tmp_path / "b.stl"
    save_stl(path, m)
    assert len(load_mesh(path).triangles) == 12
    with pytest.raises(ValueError):
        load_mesh(tmp_path / "b.obj")
