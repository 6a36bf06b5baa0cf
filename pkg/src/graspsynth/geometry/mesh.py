"""Triangle meshes: container, primitive generators, STL/OFF input, surface sampling."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cloud import PointCloud

_MIN_AREA = 1e-12


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle mesh. Vertices in meters, triangles wound outward."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        t = np.asarray(self.triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 3:
            raise ValueError(f"vertices must be (V, 3) with V >= 3, got {v.shape}")
        if t.ndim != 2 or t.shape[1] != 3 or t.shape[0] < 1:
            raise ValueError("empty mesh")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices contain non-finite values")
        if t.min() < 0 or t.max() >= v.shape[0]:
            raise ValueError("triangle index out of range")
        cross = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
        areas = 0.5 * np.linalg.norm(cross, axis=1)
        if np.any(areas <= _MIN_AREA):
            raise ValueError("degenerate triangle (area <= 1e-12 m^2)")
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        object.__setattr__(self, "_areas", areas)
        normals = cross / (2.0 * areas[:, None])
        normals.setflags(write=False)
        object.__setattr__(self, "_face_normals", normals)

    @property
    def triangle_areas(self) -> np.ndarray:
        return self._areas

    @property
    def face_normals(self) -> np.ndarray:
        """Unit normals from triangle winding (outward for well-formed meshes)."""
        return self._face_normals

    @property
    def corners(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = self.triangles
        return self.vertices[t[:, 0]], self.vertices[t[:, 1]], self.vertices[t[:, 2]]


def transform_mesh(
    mesh: TriangleMesh, rotation: np.ndarray | None = None, translation: np.ndarray | None = None
) -> TriangleMesh:
    v = mesh.vertices
    if rotation is not None:
        v = v @ np.asarray(rotation, dtype=np.float64).T
    if translation is not None:
        v = v + np.asarray(translation, dtype=np.float64)
    return TriangleMesh(v, mesh.triangles)


def mesh_volume_centroid(mesh: TriangleMesh) -> tuple[float, np.ndarray]:
    """Enclosed volume and volume centroid by the divergence theorem.

    Only meaningful for closed, outward-wound meshes; volume is then positive.
    """
    a, b, c = mesh.corners
    tet_vol = np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0
    volume = float(np.sum(tet_vol))
    if abs(volume) < 1e-15:
        raise ValueError("mesh encloses no volume")
    centroid = (tet_vol[:, None] * (a + b + c) / 4.0).sum(axis=0) / volume
    return volume, centroid


def sample_surface_points(mesh: TriangleMesh, count: int, seed: int) -> PointCloud:
    """Area-weighted uniform surface samples with face normals, deterministic per seed."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(mesh.triangle_areas)
    cum /= cum[-1]
    tri = np.searchsorted(cum, rng.random(count), side="right")
    tri = np.minimum(tri, len(cum) - 1)
    u = rng.random(count)
    v = rng.random(count)
    flip = u + v > 1.0
    u[flip] = 1.0 - u[flip]
    v[flip] = 1.0 - v[flip]
    a, b, c = mesh.corners
    pts = a[tri] + u[:, None] * (b[tri] - a[tri]) + v[:, None] * (c[tri] - a[tri])
    return PointCloud(points=pts, normals=mesh.face_normals[tri], labels=tri)


# ---------------------------------------------------------------------------
# primitive generators (all watertight, outward winding)


def make_box(extents, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Axis-aligned box with side lengths ``extents`` centered at ``center``."""
    ex, ey, ez = (float(e) / 2.0 for e in extents)
    cx, cy, cz = center
    corners = np.array(
        [
            [-ex, -ey, -ez], [ex, -ey, -ez], [ex, ey, -ez], [-ex, ey, -ez],
            [-ex, -ey, ez], [ex, -ey, ez], [ex, ey, ez], [-ex, ey, ez],
        ]
    ) + np.array([cx, cy, cz])
    quads = [
        (0, 3, 2, 1),  # -z
        (4, 5, 6, 7),  # +z
        (0, 1, 5, 4),  # -y
        (2, 3, 7, 6),  # +y
        (1, 2, 6, 5),  # +x
        (0, 4, 7, 3),  # -x
    ]
    tris = []
    for q in quads:
        tris.append((q[0], q[1], q[2]))
        tris.append((q[0], q[2], q[3]))
    return TriangleMesh(corners, np.array(tris))


def make_icosphere(radius: float, subdivisions: int = 2, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Icosahedron subdivided ``subdivisions`` times, projected to the sphere."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=np.float64,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ]
    )
    for _ in range(subdivisions):
        edge_mid: dict[tuple[int, int], int] = {}
        new_faces = []
        verts_list = list(verts)

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in edge_mid:
                m = verts_list[i] + verts_list[j]
                m /= np.linalg.norm(m)
                edge_mid[key] = len(verts_list)
                verts_list.append(m)
            return edge_mid[key]

        for i, j, k in faces:
            ij, jk, ki = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            new_faces += [[i, ij, ki], [j, jk, ij], [k, ki, jk], [ij, jk, ki]]
        verts = np.array(verts_list)
        faces = np.array(new_faces)
    return TriangleMesh(verts * radius + np.asarray(center, dtype=np.float64), faces)


def _ring(radius: float, z: float, segments: int, phase: float = 0.0) -> np.ndarray:
    ang = phase + 2.0 * np.pi * np.arange(segments) / segments
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang), np.full(segments, z)])


def make_cylinder(radius: float, height: float, segments: int = 24, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Closed cylinder along z, spanning z in [-height/2, height/2] around ``center``."""
    half = height / 2.0
    bot = _ring(radius, -half, segments)
    top = _ring(radius, half, segments)
    verts = np.vstack([bot, top, [[0, 0, -half]], [[0, 0, half]]])
    nb = segments
    bc, tc = 2 * nb, 2 * nb + 1
    tris = []
    for i in range(nb):
        j = (i + 1) % nb
        tris += [[i, j, nb + i], [j, nb + j, nb + i]]  # side
        tris += [[bc, j, i], [tc, nb + i, nb + j]]  # caps
    return TriangleMesh(verts + np.asarray(center, dtype=np.float64), np.array(tris))


def make_capsule(radius: float, length: float, segments: int = 12, rings: int = 4) -> TriangleMesh:
    """Capsule along +z: cylinder from z=0 to z=length with hemispherical caps."""
    if length <= 0:
        raise ValueError("capsule length must be positive")
    verts: list[np.ndarray] = []
    ring_start: list[int] = []
    # bottom pole, bottom hemisphere rings (from pole up), cylinder ends, top hemisphere, top pole
    verts.append(np.array([0.0, 0.0, -radius]))
    lat_b = -np.pi / 2 + np.pi / 2 * np.arange(1, rings + 1) / rings  # up to equator
    for lat in lat_b:
        ring_start.append(len(verts))
        verts.extend(_ring(radius * np.cos(lat), radius * np.sin(lat), segments))
    ring_start.append(len(verts))
    verts.extend(_ring(radius, length, segments))  # cylinder top edge
    lat_t = np.pi / 2 * np.arange(1, rings) / rings
    for lat in lat_t:
        ring_start.append(len(verts))
        verts.extend(_ring(radius * np.cos(lat), length + radius * np.sin(lat), segments))
    top_pole = len(verts)
    verts.append(np.array([0.0, 0.0, length + radius]))

    tris = []
    first = ring_start[0]
    for i in range(segments):
        j = (i + 1) % segments
        tris.append([0, first + j, first + i])  # bottom fan (outward = downward)
    for r0, r1 in zip(ring_start[:-1], ring_start[1:]):
        for i in range(segments):
            j = (i + 1) % segments
            tris += [[r0 + i, r0 + j, r1 + i], [r0 + j, r1 + j, r1 + i]]
    last = ring_start[-1]
    for i in range(segments):
        j = (i + 1) % segments
        tris.append([last + i, last + j, top_pole])
    return TriangleMesh(np.array(verts), np.array(tris))


# ---------------------------------------------------------------------------
# file input: STL (ascii + binary) and OFF


def load_stl(path: str | Path) -> TriangleMesh:
    data = Path(path).read_bytes()
    if data[:5] == b"solid" and b"facet" in data[:4096]:
        return _parse_ascii_stl(data.decode("ascii", errors="replace"))
    return _parse_binary_stl(data, path)


def _parse_binary_stl(data: bytes, path) -> TriangleMesh:
    if len(data) < 84:
        raise ValueError(f"{path}: truncated STL")
    (count,) = struct.unpack_from("<I", data, 80)
    if len(data) < 84 + 50 * count:
        raise ValueError(f"{path}: truncated STL ({count} facets declared)")
    record = np.dtype([("normal", "<f4", (3,)), ("verts", "<f4", (3, 3)), ("attr", "<u2")])
    rec = np.frombuffer(data, dtype=record, count=count, offset=84)
    tris = rec["verts"].astype(np.float64)
    return _index_triangle_soup(tris.reshape(-1, 3))


def _parse_ascii_stl(text: str) -> TriangleMesh:
    coords = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("vertex"):
            parts = line.split()
            coords.append([float(parts[1]), float(parts[2]), float(parts[3])])
    if not coords or len(coords) % 3 != 0:
        raise ValueError("malformed ascii STL")
    return _index_triangle_soup(np.array(coords))


def _index_triangle_soup(flat_vertices: np.ndarray) -> TriangleMesh:
    """Merge exactly-equal vertices so shared edges become topological."""
    uniq, inverse = np.unique(flat_vertices, axis=0, return_inverse=True)
    tris = inverse.reshape(-1, 3)
    return TriangleMesh(uniq, tris)


def save_stl(path: str | Path, mesh: TriangleMesh) -> None:
    """Binary STL writer (vertex coordinates are float32 on disk)."""
    a, b, c = mesh.corners
    n = mesh.face_normals
    count = len(mesh.triangles)
    with open(path, "wb") as fh:
        fh.write(b"\0" * 80)
        fh.write(struct.pack("<I", count))
        rec = np.zeros((count, 50), dtype=np.uint8)
        block = np.concatenate([n, a, b, c], axis=1).astype("<f4")
        rec[:, 0:48] = block.view(np.uint8).reshape(count, 48)
        fh.write(rec.tobytes())


def load_off(path: str | Path) -> TriangleMesh:
    tokens: list[str] = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise ValueError(f"{path}: not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4  # skip edge count
    verts = np.array([float(t) for t in tokens[pos : pos + 3 * nv]]).reshape(nv, 3)
    pos += 3 * nv
    tris = []
    for _ in range(nf):
        k = int(tokens[pos])
        if k != 3:
            raise ValueError(f"{path}: only triangular faces supported, got {k}-gon")
        tris.append([int(tokens[pos + 1]), int(tokens[pos + 2]), int(tokens[pos + 3])])
        pos += 1 + k
    return TriangleMesh(verts, np.array(tris))


def load_mesh(path: str | Path) -> TriangleMesh:
    """Dispatch on extension: .stl or .off."""
    suffix = Path(path).suffix.lower()
    if suffix == ".stl":
        return load_stl(path)
    if suffix == ".off":
        return load_off(path)
    raise ValueError(f"unsupported mesh format: {path}")
