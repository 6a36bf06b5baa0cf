"""Distance queries against triangle meshes.

Unsigned distances come from exact point-triangle projection; sign comes from
the generalized winding number, so signed queries require a watertight mesh.
"""

from __future__ import annotations

import numpy as np

from .mesh import TriangleMesh

_CHUNK_BUDGET = 500_000  # point-triangle pairs held in memory at once


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0)
    return out


def _closest_on_triangles(p, a, b, c):
    """Closest points on each triangle for each query.

    p: (n, 1, 3); a, b, c: (1, F, 3). Returns (n, F, 3). Region tests follow
    the usual Voronoi-region case analysis for point-triangle projection.
    """
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = (ab * ap).sum(-1)
    d2 = (ac * ap).sum(-1)
    bp = p - b
    d3 = (ab * bp).sum(-1)
    d4 = (ac * bp).sum(-1)
    cp = p - c
    d5 = (ab * cp).sum(-1)
    d6 = (ac * cp).sum(-1)

    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    denom = va + vb + vc
    v = _safe_div(vb, denom)[..., None]
    w = _safe_div(vc, denom)[..., None]
    result = a + ab * v + ac * w  # face interior (default)

    # Overwrite in reverse priority so earlier regions win.
    t_bc = _safe_div(d4 - d3, (d4 - d3) + (d5 - d6))[..., None]
    on_bc = (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0)
    result = np.where(on_bc[..., None], b + t_bc * (c - b), result)

    t_ac = _safe_div(d2, d2 - d6)[..., None]
    on_ac = (vb <= 0) & (d2 >= 0) & (d6 <= 0)
    result = np.where(on_ac[..., None], a + t_ac * ac, result)

    at_c = (d6 >= 0) & (d5 <= d6)
    result = np.where(at_c[..., None], np.broadcast_to(c, result.shape), result)

    t_ab = _safe_div(d1, d1 - d3)[..., None]
    on_ab = (vc <= 0) & (d1 >= 0) & (d3 <= 0)
    result = np.where(on_ab[..., None], a + t_ab * ab, result)

    at_b = (d3 >= 0) & (d4 <= d3)
    result = np.where(at_b[..., None], np.broadcast_to(b, result.shape), result)

    at_a = (d1 <= 0) & (d2 <= 0)
    result = np.where(at_a[..., None], np.broadcast_to(a, result.shape), result)
    return result


def closest_surface_points(
    points: np.ndarray, mesh: TriangleMesh
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact nearest surface points.

    Returns (distances, surface_points, triangle_indices), one row per query.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    a, b, c = mesh.corners
    a, b, c = a[None], b[None], c[None]
    n_faces = len(mesh.triangles)
    step = max(1, _CHUNK_BUDGET // n_faces)
    dists, surf, tri = [], [], []
    for s in range(0, len(pts), step):
        p = pts[s : s + step, None, :]
        cand = _closest_on_triangles(p, a, b, c)
        d2 = ((p - cand) ** 2).sum(-1)
        idx = np.argmin(d2, axis=1)
        rows = np.arange(len(idx))
        dists.append(np.sqrt(d2[rows, idx]))
        surf.append(cand[rows, idx])
        tri.append(idx)
    return np.concatenate(dists), np.concatenate(surf), np.concatenate(tri)


def winding_numbers(points: np.ndarray, mesh: TriangleMesh) -> np.ndarray:
    """Generalized winding number of each query point (1 inside, 0 outside)."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    a, b, c = mesh.corners
    n_faces = len(mesh.triangles)
    step = max(1, _CHUNK_BUDGET // n_faces)
    out = np.empty(len(pts))
    for s in range(0, len(pts), step):
        p = pts[s : s + step, None, :]
        va = a[None] - p
        vb = b[None] - p
        vc = c[None] - p
        la = np.linalg.norm(va, axis=-1)
        lb = np.linalg.norm(vb, axis=-1)
        lc = np.linalg.norm(vc, axis=-1)
        num = np.einsum("nfi,nfi->nf", va, np.cross(vb, vc))
        den = (
            la * lb * lc
            + (va * vb).sum(-1) * lc
            + (vb * vc).sum(-1) * la
            + (vc * va).sum(-1) * lb
        )
        solid = 2.0 * np.arctan2(num, den)
        out[s : s + step] = solid.sum(axis=1) / (4.0 * np.pi)
    return out


def is_watertight(mesh: TriangleMesh) -> bool:
    """True when every undirected edge is shared by exactly two opposed faces.

    The verdict is cached on the mesh instance.
    """
    cached = getattr(mesh, "_watertight", None)
    if cached is not None:
        return cached
    t = mesh.triangles
    directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    unique_directed = np.unique(directed, axis=0)
    if len(unique_directed) != len(directed):
        result = False
    else:
        with_reversed = np.concatenate([directed, directed[:, ::-1]])
        result = len(np.unique(with_reversed, axis=0)) == len(directed)
    object.__setattr__(mesh, "_watertight", result)
    return result


def signed_distances(points: np.ndarray, mesh: TriangleMesh) -> np.ndarray:
    """Signed distances, negative inside. Raises on open meshes."""
    if not is_watertight(mesh):
        raise ValueError("open mesh: sign undefined")
    dists, _, _ = closest_surface_points(points, mesh)
    inside = winding_numbers(points, mesh) > 0.5
    return np.where(inside, -dists, dists)


def signed_distance(point: np.ndarray, mesh: TriangleMesh) -> float:
    return float(signed_distances(np.asarray(point).reshape(1, 3), mesh)[0])
