"""Contact detection between a posed hand and an object mesh."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import TriangleMesh, sample_surface_points
from ..geometry.sdf import closest_surface_points, signed_distances
from ..hands import HandPose, HandSpec, forward_kinematics

_DEDUPE_RADIUS = 0.002  # m


@dataclass(frozen=True)
class ContactPoint:
    """A labeled near-touch: where on the object, facing which way, how deep."""

    position: np.ndarray  # (3,) object frame, on the object surface
    normal: np.ndarray  # (3,) outward from the object
    hand_link: int  # index into spec.links
    gap: float  # signed meters; negative means penetration

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64))
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=np.float64))
        if self.position.shape != (3,) or self.normal.shape != (3,):
            raise ValueError("position and normal must be 3-vectors")
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-6:
            raise ValueError("normal must be unit length")


def link_surface_points(
    spec: HandSpec, pose: HandPose, count: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Sample hand surface points with their link indices, posed via FK.

    Unlike plain cloud sampling, every link gets at least one sample so that
    per-link nearest-point queries are always defined.
    """
    if count < len(spec.links):
        raise ValueError(f"count must be >= number of links ({len(spec.links)})")
    transforms = forward_kinematics(spec, pose)
    areas = np.array([link.mesh.triangle_areas.sum() for link in spec.links])
    quota = count * areas / areas.sum()
    counts = np.maximum(np.floor(quota).astype(int), 1)
    while counts.sum() > count:
        counts[np.argmax(counts)] -= 1
    order = np.argsort(-(quota - counts), kind="stable")
    for i in range(count - counts.sum()):
        counts[order[i % len(order)]] += 1
    child_seeds = np.random.default_rng(seed).integers(0, 2**31, size=len(spec.links))
    points = []
    link_ids = []
    for idx, (link, tf, n, s) in enumerate(zip(spec.links, transforms, counts, child_seeds)):
        local = sample_surface_points(link.mesh, int(n), int(s))
        points.append(tf.apply(local.points))
        link_ids.append(np.full(int(n), idx, dtype=np.int64))
    return np.concatenate(points, axis=0), np.concatenate(link_ids)


def detect_contacts(
    object_mesh: TriangleMesh,
    spec: HandSpec,
    pose: HandPose,
    threshold: float = 0.005,
    samples: int = 512,
    seed: int = 0,
) -> list[ContactPoint]:
    """Hand sample points within `threshold` of the object become contacts.

    Each contact sits at the nearest object surface point with the outward
    face normal there. Contacts closer than 2 mm to an already accepted one
    are dropped, deepest first, so clustered samples collapse to one.
    """
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    points, link_ids = link_surface_points(spec, pose, samples, seed=seed)
    gaps = signed_distances(points, object_mesh)
    near = gaps <= threshold
    if not np.any(near):
        return []
    _, surface_pts, tri_idx = closest_surface_points(points[near], object_mesh)
    normals = object_mesh.face_normals[tri_idx]
    candidates = sorted(
        zip(gaps[near], surface_pts, normals, link_ids[near]), key=lambda c: c[0]
    )
    kept: list[ContactPoint] = []
    for gap, pos, nrm, link in candidates:
        if any(np.linalg.norm(pos - c.position) < _DEDUPE_RADIUS for c in kept):
            continue
        kept.append(ContactPoint(position=pos, normal=nrm, hand_link=int(link), gap=float(gap)))
    return kept
