"""One-step contact-aware grasp refinement.

Each link nominates its sample point closest to the object; that point's
goal is the nearest object surface point pushed 5 mm outward. A single
finite-difference gradient step with halving backtracking pulls the links
toward their goals without ever increasing the objective.
"""

from __future__ import annotations

import numpy as np

from ..geometry import TriangleMesh
from ..geometry.sdf import closest_surface_points, signed_distances
from ..hands import HandPose, HandSpec, clamp_to_limits, forward_kinematics, make_padding_mask
from .contacts import link_surface_points

GOAL_GAP = 0.005  # m outside the object surface
_FD_STEP = 1e-4
_INITIAL_STEP = 0.05
_MAX_BACKTRACKS = 5


def _objective_fn(spec: HandSpec, local_refs: np.ndarray, goals: np.ndarray):
    """Mean squared link-reference-to-goal distance as a function of the pose vector."""

    def objective(vec: np.ndarray) -> float:
        transforms = forward_kinematics(spec, HandPose.from_vector(vec))
        moved = np.array(
            [tf.apply(ref[None, :])[0] for tf, ref in zip(transforms, local_refs)]
        )
        return float(np.mean(np.sum((moved - goals) ** 2, axis=1)))

    return objective


def refine_grasp(
    object_mesh: TriangleMesh,
    spec: HandSpec,
    pose: HandPose,
    samples: int = 512,
    seed: int = 0,
) -> HandPose:
    """Single descent step toward per-link goals 5 mm off the surface.

    Goals are frozen at the input pose, so links already at the 5 mm
    standoff stay put. The result never scores worse than the input
    (backtracking falls back to the input pose) and padded joint slots
    stay exactly 0.
    """
    points, link_ids = link_surface_points(spec, pose, samples, seed=seed)
    gaps = signed_distances(points, object_mesh)
    transforms = forward_kinematics(spec, pose)

    local_refs = np.empty((len(spec.links), 3))
    ref_world = np.empty((len(spec.links), 3))
    for idx, tf in enumerate(transforms):
        mine = np.nonzero(link_ids == idx)[0]
        world = points[mine[np.argmin(gaps[mine])]]
        local_refs[idx] = tf.rotation.T @ (world - tf.translation)
        ref_world[idx] = world

    _, surface_pts, tri_idx = closest_surface_points(ref_world, object_mesh)
    goals = surface_pts + GOAL_GAP * object_mesh.face_normals[tri_idx]

    objective = _objective_fn(spec, local_refs, goals)
    vec0 = pose.to_vector()
    f0 = objective(vec0)

    grad = np.zeros_like(vec0)
    for i in np.nonzero(make_padding_mask(spec).mask)[0]:
        hi = vec0.copy()
        hi[i] += _FD_STEP
        lo = vec0.copy()
        lo[i] -= _FD_STEP
        grad[i] = (objective(hi) - objective(lo)) / (2.0 * _FD_STEP)

    step = _INITIAL_STEP
    for _ in range(_MAX_BACKTRACKS + 1):
        trial = clamp_to_limits(spec, HandPose.from_vector(vec0 - step * grad))
        if objective(trial.to_vector()) <= f0:
            return trial
        step *= 0.5
    return pose
