"""Synthetic grasp dataset over primitive objects.

Nine primitives (sphere, box, cylinder at three sizes each) are grasped by
scripted closures: draw a random object rotation, start the hand enveloping
the object with mid-open joints, and run the contact refinement step to a
fixed point so fingertips settle near the surface. Only closures that pass
the displacement test are recorded, so every record is physics-positive by
construction. Everything is keyed off one seed; the written dataset bytes
are a pure function of (config, seed).
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from ..diffusion import GraspRecord, save_dataset
from ..geometry import (
    TriangleMesh,
    make_box,
    make_cylinder,
    make_icosphere,
    random_rotation,
    signed_distances,
)
from ..hands import (
    HandPose,
    HandSpec,
    JOINT_SLOTS,
    canonicalize_mesh,
    decanonicalize_translation,
    sample_hand_cloud,
)
from ..physics import displacement_test, refine_grasp
from .config import PipelineConfig, load_hand

_POSE_TOL = 1e-5  # refinement fixed-point threshold, L-inf over the pose vector


def primitive_objects(names: tuple[str, ...] = ()) -> dict[str, TriangleMesh]:
    """The benchmark primitives; pass names to select a subset."""
    # subdivision 1 and 16 segments keep face counts low; distance queries
    # during closure scale with them
    builders = {
        "sphere_s": lambda: make_icosphere(0.022, subdivisions=1),
        "sphere_m": lambda: make_icosphere(0.030, subdivisions=1),
        "sphere_l": lambda: make_icosphere(0.040, subdivisions=1),
        "box_s": lambda: make_box((0.045, 0.045, 0.045)),
        "box_m": lambda: make_box((0.060, 0.060, 0.060)),
        "box_l": lambda: make_box((0.075, 0.075, 0.075)),
        "cylinder_s": lambda: make_cylinder(0.020, 0.080, segments=16),
        "cylinder_m": lambda: make_cylinder(0.028, 0.105, segments=16),
        "cylinder_l": lambda: make_cylinder(0.036, 0.130, segments=16),
    }
    if not names:
        names = tuple(builders)
    unknown = sorted(set(names) - set(builders))
    if unknown:
        raise ValueError(f"unknown primitive objects {unknown} (have: {sorted(builders)})")
    return {name: builders[name]() for name in sorted(names)}


_PALM_CLEARANCE = 0.002


def _initial_pose(
    spec: HandSpec, mesh: TriangleMesh, rng: np.random.Generator
) -> HandPose:
    """Open-ish joints with jitter; the finger pocket centered on the object.

    The object is placed at the centroid of the finger samples, then the
    hand is backed off along the palm-to-finger axis until the palm clears
    the surface. Joint fractions stay in the lower half of each range,
    which is the open side for every roster hand.
    """
    joints = np.zeros(JOINT_SLOTS)
    base = rng.uniform(0.05, 0.45)
    for i, joint in enumerate(spec.joints):
        frac = np.clip(base + rng.uniform(-0.1, 0.1), 0.0, 1.0)
        joints[i] = joint.lower + frac * (joint.upper - joint.lower)
    probe = HandPose(np.zeros(3), joints)
    cloud = sample_hand_cloud(spec, probe, 512, seed=int(rng.integers(0, 2**31)))
    palm = cloud.points[cloud.labels == 0]
    fingers = cloud.points[cloud.labels != 0]
    forward = fingers.mean(axis=0) - palm.mean(axis=0)
    forward /= np.linalg.norm(forward)
    translation = -fingers.mean(axis=0) + rng.normal(scale=0.003, size=3)
    # signed distance is 1-Lipschitz, so two corrections reach clearance
    for _ in range(2):
        deficit = _PALM_CLEARANCE - float(np.min(signed_distances(palm + translation, mesh)))
        if deficit <= 0.0:
            break
        translation = translation - deficit * forward
    return HandPose(translation, joints)


def scripted_closure(
    mesh: TriangleMesh,
    spec: HandSpec,
    pose: HandPose,
    max_iters: int,
    samples: int,
    seed: int,
) -> HandPose:
    """Iterate the single-step refinement to a fixed point (at most max_iters).

    The same sample seed is reused across iterations so the link samples
    stay fixed and the iteration actually contracts; fresh samples each
    step would jitter the goals and stall the early-exit test.
    """
    current = pose
    for _ in range(max_iters):
        updated = refine_grasp(mesh, spec, current, samples=samples, seed=seed)
        delta = np.max(np.abs(updated.to_vector() - current.to_vector()))
        current = updated
        if delta < _POSE_TOL:
            break
    return current


def generate_synthetic_dataset(
    config: PipelineConfig,
    seed: int,
    out_dir: str | Path | None = None,
) -> list[GraspRecord]:
    """Write a dataset under out_dir (default config.paths.dataset_dir).

    Per (object, hand) pair the generator keeps attempting scripted
    closures until records_per_pair grasps pass the displacement test or
    the attempt budget (records_per_pair * attempt_factor) runs out; a
    shortfall emits a warning with the achieved count but still writes
    the dataset.
    """
    root = Path(out_dir if out_dir is not None else config.paths.dataset_dir)
    objects = primitive_objects(config.dataset.objects)
    specs = [load_hand(config, name) for name in config.dataset.hands]
    target = config.dataset.records_per_pair
    budget = target * config.dataset.attempt_factor

    records: list[GraspRecord] = []
    pair_index = 0
    for object_id in sorted(objects):
        base_mesh = objects[object_id]
        for spec in specs:
            kept = 0
            for attempt in range(budget):
                rng = np.random.default_rng(
                    np.random.SeedSequence([seed, pair_index, attempt])
                )
                rotation = random_rotation(int(rng.integers(0, 2**31)))
                mesh = canonicalize_mesh(base_mesh, rotation)
                pose = _initial_pose(spec, mesh, rng)
                pose = scripted_closure(
                    mesh,
                    spec,
                    pose,
                    max_iters=config.dataset.max_refine_iters,
                    samples=config.dataset.refine_samples,
                    seed=int(rng.integers(0, 2**31)),
                )
                verdict = displacement_test(
                    mesh, spec, pose, config.physics, seed=int(rng.integers(0, 2**31))
                )
                if not verdict.passed:
                    continue
                final = verdict.refined_pose
                records.append(
                    GraspRecord(
                        hand_class=spec.class_id,
                        pose=HandPose(
                            decanonicalize_translation(final.translation, rotation),
                            final.joints,
                        ),
                        rotation=rotation,
                        object_id=object_id,
                    )
                )
                kept += 1
                if kept >= target:
                    break
            if kept < target:
                warnings.warn(
                    f"{object_id}/{spec.name}: kept {kept} of {target} grasps "
                    f"after {budget} attempts",
                    RuntimeWarning,
                    stacklevel=2,
                )
            pair_index += 1
    save_dataset(root, objects, records, cloud_points=config.dataset.cloud_points, seed=seed)
    return records
