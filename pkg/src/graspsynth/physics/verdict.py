"""Six-axis displacement verdicts and their JSONL export."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..geometry import TriangleMesh, mesh_volume_centroid
from ..geometry.sdf import signed_distances
from ..hands import HandPose, HandSpec
from .contacts import detect_contacts, link_surface_points
from .refine import refine_grasp
from .wrench import WrenchTestConfig, wrench_feasibility


@dataclass(frozen=True)
class PhysicsVerdict:
    passed: bool
    per_axis: tuple[bool, bool, bool, bool, bool, bool]
    max_penetration: float  # meters, >= 0
    refined_pose: HandPose

    def __post_init__(self):
        per_axis = tuple(bool(v) for v in self.per_axis)
        if len(per_axis) != 6:
            raise ValueError("per_axis must have six entries")
        object.__setattr__(self, "per_axis", per_axis)
        if bool(self.passed) != all(per_axis):
            raise ValueError("passed must equal the conjunction of per_axis")
        if self.max_penetration < 0.0:
            raise ValueError("max_penetration must be nonnegative")


def displacement_test(
    object_mesh: TriangleMesh,
    spec: HandSpec,
    pose: HandPose,
    cfg: WrenchTestConfig,
    seed: int = 0,
) -> PhysicsVerdict:
    """Refine once, detect contacts, then push along all six signed axes.

    Torque balance is taken about the object's volume centroid, overriding
    cfg.centroid. Penetration is measured over all hand surface samples at
    the refined pose.
    """
    refined = refine_grasp(object_mesh, spec, pose, samples=cfg.contact_samples, seed=seed)
    _, centroid = mesh_volume_centroid(object_mesh)
    cfg = replace(cfg, centroid=tuple(float(c) for c in centroid))
    contacts = detect_contacts(
        object_mesh,
        spec,
        refined,
        threshold=cfg.contact_threshold,
        samples=cfg.contact_samples,
        seed=seed,
    )
    per_axis = tuple(wrench_feasibility(contacts, cfg, axis) for axis in cfg.axes)
    points, _ = link_surface_points(spec, refined, cfg.contact_samples, seed=seed)
    gaps = signed_distances(points, object_mesh)
    max_penetration = max(0.0, -float(gaps.min()))
    return PhysicsVerdict(
        passed=all(per_axis),
        per_axis=per_axis,
        max_penetration=max_penetration,
        refined_pose=refined,
    )


def verdict_record(candidate_id: str, verdict: PhysicsVerdict) -> dict:
    return {
        "candidate_id": candidate_id,
        "passed": verdict.passed,
        "per_axis": list(verdict.per_axis),
        "max_penetration_m": verdict.max_penetration,
        "refined_pose": [float(v) for v in verdict.refined_pose.to_vector()],
    }


def write_verdicts_jsonl(path, records: list[tuple[str, PhysicsVerdict]]) -> None:
    """One JSON object per line, keys sorted, stable float formatting."""
    lines = [json.dumps(verdict_record(cid, v), sort_keys=True) for cid, v in records]
    Path(path).write_text("\n".join(lines) + "\n" if lines else "")


def read_verdicts_jsonl(path) -> list[dict]:
    text = Path(path).read_text()
    return [json.loads(line) for line in text.splitlines() if line.strip()]
