"""Grasp records and on-disk datasets ("dgd_dataset_v1").

A dataset directory holds a JSON manifest, one STL per object, and one
cached surface cloud per object stored as a float32 array (N, 6) of points
and normals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..arrays import read_array, write_array
from ..geometry import (
    PointCloud,
    Rotation3,
    TriangleMesh,
    load_stl,
    sample_surface_points,
    save_stl,
)
from ..hands import HandPose, check_padding
from ..hands.roster import ROSTER_NAMES, hand_for_class

SCHEMA = "dgd_dataset_v1"


@dataclass(frozen=True)
class GraspRecord:
    """One grasp: object-frame pose, the object rotation, and identifiers."""

    hand_class: int
    pose: HandPose
    rotation: Rotation3
    object_id: str

    def __post_init__(self):
        spec = hand_for_class(self.hand_class)
        check_padding(spec, self.pose)


@dataclass
class GraspDataset:
    objects: dict[str, TriangleMesh] = field(default_factory=dict)
    clouds: dict[str, PointCloud] = field(default_factory=dict)
    records: list[GraspRecord] = field(default_factory=list)


def _record_to_json(record: GraspRecord) -> dict:
    return {
        "object_id": record.object_id,
        "hand": ROSTER_NAMES[record.hand_class],
        "hand_class": record.hand_class,
        "rotation_wxyz": [float(v) for v in record.rotation.to_quaternion()],
        "pose": [float(v) for v in record.pose.to_vector()],
    }


def _record_from_json(entry: dict) -> GraspRecord:
    hand_class = int(entry["hand_class"])
    if entry.get("hand") != ROSTER_NAMES[hand_class]:
        raise ValueError(
            f"record hand name {entry.get('hand')!r} does not match class {hand_class}"
        )
    return GraspRecord(
        hand_class=hand_class,
        pose=HandPose.from_vector(np.array(entry["pose"], dtype=np.float64)),
        rotation=Rotation3.from_quaternion(np.array(entry["rotation_wxyz"], dtype=np.float64)),
        object_id=entry["object_id"],
    )


def save_dataset(
    path: str | Path,
    objects: dict[str, TriangleMesh],
    records: list[GraspRecord],
    cloud_points: int = 2048,
    seed: int = 0,
) -> None:
    """Write meshes, cached surface clouds, and the record manifest."""
    root = Path(path)
    (root / "meshes").mkdir(parents=True, exist_ok=True)
    (root / "clouds").mkdir(parents=True, exist_ok=True)
    for record in records:
        if record.object_id not in objects:
            raise ValueError(f"record references unknown object {record.object_id!r}")
    entries = []
    child_seeds = np.random.default_rng(seed).integers(0, 2**31, size=max(len(objects), 1))
    for (object_id, mesh), s in zip(sorted(objects.items()), child_seeds):
        mesh_rel = f"meshes/{object_id}.stl"
        cloud_rel = f"clouds/{object_id}.dgd1"
        save_stl(root / mesh_rel, mesh)
        cloud = sample_surface_points(mesh, cloud_points, seed=int(s))
        write_array(root / cloud_rel, np.concatenate([cloud.points, cloud.normals], axis=1))
        entries.append({"id": object_id, "mesh_path": mesh_rel, "cloud_path": cloud_rel})
    doc = {
        "schema": SCHEMA,
        "objects": entries,
        "records": [_record_to_json(r) for r in records],
    }
    (root / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_dataset(path: str | Path) -> GraspDataset:
    root = Path(path)
    doc = json.loads((root / "manifest.json").read_text())
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"{root}: expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    dataset = GraspDataset()
    for entry in doc["objects"]:
        object_id = entry["id"]
        dataset.objects[object_id] = load_stl(root / entry["mesh_path"])
        raw = read_array(root / entry["cloud_path"]).astype(np.float64)
        if raw.ndim != 2 or raw.shape[1] != 6:
            raise ValueError(f"cached cloud for {object_id!r} must be (N, 6)")
        normals = raw[:, 3:]
        # float32 storage denormalizes unit vectors slightly
        normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
        dataset.clouds[object_id] = PointCloud(points=raw[:, :3], normals=normals)
    for entry in doc["records"]:
        record = _record_from_json(entry)
        if record.object_id not in dataset.objects:
            raise ValueError(f"record references unknown object {record.object_id!r}")
        dataset.records.append(record)
    return dataset
