"""Hand spec files: JSON document plus STL link meshes ("hand_spec_v1")."""

from __future__ import annotations

import json
from pathlib import Path

from ..geometry import TriangleMesh, load_stl, save_stl
from .model import HandSpec, JointSpec, Link, RigidTransform

SCHEMA = "hand_spec_v1"


def save_hand_spec(path: str | Path, spec: HandSpec, mesh_dir: str = "meshes") -> None:
    """Write the spec JSON next to its mesh files.

    Links sharing one mesh instance share one STL on disk.
    """
    path = Path(path)
    mesh_root = path.parent / mesh_dir
    mesh_root.mkdir(parents=True, exist_ok=True)
    mesh_paths: dict[int, str] = {}
    links = []
    for link in spec.links:
        key = id(link.mesh)
        if key not in mesh_paths:
            fname = f"{spec.name}_{link.name}.stl"
            save_stl(mesh_root / fname, link.mesh)
            mesh_paths[key] = f"{mesh_dir}/{fname}"
        links.append(
            {
                "name": link.name,
                "mesh_path": mesh_paths[key],
                "finger_label": link.finger_label,
            }
        )
    joints = [
        {
            "name": j.name,
            "parent_link": j.parent_link,
            "child_link": j.child_link,
            "axis": list(j.axis),
            "origin": {
                "rotation": [float(v) for v in j.origin.rotation.reshape(9)],
                "translation": list(j.origin.translation),
            },
            "type": j.type,
            "lower": j.lower,
            "upper": j.upper,
        }
        for j in spec.joints
    ]
    doc = {
        "schema": SCHEMA,
        "name": spec.name,
        "class_id": spec.class_id,
        "palm_link": spec.palm_link,
        "links": links,
        "joints": joints,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_hand_spec(path: str | Path) -> HandSpec:
    path = Path(path)
    doc = json.loads(path.read_text())
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"{path}: expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    mesh_cache: dict[str, TriangleMesh] = {}
    links = []
    for entry in doc["links"]:
        rel = entry["mesh_path"]
        if rel not in mesh_cache:
            mesh_cache[rel] = load_stl(path.parent / rel)
        links.append(
            Link(name=entry["name"], mesh=mesh_cache[rel], finger_label=entry["finger_label"])
        )
    joints = []
    for entry in doc["joints"]:
        origin = RigidTransform(
            rotation=[entry["origin"]["rotation"][i : i + 3] for i in (0, 3, 6)],
            translation=entry["origin"]["translation"],
        )
        joints.append(
            JointSpec(
                name=entry["name"],
                parent_link=entry["parent_link"],
                child_link=entry["child_link"],
                axis=entry["axis"],
                origin=origin,
                type=entry["type"],
                lower=float(entry["lower"]),
                upper=float(entry["upper"]),
            )
        )
    return HandSpec(
        name=doc["name"],
        class_id=doc["class_id"],
        links=links,
        joints=joints,
        palm_link=doc["palm_link"],
    )
