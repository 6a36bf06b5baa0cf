"""ASCII PLY input and output for point clouds.

Supported vertex properties: x y z, optional nx ny nz, optional integer label.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .cloud import PointCloud


def save_ply(path: str | Path, cloud: PointCloud) -> None:
    lines = ["ply", "format ascii 1.0", f"element vertex {len(cloud)}"]
    lines += ["property float x", "property float y", "property float z"]
    if cloud.normals is not None:
        lines += ["property float nx", "property float ny", "property float nz"]
    if cloud.labels is not None:
        lines.append("property int label")
    lines.append("end_header")

    cols: list[np.ndarray] = [cloud.points]
    if cloud.normals is not None:
        cols.append(cloud.normals)
    data = np.concatenate(cols, axis=1)
    for i in range(len(cloud)):
        row = " ".join("%.9g" % v for v in data[i])
        if cloud.labels is not None:
            row += " %d" % cloud.labels[i]
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n")


def load_ply(path: str | Path) -> PointCloud:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise ValueError(f"{path}: not a PLY file")
    count = None
    props: list[str] = []
    body_at = None
    for i, raw in enumerate(lines[1:], start=1):
        line = raw.strip()
        if line == "end_header":
            body_at = i + 1
            break
        if line.startswith("comment") or not line:
            continue
        if line.startswith("format"):
            if line.split()[1] != "ascii":
                raise ValueError(f"{path}: only ascii PLY supported")
        elif line.startswith("element"):
            parts = line.split()
            if parts[1] != "vertex":
                raise ValueError(f"{path}: only vertex elements supported")
            count = int(parts[2])
        elif line.startswith("property"):
            props.append(line.split()[-1])
    if body_at is None or count is None:
        raise ValueError(f"{path}: malformed PLY header")
    expected = {"x", "y", "z"}
    if not expected.issubset(props):
        raise ValueError(f"{path}: missing coordinate properties")

    rows = []
    for line in lines[body_at : body_at + count]:
        rows.append([float(v) for v in line.split()])
    if len(rows) != count:
        raise ValueError(f"{path}: vertex rows missing")
    table = np.array(rows, dtype=np.float64)
    if table.shape[1] != len(props):
        raise ValueError(f"{path}: column count does not match header")

    col = {name: table[:, i] for i, name in enumerate(props)}
    points = np.column_stack([col["x"], col["y"], col["z"]])
    normals = None
    if {"nx", "ny", "nz"}.issubset(props):
        normals = np.column_stack([col["nx"], col["ny"], col["nz"]])
    labels = col["label"].astype(np.int64) if "label" in col else None
    return PointCloud(points=points, normals=normals, labels=labels)
