"""Checkpoint directories: a JSON manifest plus one array file per parameter.

Arrays are stored float32 ("dgd_ckpt_v1"); loading restores float64 copies,
so a save/load roundtrip quantizes weights once and is a fixed point after
that.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..arrays import read_array, write_array
from .autodiff import Tensor
from .model import DenoiserConfig, DenoiserParams
from .schedule import NoiseSchedule

SCHEMA = "dgd_ckpt_v1"


def save_checkpoint(path: str | Path, params: DenoiserParams, schedule: NoiseSchedule) -> None:
    root = Path(path)
    arrays = root / "arrays"
    arrays.mkdir(parents=True, exist_ok=True)
    names = list(params.tensors)
    for name in names:
        write_array(arrays / f"{name}.dgd1", params.tensors[name].data)
    write_array(arrays / "schedule_betas.dgd1", schedule.betas)
    doc = {
        "schema": SCHEMA,
        "config": asdict(params.config),
        "parameters": names,
        "schedule": {"steps": schedule.steps, "betas_path": "arrays/schedule_betas.dgd1"},
        "parameter_count": params.parameter_count,
    }
    (root / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_checkpoint(path: str | Path) -> tuple[DenoiserParams, NoiseSchedule]:
    root = Path(path)
    doc = json.loads((root / "manifest.json").read_text())
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"{root}: expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    config = DenoiserConfig(**doc["config"])
    tensors = {}
    for name in doc["parameters"]:
        data = read_array(root / "arrays" / f"{name}.dgd1").astype(np.float64)
        tensors[name] = Tensor(data, requires_grad=True)
    params = DenoiserParams(config=config, tensors=tensors)
    betas = read_array(root / doc["schedule"]["betas_path"]).astype(np.float64)
    schedule = NoiseSchedule(betas)
    if schedule.steps != doc["schedule"]["steps"]:
        raise ValueError("schedule length disagrees with manifest")
    return params, schedule
