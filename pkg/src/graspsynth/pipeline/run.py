"""End-to-end run: sample candidates, filter by physics, pick by affordance.

Every stage draws from seeds derived as SeedSequence([seed, candidate, salt])
so results are a pure function of (config, seed) and candidate i is identical
no matter how many candidates follow it. All artifacts (JSON, JSONL, PLY) are
written with deterministic formatting so reruns are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..affordance import (
    LabelEmbeddingSet,
    PointFeatureField,
    affordance_softmax,
    correlation_matrix,
    encode_point_features,
    extract_affordance_region,
    load_feature_field,
    load_label_embeddings,
    select_functional_grasp,
)
from ..diffusion import GraspRecord, load_checkpoint, load_dataset, reverse_sample
from ..diffusion.dataset import _record_from_json, _record_to_json
from ..geometry import PointCloud, TriangleMesh, extract_contact_region, random_rotation, save_ply
from ..hands import (
    HandPose,
    HandSpec,
    canonicalize_cloud,
    canonicalize_mesh,
    canonicalize_translation,
    decanonicalize_cloud,
    decanonicalize_translation,
    sample_hand_cloud,
)
from ..physics import PhysicsVerdict, displacement_test, write_verdicts_jsonl
from .config import (
    ConfigError,
    PipelineConfig,
    load_hand,
    require_checkpoint,
    require_dataset,
    require_labels,
)
from .metrics import GraspOutcome

CANDIDATES_SCHEMA = "candidates_v1"
RUN_SCHEMA = "run_v1"

# per-candidate seed salts, one stream per stage
_SALT_SAMPLE = 0
_SALT_VERDICT = 1
_SALT_CONTACT = 2


class NoSurvivorsError(RuntimeError):
    """No candidate passed the physics filter; the CLI maps this to exit 2."""


class AffordanceAbsentError(RuntimeError):
    """The queried affordance labels no object point; the CLI maps this to exit 3."""


def _stage_seed(seed: int, candidate: int, salt: int) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([seed, candidate, salt]))
    return int(rng.integers(0, 2**31))


def sample_candidates(
    params,
    schedule,
    spec: HandSpec,
    object_cloud: PointCloud,
    object_id: str,
    count: int,
    seed: int,
) -> list[GraspRecord]:
    """Draw count grasps, each with a fresh object rotation and noise seed."""
    if count < 1:
        raise ConfigError("candidate count must be >= 1")
    records = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i, _SALT_SAMPLE]))
        rotation = random_rotation(int(rng.integers(0, 2**31)))
        records.append(
            reverse_sample(
                params,
                schedule,
                spec,
                object_cloud,
                rotation,
                seed=int(rng.integers(0, 2**31)),
                object_id=object_id,
            )
        )
    return records


def filter_candidates(
    records: list[GraspRecord],
    spec: HandSpec,
    object_mesh: TriangleMesh,
    config: PipelineConfig,
    seed: int,
) -> list[PhysicsVerdict]:
    """Displacement-test each candidate in its canonical frame.

    Returned verdicts carry the refined pose mapped back into the object
    frame so they pair with the records.
    """
    verdicts = []
    for i, record in enumerate(records):
        mesh = canonicalize_mesh(object_mesh, record.rotation)
        pose = HandPose(
            canonicalize_translation(record.pose.translation, record.rotation),
            record.pose.joints,
        )
        verdict = displacement_test(
            mesh, spec, pose, config.physics, seed=_stage_seed(seed, i, _SALT_VERDICT)
        )
        refined = HandPose(
            decanonicalize_translation(verdict.refined_pose.translation, record.rotation),
            verdict.refined_pose.joints,
        )
        verdicts.append(replace(verdict, refined_pose=refined))
    return verdicts


def contact_regions(
    records: list[GraspRecord],
    verdicts: list[PhysicsVerdict],
    spec: HandSpec,
    object_cloud: PointCloud,
    config: PipelineConfig,
    seed: int,
) -> list[PointCloud | None]:
    """Object points each passing candidate touches, in the object frame.

    Failing candidates map to None so indices stay aligned with records.
    """
    regions: list[PointCloud | None] = []
    for i, (record, verdict) in enumerate(zip(records, verdicts)):
        if not verdict.passed:
            regions.append(None)
            continue
        rotation = record.rotation
        canon_cloud = canonicalize_cloud(object_cloud, rotation)
        pose = HandPose(
            canonicalize_translation(verdict.refined_pose.translation, rotation),
            verdict.refined_pose.joints,
        )
        hand_cloud = sample_hand_cloud(
            spec,
            pose,
            config.sampling.hand_cloud_points,
            seed=_stage_seed(seed, i, _SALT_CONTACT),
        )
        region = extract_contact_region(
            hand_cloud, canon_cloud, config.sampling.contact_region_threshold
        )
        regions.append(None if region is None else decanonicalize_cloud(region, rotation))
    return regions


def load_affordance_field(
    config: PipelineConfig,
    object_cloud: PointCloud,
    object_id: str,
    labels: LabelEmbeddingSet,
) -> PointFeatureField:
    """Per-point features: a precomputed field if configured, else encoded.

    The encoder projects to the label embeddings' dimension so the two are
    comparable; a precomputed field must already match it.
    """
    dim = labels.embeddings.shape[1]
    if config.paths.features_dir is not None:
        root = Path(config.paths.features_dir)
        field = load_feature_field(root / f"{object_id}.dgd1", root / f"{object_id}.ply")
        if field.features.shape[1] != dim:
            raise ConfigError(
                f"feature field for {object_id!r} has dimension {field.features.shape[1]}, "
                f"labels have {dim}"
            )
        return field
    return encode_point_features(object_cloud, dim=dim, seed=0)


def segment_affordances(field: PointFeatureField, labels: LabelEmbeddingSet):
    return affordance_softmax(correlation_matrix(field, labels), labels.temperature)


@dataclass(frozen=True)
class RunResult:
    object_id: str
    hand: str
    label: str
    num_candidates: int
    num_survivors: int
    selected_index: int
    selection_score: float
    record: GraspRecord
    refined_pose: HandPose
    out_dir: str


def write_candidates(path: str | Path, object_id: str, hand: str, records: list[GraspRecord]) -> None:
    doc = {
        "schema": CANDIDATES_SCHEMA,
        "object_id": object_id,
        "hand": hand,
        "records": [_record_to_json(r) for r in records],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_candidates(path: str | Path) -> tuple[str, str, list[GraspRecord]]:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != CANDIDATES_SCHEMA:
        raise ConfigError(f"{path}: expected schema {CANDIDATES_SCHEMA!r}, got {doc.get('schema')!r}")
    records = [_record_from_json(entry) for entry in doc["records"]]
    return doc["object_id"], doc["hand"], records


def _write_report(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def run_pipeline(
    config: PipelineConfig,
    object_id: str,
    hand: str,
    label: str,
    out_dir: str | Path,
    seed: int,
) -> RunResult:
    """Sample, filter, and select one grasp; write all artifacts to out_dir.

    Raises NoSurvivorsError (exit 2) when physics rejects every candidate
    and AffordanceAbsentError (exit 3) when no object point carries the
    queried label; both still write the report and verdicts gathered so far.
    """
    dataset = load_dataset(require_dataset(config))
    if object_id not in dataset.objects:
        raise ConfigError(f"object {object_id!r} not in dataset (have: {sorted(dataset.objects)})")
    spec = load_hand(config, hand)
    params, schedule = load_checkpoint(require_checkpoint(config))
    labels = load_label_embeddings(require_labels(config))
    try:
        label_index = labels.index_of(label)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    mesh = dataset.objects[object_id]
    cloud = dataset.clouds[object_id]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    records = sample_candidates(
        params, schedule, spec, cloud, object_id, config.sampling.num_candidates, seed
    )
    write_candidates(out / "candidates.json", object_id, hand, records)
    save_ply(out / "object_cloud.ply", cloud)

    verdicts = filter_candidates(records, spec, mesh, config, seed)
    write_verdicts_jsonl(out / "verdicts.jsonl", list(enumerate(verdicts)))
    survivors = sum(v.passed for v in verdicts)

    report: dict = {
        "schema": RUN_SCHEMA,
        "object_id": object_id,
        "hand": hand,
        "label": label,
        "num_candidates": len(records),
        "num_survivors": int(survivors),
        "selected": None,
        "status": "ok",
    }
    if survivors == 0:
        report["status"] = "no_survivors"
        _write_report(out / "report.json", report)
        raise NoSurvivorsError(
            f"none of {len(records)} candidates passed the physics filter (report in {out})"
        )

    field = load_affordance_field(config, cloud, object_id, labels)
    segmentation = segment_affordances(field, labels)
    affordance = extract_affordance_region(segmentation, field.cloud, label_index)
    if affordance is None:
        report["status"] = "affordance_absent"
        _write_report(out / "report.json", report)
        raise AffordanceAbsentError(f"affordance {label!r} not found on object {object_id!r}")
    save_ply(out / "affordance_region.ply", affordance)

    regions = contact_regions(records, verdicts, spec, cloud, config, seed)
    try:
        selected, score = select_functional_grasp(list(enumerate(regions)), affordance)
    except ValueError as exc:
        # physics survivors without any labeled contact cannot be selected
        report["status"] = "no_survivors"
        _write_report(out / "report.json", report)
        raise NoSurvivorsError(str(exc)) from exc

    chosen = records[selected]
    refined = verdicts[selected].refined_pose
    report["selected"] = {
        "candidate_id": selected,
        "chamfer_score": float(score),
        "record": _record_to_json(chosen),
        "refined_pose": [float(v) for v in refined.to_vector()],
    }
    _write_report(out / "report.json", report)

    region = regions[selected]
    save_ply(out / "contact_region.ply", region)
    canon_pose = HandPose(
        canonicalize_translation(refined.translation, chosen.rotation), refined.joints
    )
    hand_cloud = sample_hand_cloud(
        spec,
        canon_pose,
        config.sampling.hand_cloud_points,
        seed=_stage_seed(seed, selected, _SALT_CONTACT),
    )
    save_ply(out / "hand_cloud.ply", decanonicalize_cloud(hand_cloud, chosen.rotation))

    return RunResult(
        object_id=object_id,
        hand=hand,
        label=label,
        num_candidates=len(records),
        num_survivors=int(survivors),
        selected_index=selected,
        selection_score=float(score),
        record=chosen,
        refined_pose=refined,
        out_dir=str(out),
    )


def outcomes_from_run_dir(path: str | Path) -> list[GraspOutcome]:
    """Pair a run directory's candidates with its verdicts for the metrics."""
    root = Path(path)
    _, hand, records = read_candidates(root / "candidates.json")
    outcomes = []
    with open(root / "verdicts.jsonl") as handle:
        rows = [json.loads(line) for line in handle if line.strip()]
    if len(rows) != len(records):
        raise ValueError(f"{root}: {len(records)} candidates but {len(rows)} verdicts")
    for row in rows:
        pose = np.asarray(row["refined_pose"], dtype=np.float64)
        outcomes.append(
            GraspOutcome(
                hand=hand,
                passed=bool(row["passed"]),
                joints=pose[3:],
                max_penetration_m=float(row["max_penetration_m"]),
            )
        )
    return outcomes


def collect_outcomes(results_root: str | Path) -> list[GraspOutcome]:
    """Gather outcomes from every run directory under results_root."""
    root = Path(results_root)
    if not root.is_dir():
        raise ConfigError(f"results directory not found: {root}")
    outcomes = []
    for candidates in sorted(root.rglob("candidates.json")):
        outcomes.extend(outcomes_from_run_dir(candidates.parent))
    if not outcomes:
        raise ConfigError(f"no run outputs (candidates.json + verdicts.jsonl) under {root}")
    return outcomes
