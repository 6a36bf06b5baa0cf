"""Command line front end.

Subcommands: gen-data, train, sample, filter, select, eval, run. Every
subcommand takes --config/--seed/--out; --seed falls back to the config's
sampling.base_seed and --out to the stage's configured directory.

Exit codes: 0 success, 2 no physics survivors, 3 affordance absent on the
object, 64 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ..affordance import extract_affordance_region, load_label_embeddings, select_functional_grasp
from ..diffusion import init_denoiser, load_checkpoint, load_dataset, make_training_example, run_training, save_checkpoint
from ..diffusion.dataset import _record_to_json
from ..hands import HandPose
from ..hands.roster import ROSTER_NAMES, hand_for_class
from ..physics import PhysicsVerdict, read_verdicts_jsonl, write_verdicts_jsonl
from .config import (
    ConfigError,
    PipelineConfig,
    load_hand,
    load_pipeline_config,
    require_checkpoint,
    require_dataset,
    require_labels,
)
from .datasetgen import generate_synthetic_dataset
from .metrics import compute_metrics, render_table, write_report
from .run import (
    AffordanceAbsentError,
    NoSurvivorsError,
    collect_outcomes,
    contact_regions,
    filter_candidates,
    load_affordance_field,
    read_candidates,
    run_pipeline,
    sample_candidates,
    segment_affordances,
    write_candidates,
)

EXIT_OK = 0
EXIT_NO_SURVIVORS = 2
EXIT_NO_AFFORDANCE = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; 2 means "no survivors" here, so remap."""

    def exit(self, status: int = 0, message: str | None = None):
        if message:
            self._print_message(message, sys.stderr)
        raise SystemExit(EXIT_USAGE if status != 0 else 0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="pipeline config JSON")
    common.add_argument("--seed", type=int, default=None, help="override sampling.base_seed")
    common.add_argument("--out", default=None, help="override the output directory")

    parser = _Parser(prog="graspsynth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gen-data", parents=[common], help="generate the synthetic grasp dataset")
    sub.add_parser("train", parents=[common], help="train the denoiser on the dataset")

    p = sub.add_parser("sample", parents=[common], help="sample grasp candidates")
    p.add_argument("--object", required=True, help="object id from the dataset")
    p.add_argument("--hand", required=True, choices=ROSTER_NAMES)

    p = sub.add_parser("filter", parents=[common], help="physics-filter sampled candidates")
    p.add_argument("--candidates", required=True, help="candidates.json from sample")

    p = sub.add_parser("select", parents=[common], help="pick the functional grasp")
    p.add_argument("--candidates", required=True, help="candidates.json from sample")
    p.add_argument("--verdicts", required=True, help="verdicts.jsonl from filter")
    p.add_argument("--label", required=True, help="affordance label to grasp by")

    p = sub.add_parser("eval", parents=[common], help="aggregate run outputs into a report")
    p.add_argument("--results", required=True, help="directory of run outputs")

    p = sub.add_parser("run", parents=[common], help="sample, filter, and select end to end")
    p.add_argument("--object", required=True, help="object id from the dataset")
    p.add_argument("--hand", required=True, choices=ROSTER_NAMES)
    p.add_argument("--label", required=True, help="affordance label to grasp by")

    return parser


def _seed(args, config: PipelineConfig) -> int:
    return config.sampling.base_seed if args.seed is None else args.seed


def _out_dir(args, default: str) -> Path:
    path = Path(default if args.out is None else args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_gen_data(args, config: PipelineConfig) -> int:
    out = args.out if args.out is not None else config.paths.dataset_dir
    records = generate_synthetic_dataset(config, seed=_seed(args, config), out_dir=out)
    print(f"wrote {len(records)} grasp records to {out}")
    return EXIT_OK


def _cmd_train(args, config: PipelineConfig) -> int:
    dataset = load_dataset(require_dataset(config))
    if not dataset.records:
        raise ConfigError("dataset has no grasp records; cannot train")
    seed = _seed(args, config)
    params = init_denoiser(config.diffusion.model_config(), seed=config.diffusion.init_seed)
    schedule = config.diffusion.schedule()
    examples = []
    for i, record in enumerate(dataset.records):
        spec = hand_for_class(record.hand_class)
        cloud = dataset.clouds[record.object_id]
        examples.append(make_training_example(record, cloud, spec, params, seed=i))
    losses = run_training(
        params,
        examples,
        schedule,
        steps=config.diffusion.train_steps,
        seed=seed,
        batch_size=config.diffusion.batch_size,
        lr=config.diffusion.learning_rate,
    )
    out = args.out if args.out is not None else config.paths.checkpoint_dir
    save_checkpoint(out, params, schedule)
    print(
        f"trained {config.diffusion.train_steps} steps on {len(examples)} grasps "
        f"(loss {losses[0]:.4f} -> {losses[-1]:.4f}); checkpoint in {out}"
    )
    return EXIT_OK


def _cmd_sample(args, config: PipelineConfig) -> int:
    dataset = load_dataset(require_dataset(config))
    if args.object not in dataset.objects:
        raise ConfigError(f"object {args.object!r} not in dataset (have: {sorted(dataset.objects)})")
    params, schedule = load_checkpoint(require_checkpoint(config))
    spec = load_hand(config, args.hand)
    out = _out_dir(args, config.paths.out_dir)
    records = sample_candidates(
        params,
        schedule,
        spec,
        dataset.clouds[args.object],
        args.object,
        config.sampling.num_candidates,
        seed=_seed(args, config),
    )
    write_candidates(out / "candidates.json", args.object, args.hand, records)
    print(f"sampled {len(records)} candidates into {out / 'candidates.json'}")
    return EXIT_OK


def _cmd_filter(args, config: PipelineConfig) -> int:
    object_id, hand, records = read_candidates(args.candidates)
    dataset = load_dataset(require_dataset(config))
    if object_id not in dataset.objects:
        raise ConfigError(f"object {object_id!r} not in dataset (have: {sorted(dataset.objects)})")
    spec = load_hand(config, hand)
    out = _out_dir(args, config.paths.out_dir)
    verdicts = filter_candidates(
        records, spec, dataset.objects[object_id], config, seed=_seed(args, config)
    )
    write_verdicts_jsonl(out / "verdicts.jsonl", list(enumerate(verdicts)))
    survivors = sum(v.passed for v in verdicts)
    print(f"{survivors} of {len(verdicts)} candidates passed; verdicts in {out / 'verdicts.jsonl'}")
    if survivors == 0:
        raise NoSurvivorsError(f"none of {len(verdicts)} candidates passed the physics filter")
    return EXIT_OK


def _cmd_select(args, config: PipelineConfig) -> int:
    object_id, hand, records = read_candidates(args.candidates)
    dataset = load_dataset(require_dataset(config))
    if object_id not in dataset.objects:
        raise ConfigError(f"object {object_id!r} not in dataset (have: {sorted(dataset.objects)})")
    spec = load_hand(config, hand)
    labels = load_label_embeddings(require_labels(config))
    try:
        label_index = labels.index_of(args.label)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    rows = read_verdicts_jsonl(args.verdicts)
    if len(rows) != len(records):
        raise ConfigError(f"{len(records)} candidates but {len(rows)} verdicts")
    verdicts = [
        PhysicsVerdict(
            passed=bool(row["passed"]),
            per_axis=tuple(bool(v) for v in row["per_axis"]),
            max_penetration=float(row["max_penetration_m"]),
            refined_pose=HandPose.from_vector(np.asarray(row["refined_pose"], dtype=np.float64)),
        )
        for row in rows
    ]
    if not any(v.passed for v in verdicts):
        raise NoSurvivorsError("no candidate in the verdict set passed the physics filter")

    cloud = dataset.clouds[object_id]
    field = load_affordance_field(config, cloud, object_id, labels)
    segmentation = segment_affordances(field, labels)
    affordance = extract_affordance_region(segmentation, field.cloud, label_index)
    if affordance is None:
        raise AffordanceAbsentError(f"affordance {args.label!r} not found on object {object_id!r}")
    regions = contact_regions(records, verdicts, spec, cloud, config, seed=_seed(args, config))
    try:
        selected, score = select_functional_grasp(list(enumerate(regions)), affordance)
    except ValueError as exc:
        raise NoSurvivorsError(str(exc)) from exc
    out = _out_dir(args, config.paths.out_dir)
    doc = {
        "schema": "selection_v1",
        "object_id": object_id,
        "hand": hand,
        "label": args.label,
        "candidate_id": selected,
        "chamfer_score": float(score),
        "record": _record_to_json(records[selected]),
        "refined_pose": [float(v) for v in verdicts[selected].refined_pose.to_vector()],
    }
    (out / "selected.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"selected candidate {selected} (chamfer {score:.6f}); wrote {out / 'selected.json'}")
    return EXIT_OK


def _cmd_eval(args, config: PipelineConfig) -> int:
    outcomes = collect_outcomes(args.results)
    report = compute_metrics(outcomes, excluded_hands=config.metrics.excluded_hands)
    out = _out_dir(args, config.paths.out_dir)
    write_report(out / "eval_report.json", report)
    print(render_table(report))
    print(f"report written to {out / 'eval_report.json'}")
    return EXIT_OK


def _cmd_run(args, config: PipelineConfig) -> int:
    out = args.out if args.out is not None else config.paths.out_dir
    result = run_pipeline(
        config, args.object, args.hand, args.label, out_dir=out, seed=_seed(args, config)
    )
    print(
        f"selected candidate {result.selected_index} of {result.num_candidates} "
        f"({result.num_survivors} passed physics; chamfer {result.selection_score:.6f}); "
        f"artifacts in {result.out_dir}"
    )
    return EXIT_OK


_COMMANDS = {
    "gen-data": _cmd_gen_data,
    "train": _cmd_train,
    "sample": _cmd_sample,
    "filter": _cmd_filter,
    "select": _cmd_select,
    "eval": _cmd_eval,
    "run": _cmd_run,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = load_pipeline_config(args.config)
        return _COMMANDS[args.command](args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSurvivorsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SURVIVORS
    except AffordanceAbsentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_AFFORDANCE


if __name__ == "__main__":
    sys.exit(main())
