"""Run configuration: one JSON file drives every CLI subcommand.

The file has five optional sections (paths, diffusion, physics, sampling,
dataset, metrics); anything omitted falls back to the defaults below.
Relative paths are resolved against the config file's directory so a config
can travel with its data.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..diffusion import DenoiserConfig, NoiseSchedule, linear_schedule
from ..hands import HandSpec, load_hand_spec, load_roster_hand
from ..hands.roster import ROSTER_NAMES
from ..physics import WrenchTestConfig


class ConfigError(Exception):
    """Bad configuration or usage; the CLI maps this to exit code 64."""


@dataclass(frozen=True)
class PathsSection:
    dataset_dir: str = "dataset"
    checkpoint_dir: str = "checkpoint"
    labels_file: str | None = None
    features_dir: str | None = None
    roster_dir: str | None = None
    out_dir: str = "out"


@dataclass(frozen=True)
class DiffusionSection:
    """Model size, schedule length, and training budget."""

    steps: int = 100
    width: int = 32
    attn_heads: int = 4
    fusion_layers: int = 2
    object_points: int = 64
    hand_points: int = 48
    train_steps: int = 1500
    batch_size: int = 8
    learning_rate: float = 3e-3
    init_seed: int = 0

    def __post_init__(self):
        if not isinstance(self.steps, int) or self.steps < 1:
            raise ConfigError(f"diffusion.steps must be a positive integer, got {self.steps!r}")
        if self.train_steps < 1 or self.batch_size < 1:
            raise ConfigError("diffusion.train_steps and batch_size must be >= 1")
        if not self.learning_rate > 0.0:
            raise ConfigError("diffusion.learning_rate must be positive")

    def model_config(self) -> DenoiserConfig:
        try:
            return DenoiserConfig(
                width=self.width,
                attn_heads=self.attn_heads,
                fusion_layers=self.fusion_layers,
                object_points=self.object_points,
                hand_points=self.hand_points,
            )
        except ValueError as exc:
            raise ConfigError(f"diffusion section: {exc}") from exc

    def schedule(self) -> NoiseSchedule:
        return linear_schedule(self.steps)


@dataclass(frozen=True)
class SamplingSection:
    num_candidates: int = 64
    base_seed: int = 0
    contact_region_threshold: float = 0.01
    hand_cloud_points: int = 512

    def __post_init__(self):
        if self.num_candidates < 1:
            raise ConfigError("sampling.num_candidates must be >= 1")
        if not self.contact_region_threshold > 0.0:
            raise ConfigError("sampling.contact_region_threshold must be positive")
        if self.hand_cloud_points < 1:
            raise ConfigError("sampling.hand_cloud_points must be >= 1")


@dataclass(frozen=True)
class DatasetSection:
    """Knobs for synthetic dataset generation."""

    records_per_pair: int = 2
    attempt_factor: int = 4
    hands: tuple[str, ...] = ROSTER_NAMES
    objects: tuple[str, ...] = ()
    cloud_points: int = 1024
    max_refine_iters: int = 60
    refine_samples: int = 256

    def __post_init__(self):
        if self.records_per_pair < 1 or self.attempt_factor < 1:
            raise ConfigError("dataset.records_per_pair and attempt_factor must be >= 1")
        unknown = [h for h in self.hands if h not in ROSTER_NAMES]
        if unknown:
            raise ConfigError(f"dataset.hands contains unknown hands {unknown} (roster: {list(ROSTER_NAMES)})")
        if not self.hands:
            raise ConfigError("dataset.hands must name at least one hand")
        if self.cloud_points < 64:
            raise ConfigError("dataset.cloud_points must be >= 64")
        if self.max_refine_iters < 1 or self.refine_samples < 1:
            raise ConfigError("dataset.max_refine_iters and refine_samples must be >= 1")


@dataclass(frozen=True)
class MetricsSection:
    excluded_hands: tuple[str, ...] = ("robotiq3f",)

    def __post_init__(self):
        unknown = [h for h in self.excluded_hands if h not in ROSTER_NAMES]
        if unknown:
            raise ConfigError(f"metrics.excluded_hands contains unknown hands {unknown}")


@dataclass(frozen=True)
class PipelineConfig:
    paths: PathsSection = field(default_factory=PathsSection)
    diffusion: DiffusionSection = field(default_factory=DiffusionSection)
    physics: WrenchTestConfig = field(default_factory=WrenchTestConfig)
    sampling: SamplingSection = field(default_factory=SamplingSection)
    dataset: DatasetSection = field(default_factory=DatasetSection)
    metrics: MetricsSection = field(default_factory=MetricsSection)


# physics keys a config file may override; axes and centroid are derived at run time
_PHYSICS_KEYS = (
    "friction_mu",
    "cone_facets",
    "object_mass",
    "acceleration",
    "force_cap",
    "balance_tol",
    "contact_threshold",
    "contact_samples",
    "displacement_limit",
    "duration_steps",
)

_LIST_FIELDS = {"hands", "objects", "excluded_hands"}


def _build_section(cls, doc: dict, name: str):
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys in section {name!r}: {unknown}")
    kwargs = {}
    for key, value in doc.items():
        if key in _LIST_FIELDS:
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ConfigError(f"{name}.{key} must be a list of strings")
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"section {name!r}: {exc}") from exc


def _build_physics(doc: dict) -> WrenchTestConfig:
    unknown = sorted(set(doc) - set(_PHYSICS_KEYS))
    if unknown:
        raise ConfigError(f"unknown keys in section 'physics': {unknown}")
    try:
        return replace(WrenchTestConfig(), **doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"section 'physics': {exc}") from exc


def _resolve_paths(paths: PathsSection, base: Path) -> PathsSection:
    def resolve(value: str | None) -> str | None:
        if value is None:
            return None
        return str((base / value).resolve()) if not Path(value).is_absolute() else value

    return PathsSection(
        dataset_dir=resolve(paths.dataset_dir),
        checkpoint_dir=resolve(paths.checkpoint_dir),
        labels_file=resolve(paths.labels_file),
        features_dir=resolve(paths.features_dir),
        roster_dir=resolve(paths.roster_dir),
        out_dir=resolve(paths.out_dir),
    )


_SECTIONS = {
    "paths": (PathsSection, "paths"),
    "diffusion": (DiffusionSection, "diffusion"),
    "sampling": (SamplingSection, "sampling"),
    "dataset": (DatasetSection, "dataset"),
    "metrics": (MetricsSection, "metrics"),
}


def load_pipeline_config(path: str | Path) -> PipelineConfig:
    """Parse and validate a config file; any defect raises ConfigError.

    Input fixtures named by the config (labels file, feature directory,
    roster directory) must already exist. Dataset and checkpoint
    directories are products of gen-data/train, so their existence is
    checked by the commands that consume them.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = sorted(set(doc) - set(_SECTIONS) - {"physics"})
    if unknown:
        raise ConfigError(f"{path}: unknown sections {unknown}")

    kwargs = {}
    for section, (cls, name) in _SECTIONS.items():
        raw = doc.get(section, {})
        if not isinstance(raw, dict):
            raise ConfigError(f"section {name!r} must be a JSON object")
        kwargs[section] = _build_section(cls, raw, name)
    raw_physics = doc.get("physics", {})
    if not isinstance(raw_physics, dict):
        raise ConfigError("section 'physics' must be a JSON object")
    kwargs["physics"] = _build_physics(raw_physics)

    config = PipelineConfig(**kwargs)
    config = replace(config, paths=_resolve_paths(config.paths, path.parent))

    # the roster is consumed by every command, so its override is checked
    # here; dataset, checkpoint, labels, and features are products of
    # earlier stages and are checked by the commands that read them
    if config.paths.roster_dir is not None and not Path(config.paths.roster_dir).is_dir():
        raise ConfigError(f"paths.roster_dir does not exist: {config.paths.roster_dir}")
    return config


def require_dataset(config: PipelineConfig) -> Path:
    root = Path(config.paths.dataset_dir)
    if not (root / "manifest.json").is_file():
        raise ConfigError(f"dataset not found at {root} (run gen-data first)")
    return root


def require_checkpoint(config: PipelineConfig) -> Path:
    root = Path(config.paths.checkpoint_dir)
    if not (root / "manifest.json").is_file():
        raise ConfigError(f"checkpoint not found at {root} (run train first)")
    return root


def require_labels(config: PipelineConfig) -> Path:
    if config.paths.labels_file is None:
        raise ConfigError("paths.labels_file is not set; functional selection needs label embeddings")
    path = Path(config.paths.labels_file)
    if not path.is_file():
        raise ConfigError(f"paths.labels_file does not exist: {path}")
    return path


def load_hand(config: PipelineConfig, name: str) -> HandSpec:
    """Hand spec by roster name, honoring a roster directory override.

    A custom roster must keep the packaged class ids and joint counts;
    record validation always goes through the packaged layout.
    """
    if name not in ROSTER_NAMES:
        raise ConfigError(f"unknown hand {name!r} (roster: {list(ROSTER_NAMES)})")
    if config.paths.roster_dir is not None:
        spec_path = Path(config.paths.roster_dir) / f"{name}.json"
        if not spec_path.is_file():
            raise ConfigError(f"hand spec not found: {spec_path}")
        return load_hand_spec(spec_path)
    return load_roster_hand(name)
