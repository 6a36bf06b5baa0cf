"""Orchestration: config, dataset generation, metrics, end-to-end runs, CLI."""

from .config import (
    ConfigError,
    DatasetSection,
    DiffusionSection,
    MetricsSection,
    PathsSection,
    PipelineConfig,
    SamplingSection,
    load_hand,
    load_pipeline_config,
    require_checkpoint,
    require_dataset,
    require_labels,
)
from .datasetgen import generate_synthetic_dataset, primitive_objects, scripted_closure
from .metrics import (
    EvalReport,
    GraspOutcome,
    MetricRow,
    compute_metrics,
    read_report,
    render_table,
    report_from_doc,
    report_to_doc,
    write_report,
)
from .run import (
    AffordanceAbsentError,
    NoSurvivorsError,
    RunResult,
    collect_outcomes,
    contact_regions,
    filter_candidates,
    load_affordance_field,
    outcomes_from_run_dir,
    read_candidates,
    run_pipeline,
    sample_candidates,
    segment_affordances,
    write_candidates,
)

__all__ = [
    "AffordanceAbsentError",
    "ConfigError",
    "DatasetSection",
    "DiffusionSection",
    "EvalReport",
    "GraspOutcome",
    "MetricRow",
    "MetricsSection",
    "NoSurvivorsError",
    "PathsSection",
    "PipelineConfig",
    "RunResult",
    "SamplingSection",
    "collect_outcomes",
    "compute_metrics",
    "contact_regions",
    "filter_candidates",
    "generate_synthetic_dataset",
    "load_affordance_field",
    "load_hand",
    "load_pipeline_config",
    "outcomes_from_run_dir",
    "primitive_objects",
    "read_candidates",
    "read_report",
    "render_table",
    "report_from_doc",
    "report_to_doc",
    "require_checkpoint",
    "require_dataset",
    "require_labels",
    "run_pipeline",
    "sample_candidates",
    "scripted_closure",
    "segment_affordances",
    "write_candidates",
    "write_report",
]
