"""Physics-based grasp filtering: contacts, refinement, wrench feasibility."""

from .contacts import ContactPoint, detect_contacts, link_surface_points
from .lp import FeasibilityResult, min_equality_residual
from .refine import refine_grasp
from .verdict import (
    PhysicsVerdict,
    displacement_test,
    read_verdicts_jsonl,
    verdict_record,
    write_verdicts_jsonl,
)
from .wrench import (
    AXES_6,
    WrenchTestConfig,
    brute_force_wrench_check,
    cone_edges,
    contact_wrench_columns,
    required_wrench,
    wrench_feasibility,
)

__all__ = [
    "AXES_6",
    "ContactPoint",
    "FeasibilityResult",
    "PhysicsVerdict",
    "WrenchTestConfig",
    "brute_force_wrench_check",
    "cone_edges",
    "contact_wrench_columns",
    "detect_contacts",
    "displacement_test",
    "link_surface_points",
    "min_equality_residual",
    "read_verdicts_jsonl",
    "refine_grasp",
    "required_wrench",
    "verdict_record",
    "wrench_feasibility",
    "write_verdicts_jsonl",
]
