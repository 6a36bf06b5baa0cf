"""Per-hand grasp metrics and the aggregate report ("eval_v1").

Definitions, fixed here because published tables depend on them:

* success_rate: percent of candidates whose physics verdict passed.
* diversity: per-dim standard deviation (population, ddof=0) of joint
  angles across passing grasps, averaged over the hand's valid joint
  dims. Radians.
* collision_depth: mean over passing grasps of the per-grasp maximum
  penetration, reported in mm; the per-hand maximum is kept as a
  secondary column.

Hands with zero passing grasps report diversity and collision as absent
(null in JSON), never zero. The mean row is the unweighted average over
included hands; by default robotiq3f is sampled but excluded from it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..hands import JOINT_SLOTS, load_roster_hand, make_padding_mask
from ..hands.roster import ROSTER_NAMES

SCHEMA = "eval_v1"


@dataclass(frozen=True)
class GraspOutcome:
    """One candidate grasp reduced to what the metrics need."""

    hand: str
    passed: bool
    joints: np.ndarray
    max_penetration_m: float

    def __post_init__(self):
        if self.hand not in ROSTER_NAMES:
            raise ValueError(f"unknown hand {self.hand!r} (roster: {list(ROSTER_NAMES)})")
        joints = np.asarray(self.joints, dtype=np.float64)
        if joints.shape != (JOINT_SLOTS,):
            raise ValueError(f"joints must have shape ({JOINT_SLOTS},), got {joints.shape}")
        object.__setattr__(self, "joints", joints)
        if not self.max_penetration_m >= 0.0:
            raise ValueError("max_penetration_m must be nonnegative")


@dataclass(frozen=True)
class MetricRow:
    grasp_count: int
    passed_count: int
    success_rate: float
    diversity: float | None
    collision_mean_mm: float | None
    collision_max_mm: float | None

    def __post_init__(self):
        if not 0 <= self.passed_count <= self.grasp_count:
            raise ValueError("passed_count must lie in [0, grasp_count]")
        if not 0.0 <= self.success_rate <= 100.0:
            raise ValueError("success_rate must lie in [0, 100]")
        for name in ("diversity", "collision_mean_mm", "collision_max_mm"):
            value = getattr(self, name)
            if value is not None and not value >= 0.0:
                raise ValueError(f"{name} must be nonnegative when present")
        if (self.passed_count == 0) != (self.diversity is None):
            raise ValueError("diversity must be absent exactly when nothing passed")


@dataclass(frozen=True)
class EvalReport:
    rows: dict[str, MetricRow]
    mean: MetricRow | None
    included: tuple[str, ...]
    excluded: tuple[str, ...]
    schema: str = SCHEMA


def _valid_joint_dims(hand: str) -> np.ndarray:
    mask = make_padding_mask(load_roster_hand(hand)).mask
    return np.nonzero(mask[3:])[0]


def _hand_row(outcomes: Sequence[GraspOutcome], hand: str) -> MetricRow:
    total = len(outcomes)
    passing = [o for o in outcomes if o.passed]
    success = 100.0 * len(passing) / total
    if not passing:
        return MetricRow(total, 0, success, None, None, None)
    joints = np.stack([o.joints for o in passing])
    dims = _valid_joint_dims(hand)
    diversity = float(np.mean(np.std(joints[:, dims], axis=0, ddof=0)))
    pens_mm = np.array([o.max_penetration_m for o in passing]) * 1000.0
    return MetricRow(
        grasp_count=total,
        passed_count=len(passing),
        success_rate=success,
        diversity=diversity,
        collision_mean_mm=float(np.mean(pens_mm)),
        collision_max_mm=float(np.max(pens_mm)),
    )


def _mean_of(values: list[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return float(np.mean(present))


def compute_metrics(
    outcomes: Sequence[GraspOutcome],
    excluded_hands: Sequence[str] = ("robotiq3f",),
) -> EvalReport:
    """Group outcomes by hand and aggregate into an EvalReport.

    The mean row averages each metric over the included hands that report
    it, unweighted by grasp counts; its count columns are totals.
    """
    if not outcomes:
        raise ValueError("compute_metrics needs at least one outcome")
    for hand in excluded_hands:
        if hand not in ROSTER_NAMES:
            raise ValueError(f"unknown excluded hand {hand!r}")
    by_hand: dict[str, list[GraspOutcome]] = {}
    for outcome in outcomes:
        by_hand.setdefault(outcome.hand, []).append(outcome)
    rows = {hand: _hand_row(by_hand[hand], hand) for hand in ROSTER_NAMES if hand in by_hand}
    included = tuple(h for h in rows if h not in set(excluded_hands))
    mean = None
    if included:
        picked = [rows[h] for h in included]
        mean = MetricRow(
            grasp_count=sum(r.grasp_count for r in picked),
            passed_count=sum(r.passed_count for r in picked),
            success_rate=float(np.mean([r.success_rate for r in picked])),
            diversity=_mean_of([r.diversity for r in picked]),
            collision_mean_mm=_mean_of([r.collision_mean_mm for r in picked]),
            collision_max_mm=_mean_of([r.collision_max_mm for r in picked]),
        )
        # the unweighted mean can pair passed grasps with a null diversity
        # only when every included hand is null, which MetricRow forbids
        if mean.passed_count > 0 and mean.diversity is None:
            raise AssertionError("mean row lost diversity despite passing grasps")
        if mean.passed_count == 0 and mean.diversity is not None:
            raise AssertionError("mean row invented diversity with no passing grasps")
    return EvalReport(rows=rows, mean=mean, included=included, excluded=tuple(excluded_hands))


def _row_to_doc(row: MetricRow) -> dict:
    return {
        "grasp_count": row.grasp_count,
        "passed_count": row.passed_count,
        "success_rate_pct": row.success_rate,
        "diversity_rad": row.diversity,
        "collision_mean_mm": row.collision_mean_mm,
        "collision_max_mm": row.collision_max_mm,
    }


def _row_from_doc(doc: dict) -> MetricRow:
    return MetricRow(
        grasp_count=int(doc["grasp_count"]),
        passed_count=int(doc["passed_count"]),
        success_rate=float(doc["success_rate_pct"]),
        diversity=None if doc["diversity_rad"] is None else float(doc["diversity_rad"]),
        collision_mean_mm=None if doc["collision_mean_mm"] is None else float(doc["collision_mean_mm"]),
        collision_max_mm=None if doc["collision_max_mm"] is None else float(doc["collision_max_mm"]),
    )


def report_to_doc(report: EvalReport) -> dict:
    return {
        "schema": report.schema,
        "hands": {hand: _row_to_doc(row) for hand, row in report.rows.items()},
        "mean": None if report.mean is None else _row_to_doc(report.mean),
        "included": list(report.included),
        "excluded": list(report.excluded),
    }


def report_from_doc(doc: dict) -> EvalReport:
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    return EvalReport(
        rows={hand: _row_from_doc(row) for hand, row in doc["hands"].items()},
        mean=None if doc["mean"] is None else _row_from_doc(doc["mean"]),
        included=tuple(doc["included"]),
        excluded=tuple(doc["excluded"]),
    )


def write_report(path: str | Path, report: EvalReport) -> None:
    Path(path).write_text(json.dumps(report_to_doc(report), indent=2, sort_keys=True) + "\n")


def read_report(path: str | Path) -> EvalReport:
    return report_from_doc(json.loads(Path(path).read_text()))


def render_table(report: EvalReport) -> str:
    """Fixed-width text table, one column per hand plus the mean."""
    names = list(report.rows) + (["mean"] if report.mean is not None else [])
    rows = list(report.rows.values()) + ([report.mean] if report.mean is not None else [])

    def fmt(value: float | None) -> str:
        return "-" if value is None else f"{value:.3f}"

    lines = []
    width = max(12, max(len(n) for n in names) + 2)
    header = "metric".ljust(22) + "".join(n.rjust(width) for n in names)
    lines.append(header)
    lines.append("-" * len(header))
    specs = [
        ("grasps", lambda r: str(r.grasp_count)),
        ("passed", lambda r: str(r.passed_count)),
        ("success (%)", lambda r: f"{r.success_rate:.2f}"),
        ("diversity (rad)", lambda r: fmt(r.diversity)),
        ("collision mean (mm)", lambda r: fmt(r.collision_mean_mm)),
        ("collision max (mm)", lambda r: fmt(r.collision_max_mm)),
    ]
    for label, pick in specs:
        lines.append(label.ljust(22) + "".join(pick(r).rjust(width) for r in rows))
    excluded = [h for h in report.excluded if h in report.rows]
    if excluded:
        lines.append(f"(mean excludes: {', '.join(excluded)})")
    return "\n".join(lines)
