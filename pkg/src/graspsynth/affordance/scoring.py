"""Affordance scoring: cosine correlation, per-point softmax, region
extraction, and Chamfer-based functional grasp selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..geometry import PointCloud, chamfer_distance
from .features import PointFeatureField
from .labels import LabelEmbeddingSet


def correlation_matrix(field: PointFeatureField, labels: LabelEmbeddingSet) -> np.ndarray:
    """Cosine similarity of every point feature against every label embedding."""
    feats = field.features
    emb = labels.embeddings
    if feats.shape[1] != emb.shape[1]:
        raise ValueError(
            f"feature dimension {feats.shape[1]} does not match embeddings {emb.shape[1]}"
        )
    feat_norms = np.linalg.norm(feats, axis=1)
    emb_norms = np.linalg.norm(emb, axis=1)
    if np.any(feat_norms == 0.0) or np.any(emb_norms == 0.0):
        raise ValueError("zero-norm row")
    s = (feats / feat_norms[:, None]) @ (emb / emb_norms[:, None]).T
    return np.clip(s, -1.0, 1.0)


@dataclass(frozen=True)
class AffordanceSegmentation:
    probabilities: np.ndarray  # (z, n)
    argmax_label: np.ndarray  # (z,) ints

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        a = np.asarray(self.argmax_label, dtype=np.int64)
        if p.ndim != 2 or a.shape != (p.shape[0],):
            raise ValueError("probabilities must be (z, n) with one argmax per row")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if np.max(np.abs(p.sum(axis=1) - 1.0)) > 1e-6:
            raise ValueError("rows must sum to 1 within 1e-6")
        rows = np.arange(p.shape[0])
        if np.any(p[rows, a] < p.max(axis=1)):
            raise ValueError("argmax_label inconsistent with probabilities")
        p.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "argmax_label", a)


def affordance_softmax(s: np.ndarray, temperature: float) -> AffordanceSegmentation:
    """Row-wise softmax of the correlation matrix at the given temperature.

    The row maximum is subtracted before exponentiation so small
    temperatures stay finite.
    """
    if not temperature > 0.0:
        raise ValueError("temperature must be positive")
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2:
        raise ValueError(f"correlation matrix must be 2-d, got shape {s.shape}")
    scaled = s / temperature
    shifted = scaled - scaled.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    probabilities = e / e.sum(axis=1, keepdims=True)
    return AffordanceSegmentation(
        probabilities=probabilities, argmax_label=np.argmax(probabilities, axis=1)
    )


def extract_affordance_region(
    seg: AffordanceSegmentation, cloud: PointCloud, label_index: int
) -> PointCloud | None:
    """Points whose winning label is `label_index`; None when there are none."""
    n = seg.probabilities.shape[1]
    if not 0 <= label_index < n:
        raise ValueError(f"label_index must be in 0..{n - 1}, got {label_index}")
    if seg.probabilities.shape[0] != len(cloud):
        raise ValueError("segmentation and cloud disagree on point count")
    idx = np.nonzero(seg.argmax_label == label_index)[0]
    if idx.size == 0:
        return None
    return cloud.select(idx)


def select_functional_grasp(
    candidates: Sequence[tuple[object, PointCloud | None]], region: PointCloud
) -> tuple[int, float]:
    """Index and score of the candidate whose contact region sits closest
    to the affordance region by Chamfer distance.

    Candidates without a contact region are skipped; ties keep the lowest
    index.
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    best_index = -1
    best_score = np.inf
    for i, (_, contact_region) in enumerate(candidates):
        if contact_region is None or len(contact_region) == 0:
            continue
        score = chamfer_distance(contact_region, region)
        if score < best_score:
            best_index = i
            best_score = score
    if best_index < 0:
        raise ValueError("no contactful candidates")
    return best_index, float(best_score)
