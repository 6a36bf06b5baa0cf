"""Affordance label embeddings and their on-disk JSON format.

A label set pairs n text strings with n fixed embedding vectors and a
softmax temperature. Embeddings come from files, never from a text encoder;
any label with a vector participates, so the vocabulary is open.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..arrays import read_array, write_array

DEFAULT_TEMPERATURE = 0.07


@dataclass(frozen=True)
class LabelEmbeddingSet:
    labels: tuple[str, ...]
    embeddings: np.ndarray  # (n, D)
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self):
        labels = tuple(str(t) for t in self.labels)
        if not labels:
            raise ValueError("at least one label is required")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels are not allowed")
        emb = np.asarray(self.embeddings, dtype=np.float64)
        if emb.ndim != 2 or emb.shape[0] != len(labels):
            raise ValueError(f"embeddings must be ({len(labels)}, D), got {emb.shape}")
        if not np.all(np.isfinite(emb)):
            raise ValueError("embeddings must be finite")
        if np.any(np.linalg.norm(emb, axis=1) == 0.0):
            raise ValueError("zero-norm embedding")
        emb.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "embeddings", emb)
        if not self.temperature > 0.0:
            raise ValueError("temperature must be positive")

    def __len__(self) -> int:
        return len(self.labels)

    def index_of(self, text: str) -> int:
        try:
            return self.labels.index(text)
        except ValueError:
            known = ", ".join(self.labels)
            raise ValueError(f"unknown affordance label {text!r} (have: {known})") from None


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_") or "label"


def save_label_embeddings(path: str | Path, labels: LabelEmbeddingSet) -> None:
    """JSON manifest next to one DGD1 vector file per label."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, text in enumerate(labels.labels):
        fname = f"{i:02d}_{_slug(text)}.dgd1"
        write_array(path.parent / fname, labels.embeddings[i])
        entries.append({"text": text, "dgd1_path": fname})
    doc = {"temperature": labels.temperature, "labels": entries}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_label_embeddings(path: str | Path) -> LabelEmbeddingSet:
    """Read the JSON manifest; dgd1_path entries resolve relative to it."""
    path = Path(path)
    doc = json.loads(path.read_text())
    if "labels" not in doc or not isinstance(doc["labels"], list):
        raise ValueError(f"{path}: missing labels list")
    texts = []
    vectors = []
    for entry in doc["labels"]:
        texts.append(entry["text"])
        vec_path = Path(entry["dgd1_path"])
        if not vec_path.is_absolute():
            vec_path = path.parent / vec_path
        vec = read_array(vec_path).astype(np.float64).reshape(-1)
        vectors.append(vec)
    dims = {v.shape[0] for v in vectors}
    if len(dims) > 1:
        raise ValueError(f"{path}: embedding dimensions disagree: {sorted(dims)}")
    return LabelEmbeddingSet(
        labels=tuple(texts),
        embeddings=np.array(vectors),
        temperature=float(doc.get("temperature", DEFAULT_TEMPERATURE)),
    )
