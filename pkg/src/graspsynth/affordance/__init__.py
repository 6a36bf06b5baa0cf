"""Affordance-guided functional grasp selection."""

from .features import (
    PointFeatureField,
    encode_point_features,
    load_feature_field,
    save_feature_field,
)
from .labels import (
    DEFAULT_TEMPERATURE,
    LabelEmbeddingSet,
    load_label_embeddings,
    save_label_embeddings,
)
from .scoring import (
    AffordanceSegmentation,
    affordance_softmax,
    correlation_matrix,
    extract_affordance_region,
    select_functional_grasp,
)

__all__ = [
    "AffordanceSegmentation",
    "DEFAULT_TEMPERATURE",
    "LabelEmbeddingSet",
    "PointFeatureField",
    "affordance_softmax",
    "correlation_matrix",
    "encode_point_features",
    "extract_affordance_region",
    "load_feature_field",
    "load_label_embeddings",
    "save_feature_field",
    "save_label_embeddings",
    "select_functional_grasp",
]
