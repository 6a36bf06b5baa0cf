"""The conditional denoiser: embeddings, encoders, fusion, noise prediction.

Conditioning enters in two stages. Global signals (time, padding mask, hand
class, object and hand global features) are early-fused by summation into the
lifted pose feature; per-point object and hand features are then attended
over with scaled-dot-product cross-attention, pose feature as the query.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import PointCloud
from ..hands import POSE_DIM, PaddingMask
from . import autodiff as ad
from .autodiff import Tensor
from .nn import init_linear, linear

NUM_CLASSES = 5


@dataclass(frozen=True)
class DenoiserConfig:
    width: int = 128
    attn_heads: int = 1
    fusion_layers: int = 4
    object_points: int = 1024
    hand_points: int = 512

    def __post_init__(self):
        if self.width < 2 or self.width % 2 != 0:
            raise ValueError("width must be an even integer >= 2")
        if self.attn_heads < 1 or self.width % self.attn_heads != 0:
            raise ValueError("width must divide evenly across attention heads")
        if self.fusion_layers < 1:
            raise ValueError("fusion_layers must be >= 1")
        if self.object_points < 1 or self.hand_points < 1:
            raise ValueError("cloud sizes must be positive")


@dataclass
class DenoiserParams:
    config: DenoiserConfig
    tensors: dict[str, Tensor] = field(default_factory=dict)

    @property
    def parameter_count(self) -> int:
        return sum(t.data.size for t in self.tensors.values())

    def trainable(self) -> list[Tensor]:
        return list(self.tensors.values())

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]


def _layer_plan(config: DenoiserConfig) -> list[tuple[str, int, int, bool]]:
    """(name, fan_in, fan_out, zero_init) in construction order."""
    w = config.width
    plan = [
        ("time_fc1", w, w, False),
        ("time_fc2", w, w, False),
        ("obj_enc_fc1", 3, w, False),
        ("obj_enc_fc2", w, w, False),
        ("obj_enc_fc3", w, w, False),
        ("hand_enc_fc1", 4, w, False),
        ("hand_enc_fc2", w, w, False),
        ("hand_enc_fc3", w, w, False),
        ("mask_fc", POSE_DIM, w, False),
        ("class_fc", w, w, False),
        ("lift", POSE_DIM, w, False),
        ("obj_global_fc", w, w, False),
        ("hand_global_fc", w, w, False),
    ]
    for side in ("obj", "hand"):
        for part in ("q", "k", "v", "out"):
            plan.append((f"attn_{side}_{part}", w, w, False))
    for i in range(1, config.fusion_layers + 1):
        plan.append((f"fused_fc{i}", w, w, False))
    plan.append(("head", w, POSE_DIM, True))
    return plan


def init_denoiser(config: DenoiserConfig, seed: int) -> DenoiserParams:
    """Weights N(0, 1/sqrt(fan_in)), zero biases, zero output head.

    Parameters are drawn in a fixed construction order so a seed pins every
    weight.
    """
    rng = np.random.default_rng(seed)
    tensors: dict[str, Tensor] = {}
    tensors["class_table"] = Tensor(
        rng.normal(0.0, 1.0, size=(NUM_CLASSES, config.width)), requires_grad=True
    )
    for name, fan_in, fan_out, zero in _layer_plan(config):
        init_linear(tensors, rng, name, fan_in, fan_out, zero=zero)
    return DenoiserParams(config=config, tensors=tensors)


# ---------------------------------------------------------------------------
# embeddings


def _sinusoidal_features(t: int, width: int) -> np.ndarray:
    half = width // 2
    freqs = np.exp(-np.log(10000.0) * np.arange(half) / max(half - 1, 1))
    angles = float(t) * freqs
    return np.concatenate([np.sin(angles), np.cos(angles)]).reshape(1, width)


def embed_time(params: DenoiserParams, t: int) -> Tensor:
    feats = Tensor(_sinusoidal_features(t, params.config.width))
    return linear(params.tensors, "time_fc2", ad.tanh(linear(params.tensors, "time_fc1", feats)))


def embed_class(params: DenoiserParams, hand_class: int) -> Tensor:
    if not 0 <= hand_class < NUM_CLASSES:
        raise ValueError(f"hand_class must be in 0..{NUM_CLASSES - 1}")
    row = ad.narrow(params.tensors["class_table"], 0, hand_class, 1)
    return linear(params.tensors, "class_fc", row)


def embed_mask(params: DenoiserParams, mask: PaddingMask) -> Tensor:
    return linear(params.tensors, "mask_fc", Tensor(mask.mask.reshape(1, POSE_DIM)))


# ---------------------------------------------------------------------------
# point cloud encoders


def _encode(params: DenoiserParams, prefix: str, x: Tensor) -> tuple[Tensor, Tensor]:
    p = params.tensors
    h = ad.tanh(linear(p, f"{prefix}_fc1", x))
    h = ad.tanh(linear(p, f"{prefix}_fc2", h))
    per_point = linear(p, f"{prefix}_fc3", h)
    return ad.maxpool_rows(per_point), per_point


def encode_object_cloud(params: DenoiserParams, cloud: PointCloud) -> tuple[Tensor, Tensor]:
    """Per-point MLP then max-pool; returns (global (1,W), per-point (N,W))."""
    n = params.config.object_points
    if len(cloud) != n:
        raise ValueError(f"object cloud must have exactly {n} points, got {len(cloud)}")
    return _encode(params, "obj_enc", Tensor(cloud.points))


def encode_hand_cloud(params: DenoiserParams, cloud: PointCloud) -> tuple[Tensor, Tensor]:
    """Same as the object encoder with the finger label as a fourth channel.

    Labels are scaled to [0, 1] so the channel does not dwarf the metric
    coordinates and saturate the first tanh.
    """
    n = params.config.hand_points
    if len(cloud) != n:
        raise ValueError(f"hand cloud must have exactly {n} points, got {len(cloud)}")
    if cloud.labels is None:
        raise ValueError("hand cloud needs finger labels")
    scaled = cloud.labels[:, None].astype(np.float64) / 8.0
    x = np.concatenate([cloud.points, scaled], axis=1)
    return _encode(params, "hand_enc", Tensor(x))


# ---------------------------------------------------------------------------
# conditioning and prediction


@dataclass
class ConditioningBundle:
    time_embedding: Tensor
    mask_embedding: Tensor
    class_embedding: Tensor
    object_global: Tensor
    object_features: Tensor
    hand_global: Tensor
    hand_features: Tensor


def build_conditioning(
    params: DenoiserParams,
    t: int,
    mask: PaddingMask,
    hand_class: int,
    object_cloud: PointCloud,
    hand_cloud: PointCloud,
) -> ConditioningBundle:
    obj_g, obj_pp = encode_object_cloud(params, object_cloud)
    hand_g, hand_pp = encode_hand_cloud(params, hand_cloud)
    return ConditioningBundle(
        time_embedding=embed_time(params, t),
        mask_embedding=embed_mask(params, mask),
        class_embedding=embed_class(params, hand_class),
        object_global=obj_g,
        object_features=obj_pp,
        hand_global=hand_g,
        hand_features=hand_pp,
    )


def _attention(params: DenoiserParams, side: str, query: Tensor, points: Tensor) -> Tensor:
    p = params.tensors
    q = linear(p, f"attn_{side}_q", query)
    k = linear(p, f"attn_{side}_k", points)
    v = linear(p, f"attn_{side}_v", points)
    heads = params.config.attn_heads
    dh = params.config.width // heads
    outs = []
    for i in range(heads):
        qi = ad.narrow(q, 1, i * dh, dh)
        ki = ad.narrow(k, 1, i * dh, dh)
        vi = ad.narrow(v, 1, i * dh, dh)
        scores = ad.scale(ad.matmul(qi, ad.transpose(ki)), 1.0 / np.sqrt(dh))
        outs.append(ad.matmul(ad.softmax(scores), vi))
    merged = outs[0] if len(outs) == 1 else ad.concat(outs, axis=1)
    return linear(p, f"attn_{side}_out", merged)


def predict_noise(
    params: DenoiserParams,
    h_t: np.ndarray | Tensor,
    cond: ConditioningBundle,
    noise_scale: float = 1.0,
) -> Tensor:
    """Predicted noise (1, 27) for a normalized noisy pose vector.

    noise_scale is the sqrt(1 - alpha_bar_t) of the current step. The head
    output is divided by it, so the network fits the O(1) residual
    h_t - sqrt(alpha_bar_t)*h_0 instead of a prediction whose required
    magnitude blows up as t -> 1. With the default 1.0 the head output is
    the prediction itself.
    """
    if not 0.0 < noise_scale <= 1.0:
        raise ValueError("noise_scale must be in (0, 1]")
    if not isinstance(h_t, Tensor):
        arr = np.asarray(h_t, dtype=np.float64).reshape(1, POSE_DIM)
        if not np.all(np.isfinite(arr)):
            raise ValueError("h_t must be finite")
        h_t = Tensor(arr)
    p = params.tensors
    x = linear(p, "lift", h_t)
    x = ad.add(x, cond.time_embedding)
    x = ad.add(x, cond.mask_embedding)
    x = ad.add(x, cond.class_embedding)
    x = ad.add(x, linear(p, "obj_global_fc", cond.object_global))
    x = ad.add(x, linear(p, "hand_global_fc", cond.hand_global))
    x = ad.add(x, _attention(params, "obj", x, cond.object_features))
    x = ad.add(x, _attention(params, "hand", x, cond.hand_features))
    # residual fusion: keeps a linear path from the lifted pose to the head
    for i in range(1, params.config.fusion_layers + 1):
        x = ad.add(x, ad.tanh(linear(p, f"fused_fc{i}", x)))
    out = linear(p, "head", x)
    if noise_scale != 1.0:
        out = ad.scale(out, 1.0 / noise_scale)
    return out


# ---------------------------------------------------------------------------
# loss and pose-space scaling


def masked_l1_loss(mask: PaddingMask, eps_hat, eps, normalize: bool = True):
    """Masked absolute error between predicted and true noise.

    Padded dimensions contribute nothing. With normalize=True (default) the
    sum is divided by the number of valid dimensions so the scale is
    comparable across hands; normalize=False keeps the raw masked sum.
    Returns a graph Tensor when either input is one, else a float.
    """
    msum = float(mask.mask.sum())
    if msum == 0.0:
        raise ValueError("mask selects no dimensions")
    tensor_in = isinstance(eps_hat, Tensor) or isinstance(eps, Tensor)
    if not isinstance(eps_hat, Tensor):
        eps_hat = Tensor(np.asarray(eps_hat, dtype=np.float64).reshape(1, POSE_DIM))
    if not isinstance(eps, Tensor):
        eps = Tensor(np.asarray(eps, dtype=np.float64).reshape(1, POSE_DIM))
    m = Tensor(mask.mask.reshape(1, POSE_DIM))
    out = ad.total(ad.mul(ad.absolute(ad.sub(eps_hat, eps)), m))
    if normalize:
        out = ad.scale(out, 1.0 / msum)
    return out if tensor_in else out.item()


def normalize_pose_vector(vec: np.ndarray) -> np.ndarray:
    """Translation left in meters, joint entries scaled by 1/pi."""
    out = np.asarray(vec, dtype=np.float64).reshape(POSE_DIM).copy()
    out[3:] /= np.pi
    return out


def denormalize_pose_vector(vec: np.ndarray) -> np.ndarray:
    out = np.asarray(vec, dtype=np.float64).reshape(POSE_DIM).copy()
    out[3:] *= np.pi
    return out
