"""Training loop: batch assembly, masked L1 objective, Adam updates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import PointCloud, farthest_point_sample
from ..hands import (
    HandPose,
    HandSpec,
    PaddingMask,
    canonicalize_cloud,
    canonicalize_translation,
    clamp_to_limits,
    make_padding_mask,
    sample_hand_cloud,
)
from . import autodiff as ad
from .autodiff import Tensor
from .dataset import GraspRecord
from .model import (
    DenoiserParams,
    build_conditioning,
    denormalize_pose_vector,
    masked_l1_loss,
    normalize_pose_vector,
    predict_noise,
)
from .schedule import NoiseSchedule, forward_noise


@dataclass(frozen=True)
class TrainingExample:
    """One grasp prepared for the network: everything in the canonical frame."""

    pose_vector: np.ndarray  # 27, unnormalized, canonical frame
    mask: PaddingMask
    hand_class: int
    spec: HandSpec
    object_cloud: PointCloud  # canonical frame, exactly config.object_points


def make_training_example(
    record: GraspRecord,
    object_cloud: PointCloud,
    spec: HandSpec,
    params: DenoiserParams,
    seed: int = 0,
) -> TrainingExample:
    """Counter-rotate the object cloud and translation into the canonical frame."""
    if spec.class_id != record.hand_class:
        raise ValueError("record and spec disagree on hand class")
    canon = canonicalize_cloud(object_cloud, record.rotation)
    n = params.config.object_points
    if len(canon) > n:
        canon = farthest_point_sample(canon, n, seed=seed)
    elif len(canon) < n:
        raise ValueError(f"object cloud has {len(canon)} points, need at least {n}")
    t_c = canonicalize_translation(record.pose.translation, record.rotation)
    vec = np.concatenate([t_c, record.pose.joints])
    return TrainingExample(
        pose_vector=vec,
        mask=make_padding_mask(spec),
        hand_class=record.hand_class,
        spec=spec,
        object_cloud=canon,
    )


@dataclass
class AdamState:
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)


def _adam_update(params: DenoiserParams, state: AdamState) -> None:
    state.step += 1
    b1c = 1.0 - state.beta1**state.step
    b2c = 1.0 - state.beta2**state.step
    for name, tensor in params.tensors.items():
        g = tensor.grad if tensor.grad is not None else np.zeros_like(tensor.data)
        m = state.m.setdefault(name, np.zeros_like(tensor.data))
        v = state.v.setdefault(name, np.zeros_like(tensor.data))
        m += (1.0 - state.beta1) * (g - m)
        v += (1.0 - state.beta2) * (g * g - v)
        tensor.data -= state.lr * (m / b1c) / (np.sqrt(v / b2c) + state.eps)


def train_step(
    params: DenoiserParams,
    batch: list[TrainingExample],
    opt: AdamState,
    rng: np.random.Generator,
    schedule: NoiseSchedule,
    normalize_loss: bool = True,
) -> tuple[DenoiserParams, float]:
    """One optimizer step on a batch; returns (params, batch loss).

    Per example: a uniform step t, fresh Gaussian noise, closed-form noising
    of the normalized pose, and a hand cloud sampled from the noisy pose's
    kinematics. Losses are averaged over the batch.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    ad.zero_grads(params.trainable())
    losses = []
    for ex in batch:
        t = int(rng.integers(1, schedule.steps + 1))
        noise = rng.standard_normal(len(ex.mask.mask))
        h0n = normalize_pose_vector(ex.pose_vector)
        x_t = forward_noise(schedule, h0n, t, noise) * ex.mask.mask
        pose_t = clamp_to_limits(ex.spec, HandPose.from_vector(denormalize_pose_vector(x_t)))
        hand_cloud = sample_hand_cloud(
            ex.spec, pose_t, params.config.hand_points, seed=int(rng.integers(0, 2**31))
        )
        cond = build_conditioning(
            params, t, ex.mask, ex.hand_class, ex.object_cloud, hand_cloud
        )
        scale = float(np.sqrt(1.0 - schedule.alpha_bar(t)))
        eps_hat = predict_noise(params, x_t, cond, noise_scale=scale)
        target = Tensor(noise.reshape(1, -1))
        losses.append(masked_l1_loss(ex.mask, eps_hat, target, normalize=normalize_loss))
    total = losses[0]
    for extra in losses[1:]:
        total = ad.add(total, extra)
    total = ad.scale(total, 1.0 / len(losses))
    if not np.isfinite(total.data):
        raise RuntimeError(
            f"non-finite loss at optimizer step {opt.step + 1} "
            f"(batch of {len(batch)}, schedule T={schedule.steps})"
        )
    ad.backward(total)
    _adam_update(params, opt)
    return params, total.item()


def run_training(
    params: DenoiserParams,
    examples: list[TrainingExample],
    schedule: NoiseSchedule,
    steps: int,
    seed: int,
    batch_size: int = 64,
    lr: float = 1e-4,
    normalize_loss: bool = True,
) -> list[float]:
    """Optimize in place for a fixed number of steps; returns the loss curve.

    Datasets larger than batch_size are subsampled without replacement each
    step; smaller ones are repeated cyclically so every batch still carries
    batch_size independent noise draws.
    """
    if not examples:
        raise ValueError("training needs at least one example")
    rng = np.random.default_rng(seed)
    opt = AdamState(lr=lr)
    if len(examples) < batch_size:
        reps = -(-batch_size // len(examples))
        fixed_batch = (examples * reps)[:batch_size]
    else:
        fixed_batch = None
    losses = []
    for _ in range(steps):
        if fixed_batch is not None:
            batch = fixed_batch
        elif len(examples) == batch_size:
            batch = examples
        else:
            idx = rng.choice(len(examples), size=batch_size, replace=False)
            batch = [examples[i] for i in idx]
        _, loss = train_step(params, batch, opt, rng, schedule, normalize_loss=normalize_loss)
        losses.append(loss)
    return losses
