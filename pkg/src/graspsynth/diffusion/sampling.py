"""Ancestral reverse sampling of grasp poses."""

from __future__ import annotations

import numpy as np

from ..geometry import PointCloud, Rotation3, farthest_point_sample
from ..hands import (
    HandPose,
    HandSpec,
    canonicalize_cloud,
    clamp_to_limits,
    decanonicalize_translation,
    make_padding_mask,
    sample_hand_cloud,
)
from .autodiff import no_grad
from .dataset import GraspRecord
from .model import (
    DenoiserParams,
    build_conditioning,
    denormalize_pose_vector,
    predict_noise,
)
from .schedule import NoiseSchedule


def reverse_sample(
    params: DenoiserParams,
    schedule: NoiseSchedule,
    spec: HandSpec,
    object_cloud: PointCloud,
    rotation: Rotation3,
    seed: int,
    object_id: str = "",
) -> GraspRecord:
    """Run the reverse chain and return an object-frame grasp record.

    The object cloud is counter-rotated into the canonical frame before
    conditioning (downsampling to the configured size if needed). The chain
    runs in normalized pose space; after every step the padded slots are
    reset to 0 and the hand cloud is re-sampled from the updated kinematics.
    The final pose is clamped to joint limits and its translation rotated
    back into the object frame.
    """
    rng = np.random.default_rng(seed)
    mask = make_padding_mask(spec)
    canon = canonicalize_cloud(object_cloud, rotation)
    n_obj = params.config.object_points
    if len(canon) > n_obj:
        canon = farthest_point_sample(canon, n_obj, seed=int(rng.integers(0, 2**31)))
    elif len(canon) < n_obj:
        raise ValueError(f"object cloud has {len(canon)} points, need at least {n_obj}")

    x = rng.standard_normal(len(mask.mask)) * mask.mask
    with no_grad():
        for t in range(schedule.steps, 0, -1):
            pose_t = clamp_to_limits(spec, HandPose.from_vector(denormalize_pose_vector(x)))
            hand_cloud = sample_hand_cloud(
                spec, pose_t, params.config.hand_points, seed=int(rng.integers(0, 2**31))
            )
            cond = build_conditioning(params, t, mask, spec.class_id, canon, hand_cloud)
            scale = float(np.sqrt(1.0 - schedule.alpha_bar(t)))
            eps_hat = predict_noise(params, x, cond, noise_scale=scale).data.reshape(-1)
            beta = schedule.beta(t)
            x = (x - beta / scale * eps_hat) / np.sqrt(schedule.alpha(t))
            if t > 1:
                x = x + np.sqrt(beta) * rng.standard_normal(len(mask.mask))
            x = x * mask.mask
            if not np.all(np.isfinite(x)):
                raise RuntimeError(f"non-finite sample state at step {t}")

    final = clamp_to_limits(spec, HandPose.from_vector(denormalize_pose_vector(x)))
    pose = HandPose(decanonicalize_translation(final.translation, rotation), final.joints)
    return GraspRecord(
        hand_class=spec.class_id, pose=pose, rotation=rotation, object_id=object_id
    )
