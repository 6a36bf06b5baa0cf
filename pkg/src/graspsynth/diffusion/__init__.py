"""Conditional diffusion over padded hand poses."""

from .checkpoint import load_checkpoint, save_checkpoint
from .dataset import GraspDataset, GraspRecord, load_dataset, save_dataset
from .model import (
    NUM_CLASSES,
    ConditioningBundle,
    DenoiserConfig,
    DenoiserParams,
    build_conditioning,
    denormalize_pose_vector,
    embed_class,
    embed_mask,
    embed_time,
    encode_hand_cloud,
    encode_object_cloud,
    init_denoiser,
    masked_l1_loss,
    normalize_pose_vector,
    predict_noise,
)
from .sampling import reverse_sample
from .schedule import PRESET_STEPS, NoiseSchedule, forward_noise, linear_schedule
from .training import (
    AdamState,
    TrainingExample,
    make_training_example,
    run_training,
    train_step,
)

__all__ = [
    "AdamState",
    "ConditioningBundle",
    "DenoiserConfig",
    "DenoiserParams",
    "GraspDataset",
    "GraspRecord",
    "NUM_CLASSES",
    "NoiseSchedule",
    "PRESET_STEPS",
    "TrainingExample",
    "build_conditioning",
    "denormalize_pose_vector",
    "embed_class",
    "embed_mask",
    "embed_time",
    "encode_hand_cloud",
    "encode_object_cloud",
    "forward_noise",
    "init_denoiser",
    "linear_schedule",
    "load_checkpoint",
    "load_dataset",
    "make_training_example",
    "masked_l1_loss",
    "normalize_pose_vector",
    "predict_noise",
    "reverse_sample",
    "run_training",
    "save_checkpoint",
    "save_dataset",
    "train_step",
]
