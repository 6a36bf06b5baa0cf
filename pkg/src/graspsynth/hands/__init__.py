"""Kinematic hand models: specs, forward kinematics, labeled cloud sampling."""

from .frames import (
    canonicalize_cloud,
    canonicalize_mesh,
    canonicalize_translation,
    decanonicalize_cloud,
    decanonicalize_translation,
)
from .model import (
    JOINT_SLOTS,
    POSE_DIM,
    HandPose,
    HandSpec,
    JointSpec,
    Link,
    PaddingMask,
    RigidTransform,
    check_padding,
    clamp_to_limits,
    forward_kinematics,
    make_padding_mask,
    sample_hand_cloud,
    uniform_random_pose,
    zero_pose,
)
from .roster import ROSTER_NAMES, build_hand, load_roster_hand
from .spec_io import load_hand_spec, save_hand_spec

__all__ = [
    "JOINT_SLOTS",
    "POSE_DIM",
    "HandPose",
    "HandSpec",
    "JointSpec",
    "Link",
    "PaddingMask",
    "ROSTER_NAMES",
    "RigidTransform",
    "build_hand",
    "canonicalize_cloud",
    "canonicalize_mesh",
    "canonicalize_translation",
    "check_padding",
    "clamp_to_limits",
    "decanonicalize_cloud",
    "decanonicalize_translation",
    "forward_kinematics",
    "load_hand_spec",
    "load_roster_hand",
    "make_padding_mask",
    "sample_hand_cloud",
    "save_hand_spec",
    "uniform_random_pose",
    "zero_pose",
]
