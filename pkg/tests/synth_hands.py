"""Tiny synthetic hands with box pads, for contact and refinement tests.

Poses are chosen so pad faces sit at known gaps from simple objects,
making contact counts, normals and refinement goals analytically checkable.
"""

import numpy as np

from graspsynth.geometry import TriangleMesh, make_box
from graspsynth.hands import HandPose, HandSpec, JointSpec, Link, RigidTransform

PAD = 0.02  # pad side length; local faces at +-0.01


def _pad(name, label):
    return Link(name=name, mesh=make_box((PAD, PAD, PAD)), finger_label=label)


def _joint(name, parent, child, offset):
    return JointSpec(
        name=name,
        parent_link=parent,
        child_link=child,
        axis=np.array([0.0, 0.0, 1.0]),
        origin=RigidTransform(np.eye(3), np.asarray(offset, dtype=np.float64)),
        type="revolute",
        lower=-0.5,
        upper=0.5,
    )


def two_pad_hand(pad_gap: float) -> tuple[HandSpec, HandPose]:
    """Palm pad on +x, child pad on -x, straddling a box with faces at +-0.05.

    Both inner faces sit `pad_gap` meters off the object faces at the
    returned pose (joint angle 0).
    """
    palm_x = 0.05 + pad_gap + PAD / 2.0
    spec = HandSpec(
        name="twopad",
        class_id=0,
        links=[_pad("palm", 0), _pad("finger", 1)],
        joints=[_joint("j0", 0, 1, (-2.0 * palm_x, 0.0, 0.0))],
        palm_link=0,
    )
    pose = HandPose(np.array([palm_x, 0.0, 0.0]), np.zeros(24))
    return spec, pose


def uneven_pad_hand(palm_gap: float, finger_gap: float) -> tuple[HandSpec, HandPose]:
    """Like two_pad_hand but the child pad floats at its own distance."""
    palm_x = 0.05 + palm_gap + PAD / 2.0
    finger_x = 0.05 + finger_gap + PAD / 2.0
    spec = HandSpec(
        name="unevenpad",
        class_id=0,
        links=[_pad("palm", 0), _pad("finger", 1)],
        joints=[_joint("j0", 0, 1, (-(palm_x + finger_x), 0.0, 0.0))],
        palm_link=0,
    )
    pose = HandPose(np.array([palm_x, 0.0, 0.0]), np.zeros(24))
    return spec, pose


def four_pad_hand(radius: float, pad_gap: float) -> tuple[HandSpec, HandPose]:
    """Four pads boxed around a sphere of `radius` centered at the origin.

    The palm pad faces -x from the +x side; children sit at -x, +y, -y.
    Every inner face is `pad_gap` off the sphere's axis crossings.
    """
    d = radius + pad_gap + PAD / 2.0
    spec = HandSpec(
        name="fourpad",
        class_id=0,
        links=[_pad("palm", 0), _pad("f1", 1), _pad("f2", 2), _pad("f3", 3)],
        joints=[
            _joint("j0", 0, 1, (-2.0 * d, 0.0, 0.0)),
            _joint("j1", 0, 2, (-d, d, 0.0)),
            _joint("j2", 0, 3, (-d, -d, 0.0)),
        ],
        palm_link=0,
    )
    pose = HandPose(np.array([d, 0.0, 0.0]), np.zeros(24))
    return spec, pose


def slab_object() -> TriangleMesh:
    """Box with the +-x faces at exactly +-0.05, tall enough to dwarf pads."""
    return make_box((0.1, 0.2, 0.2))
