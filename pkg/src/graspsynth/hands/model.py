"""Hand specs, poses, forward kinematics, and labeled surface sampling.

A pose is stored padded: 3 translation entries plus 24 joint slots, with
slots at or beyond the hand's dof pinned to exactly 0. Orientation is not
part of the pose; grasp records carry a separate object rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import PointCloud, Rotation3, TriangleMesh, sample_surface_points

JOINT_SLOTS = 24
POSE_DIM = 3 + JOINT_SLOTS

_JOINT_TYPES = ("revolute", "prismatic")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RigidTransform:
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", _frozen(self.rotation).reshape(3, 3))
        object.__setattr__(self, "translation", _frozen(self.translation).reshape(3))

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points) @ self.rotation.T + self.translation

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )


@dataclass(frozen=True)
class Link:
    name: str
    mesh: TriangleMesh
    finger_label: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("link name must be non-empty")
        if not 0 <= int(self.finger_label) <= 8:
            raise ValueError(f"finger_label must be in 0..8, got {self.finger_label}")
        object.__setattr__(self, "finger_label", int(self.finger_label))


@dataclass(frozen=True)
class JointSpec:
    """One actuated connection in the kinematic tree.

    The axis is expressed in the parent link's frame and the joint motion is
    applied at the parent frame origin; the child frame then hangs off the
    moved frame by ``origin``. A revolute joint therefore pivots the child
    offset itself: offset (1,0,0) spun +90 degrees about z lands at (0,1,0).
    """

    name: str
    parent_link: int
    child_link: int
    axis: np.ndarray
    origin: RigidTransform
    type: str
    lower: float
    upper: float

    def __post_init__(self):
        if self.type not in _JOINT_TYPES:
            raise ValueError(f"joint type must be one of {_JOINT_TYPES}")
        axis = _frozen(self.axis).reshape(3)
        if abs(np.linalg.norm(axis) - 1.0) > 1e-9:
            raise ValueError(f"joint axis must be unit length: {axis}")
        object.__setattr__(self, "axis", axis)
        if not self.lower < self.upper:
            raise ValueError(f"joint limits need lower < upper, got [{self.lower}, {self.upper}]")
        if self.type == "prismatic" and self.lower < 0:
            raise ValueError("prismatic joints require non-negative extension")
        Rotation3(self.origin.rotation)  # orthonormal, right-handed


@dataclass(frozen=True)
class HandSpec:
    name: str
    class_id: int
    links: list[Link] = field(default_factory=list)
    joints: list[JointSpec] = field(default_factory=list)
    palm_link: int = 0

    def __post_init__(self):
        if not self.name:
            raise ValueError("hand name must be non-empty")
        if not 0 <= self.class_id <= 4:
            raise ValueError(f"class_id must be in 0..4, got {self.class_id}")
        if not self.links:
            raise ValueError("a hand needs at least one link")
        if not 1 <= len(self.joints) <= JOINT_SLOTS:
            raise ValueError(f"dof must be in 1..{JOINT_SLOTS}, got {len(self.joints)}")
        n = len(self.links)
        if not 0 <= self.palm_link < n:
            raise ValueError("palm_link out of range")
        if self.links[self.palm_link].finger_label != 0:
            raise ValueError("palm link must carry finger_label 0")
        parent_of: dict[int, int] = {}
        for j in self.joints:
            for idx in (j.parent_link, j.child_link):
                if not 0 <= idx < n:
                    raise ValueError(f"joint {j.name}: link index {idx} out of range")
            if j.child_link == self.palm_link:
                raise ValueError("palm cannot be a joint's child")
            if j.child_link in parent_of:
                raise ValueError(f"link {j.child_link} is child of two joints")
            parent_of[j.child_link] = j.parent_link
        if len(parent_of) != n - 1:
            raise ValueError("every non-palm link needs exactly one parent joint")
        # reachability from the palm guarantees a single acyclic tree
        children: dict[int, list[int]] = {}
        for child, parent in parent_of.items():
            children.setdefault(parent, []).append(child)
        seen = {self.palm_link}
        queue = [self.palm_link]
        while queue:
            for c in children.get(queue.pop(), []):
                if c in seen:
                    raise ValueError("kinematic tree has a cycle")
                seen.add(c)
                queue.append(c)
        if len(seen) != n:
            raise ValueError("kinematic tree is disconnected")

    @property
    def dof(self) -> int:
        return len(self.joints)

    def topological_joints(self) -> list[int]:
        """Joint indices ordered so parents are placed before children."""
        placed = {self.palm_link}
        order: list[int] = []
        pending = set(range(len(self.joints)))
        while pending:
            ready = [i for i in pending if self.joints[i].parent_link in placed]
            for i in sorted(ready):
                placed.add(self.joints[i].child_link)
                order.append(i)
            pending -= set(ready)
        return order


@dataclass(frozen=True)
class HandPose:
    translation: np.ndarray
    joints: np.ndarray

    def __post_init__(self):
        t = _frozen(self.translation).reshape(3)
        q = _frozen(self.joints).reshape(JOINT_SLOTS)
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(q))):
            raise ValueError("pose entries must be finite")
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "joints", q)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "HandPose":
        v = np.asarray(vec, dtype=np.float64).reshape(-1)
        if v.shape != (POSE_DIM,):
            raise ValueError(f"pose vector must have length {POSE_DIM}, got {v.shape}")
        return cls(v[:3], v[3:])

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.translation, self.joints])


@dataclass(frozen=True)
class PaddingMask:
    mask: np.ndarray

    def __post_init__(self):
        m = _frozen(self.mask).reshape(POSE_DIM)
        if not np.all((m == 0.0) | (m == 1.0)):
            raise ValueError("mask entries must be 0 or 1")
        if not np.all(m[:3] == 1.0):
            raise ValueError("translation entries must be unmasked")
        object.__setattr__(self, "mask", m)


def make_padding_mask(spec: HandSpec) -> PaddingMask:
    m = np.zeros(POSE_DIM)
    m[: 3 + spec.dof] = 1.0
    return PaddingMask(m)


def check_padding(spec: HandSpec, pose: HandPose) -> None:
    """Raise unless every joint slot at or beyond the hand's dof is exactly 0."""
    tail = pose.joints[spec.dof :]
    if tail.size and np.any(tail != 0.0):
        raise ValueError(f"{spec.name}: padded joint slots must be exactly 0")


def zero_pose(spec: HandSpec, translation=(0.0, 0.0, 0.0)) -> HandPose:
    return HandPose(np.asarray(translation, dtype=np.float64), np.zeros(JOINT_SLOTS))


def uniform_random_pose(spec: HandSpec, seed: int, translation=(0.0, 0.0, 0.0)) -> HandPose:
    """Joints drawn uniformly inside their limits, padded slots zero."""
    rng = np.random.default_rng(seed)
    q = np.zeros(JOINT_SLOTS)
    for j, joint in enumerate(spec.joints):
        q[j] = rng.uniform(joint.lower, joint.upper)
    return HandPose(np.asarray(translation, dtype=np.float64), q)


def _axis_angle(axis: np.ndarray, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    k = np.array(
        [[0.0, -axis[2], axis[1]], [axis[2], 0.0, -axis[0]], [-axis[1], axis[0], 0.0]]
    )
    return np.eye(3) * c + s * k + (1.0 - c) * np.outer(axis, axis)


def forward_kinematics(spec: HandSpec, pose: HandPose) -> list[RigidTransform]:
    """Per-link world transforms, palm at pose.translation with identity rotation.

    The hand is posed in the grasp's canonical frame; any object rotation is
    applied outside this function.
    """
    check_padding(spec, pose)
    transforms: list[RigidTransform | None] = [None] * len(spec.links)
    transforms[spec.palm_link] = RigidTransform(np.eye(3), pose.translation)
    for ji in spec.topological_joints():
        joint = spec.joints[ji]
        q = float(pose.joints[ji])
        if joint.type == "revolute":
            motion = RigidTransform(_axis_angle(joint.axis, q), np.zeros(3))
        else:
            motion = RigidTransform(np.eye(3), joint.axis * q)
        parent = transforms[joint.parent_link]
        assert parent is not None
        transforms[joint.child_link] = parent.compose(motion).compose(joint.origin)
    return transforms  # type: ignore[return-value]


def sample_hand_cloud(spec: HandSpec, pose: HandPose, count: int, seed: int) -> PointCloud:
    """Area-weighted samples over all posed links, labeled by finger.

    Per-link counts are apportioned by largest remainder so the total is
    exact; each link draws from its own child seed for determinism.
    """
    if count < len(spec.links):
        raise ValueError(f"count must be >= number of links ({len(spec.links)})")
    transforms = forward_kinematics(spec, pose)
    areas = np.array([link.mesh.triangle_areas.sum() for link in spec.links])
    quota = count * areas / areas.sum()
    counts = np.floor(quota).astype(int)
    short = count - counts.sum()
    if short > 0:
        order = np.argsort(-(quota - counts), kind="stable")
        counts[order[:short]] += 1
    child_seeds = np.random.default_rng(seed).integers(0, 2**31, size=len(spec.links))
    pts, nrm, lab = [], [], []
    for link, tf, n, s in zip(spec.links, transforms, counts, child_seeds):
        if n == 0:
            continue
        local = sample_surface_points(link.mesh, int(n), int(s))
        pts.append(tf.apply(local.points))
        nrm.append(local.normals @ tf.rotation.T)
        lab.append(np.full(int(n), link.finger_label, dtype=np.int64))
    return PointCloud(
        points=np.concatenate(pts),
        normals=np.concatenate(nrm),
        labels=np.concatenate(lab),
    )


def clamp_to_limits(spec: HandSpec, pose: HandPose) -> HandPose:
    """Clip valid joints into their limits and force padded slots to 0."""
    q = np.zeros(JOINT_SLOTS)
    for j, joint in enumerate(spec.joints):
        q[j] = min(max(float(pose.joints[j]), joint.lower), joint.upper)
    return HandPose(pose.translation.copy(), q)
