"""Builders and loaders for the five-hand roster.

Every hand follows one claw layout: a palm box whose face sits at z=0 and
fingers attached on the face perimeter extending toward +z. Each finger
starts with a spread joint about its outward radial axis (the attach offset
is parallel to that axis, so the attach point is a true pivot), followed by
flexion joints about the finger's local +y; positive flexion curls inward.
Flex phalanges are capsules hung below their frame origin, so each frame
origin is the next knuckle and the last one is the fingertip.

Only the ShadowHand dof (24) and the roster size are fixed by the problem
statement; the other hands' dof values are stand-ins for the real mechanisms.
"""

from __future__ import annotations

import functools
from importlib import resources
from pathlib import Path

import numpy as np

from ..geometry import TriangleMesh, make_box, make_capsule, transform_mesh
from .model import HandSpec, JointSpec, Link, RigidTransform
from .spec_io import load_hand_spec

ROSTER_NAMES = ("ezgripper", "barrett", "robotiq3f", "allegro", "shadowhand")

_FLEX_LIMITS = (-0.15, 1.6)
_SPREAD_LIMITS = (-0.35, 0.35)


def _claw(name, class_id, palm_side, attach_radius, finger_radius, fingers):
    """fingers: list of (attach_angle, [(kind, segment_length), ...]).

    Every finger's first segment must be a spread; flex segments follow.
    """
    palm = Link("palm", make_box((palm_side, palm_side, 0.024), center=(0, 0, -0.012)), 0)
    links = [palm]
    joints: list[JointSpec] = []
    capsules: dict[tuple[str, float], TriangleMesh] = {}
    for fi, (phi, segments) in enumerate(fingers, start=1):
        if segments[0][0] != "spread":
            raise ValueError("finger chains must start with a spread joint")
        r_hat = np.array([np.cos(phi), np.sin(phi), 0.0])
        # finger frame columns: x inward, y tangential, z up (right-handed)
        frame = np.column_stack(
            [-r_hat, [np.sin(phi), -np.cos(phi), 0.0], [0.0, 0.0, 1.0]]
        )
        parent = 0
        for si, (kind, length) in enumerate(segments):
            key = (kind, length)
            if key not in capsules:
                cap = make_capsule(finger_radius, length)
                if kind != "spread":
                    cap = transform_mesh(cap, translation=(0.0, 0.0, -length))
                capsules[key] = cap
            links.append(Link(f"f{fi}_l{si}", capsules[key], fi))
            child = len(links) - 1
            if kind == "spread":
                # axis and attach offset are both radial, pivot stays put
                axis = r_hat
                limits = _SPREAD_LIMITS
                origin = RigidTransform(frame, attach_radius * r_hat)
            else:
                axis = np.array([0.0, 1.0, 0.0])
                limits = _FLEX_LIMITS
                origin = RigidTransform(np.eye(3), (0.0, 0.0, length))
            joints.append(
                JointSpec(
                    name=f"f{fi}_j{si}",
                    parent_link=parent,
                    child_link=child,
                    axis=axis,
                    origin=origin,
                    type="revolute",
                    lower=limits[0],
                    upper=limits[1],
                )
            )
            parent = child
    return HandSpec(name=name, class_id=class_id, links=links, joints=joints, palm_link=0)


def _ezgripper():
    f = [("spread", 0.012), ("flex", 0.05)]
    return _claw("ezgripper", 0, 0.05, 0.02, 0.008, [(0.0, f), (np.pi, f)])


def _barrett():
    long = [("spread", 0.015), ("flex", 0.055), ("flex", 0.04)]
    short = [("spread", 0.015), ("flex", 0.05)]
    return _claw(
        "barrett",
        1,
        0.06,
        0.025,
        0.009,
        [(np.pi / 3, long), (-np.pi / 3, long), (np.pi, short)],
    )


def _robotiq3f():
    long = [("spread", 0.014), ("flex", 0.045), ("flex", 0.035), ("flex", 0.025)]
    short = [("spread", 0.014), ("flex", 0.045), ("flex", 0.035)]
    return _claw(
        "robotiq3f",
        2,
        0.055,
        0.022,
        0.008,
        [(np.pi / 3, long), (-np.pi / 3, long), (np.pi, short)],
    )


def _allegro():
    f = [("spread", 0.014), ("flex", 0.054), ("flex", 0.038), ("flex", 0.028)]
    angles = [np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4]
    return _claw("allegro", 3, 0.055, 0.024, 0.0095, [(a, f) for a in angles])


def _shadowhand():
    finger = [("spread", 0.012), ("flex", 0.045), ("flex", 0.025), ("flex", 0.02), ("flex", 0.018)]
    thumb = [("spread", 0.014), ("flex", 0.038), ("flex", 0.03), ("flex", 0.025)]
    angles = [np.pi / 5, 3 * np.pi / 5, np.pi, 7 * np.pi / 5]
    return _claw(
        "shadowhand",
        4,
        0.06,
        0.024,
        0.007,
        [(a, finger) for a in angles] + [(9 * np.pi / 5, thumb)],
    )


_BUILDERS = {
    "ezgripper": _ezgripper,
    "barrett": _barrett,
    "robotiq3f": _robotiq3f,
    "allegro": _allegro,
    "shadowhand": _shadowhand,
}


def build_hand(name: str) -> HandSpec:
    """Construct a roster hand programmatically (the data files mirror these)."""
    if name not in _BUILDERS:
        raise ValueError(f"unknown hand {name!r}; roster: {', '.join(ROSTER_NAMES)}")
    return _BUILDERS[name]()


@functools.lru_cache(maxsize=None)
def load_roster_hand(name: str) -> HandSpec:
    """Load a roster hand from the packaged spec files (cached)."""
    if name not in ROSTER_NAMES:
        raise ValueError(f"unknown hand {name!r}; roster: {', '.join(ROSTER_NAMES)}")
    root = resources.files("graspsynth") / "data" / "hands"
    with resources.as_file(root / f"{name}.json") as p:
        return load_hand_spec(Path(p))


def hand_for_class(class_id: int) -> HandSpec:
    """Roster hand by class id (class ids follow ROSTER_NAMES order)."""
    if not 0 <= class_id < len(ROSTER_NAMES):
        raise ValueError(f"class_id must be in 0..{len(ROSTER_NAMES) - 1}")
    return load_roster_hand(ROSTER_NAMES[class_id])
