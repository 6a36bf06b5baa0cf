#!/usr/bin/env python3
"""Regenerate the packaged hand roster files from the programmatic builders."""

import argparse
from pathlib import Path

from graspsynth.hands import ROSTER_NAMES, build_hand, save_hand_spec

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "src" / "graspsynth" / "data" / "hands"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in ROSTER_NAMES:
        spec = build_hand(name)
        save_hand_spec(args.out / f"{name}.json", spec)
        print(f"{name}: {spec.dof} dof, {len(spec.links)} links -> {args.out / (name + '.json')}")


if __name__ == "__main__":
    main()
