#!/usr/bin/env python3
"""Build demo label embeddings for a dataset object.

Splits the object's cached surface cloud into an upper and a lower region
along z, encodes per-point features with the same encoder the pipeline
uses, and anchors one label embedding at each region's mean feature. The
resulting labels file plugs into paths.labels_file, making "top" and
"bottom" queryable affordances for that object.
"""

import argparse
from pathlib import Path

import numpy as np

from graspsynth.affordance import LabelEmbeddingSet, encode_point_features, save_label_embeddings
from graspsynth.diffusion import load_dataset

DEFAULT_TEMPERATURE = 0.07


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dataset", type=Path, required=True, help="dataset directory")
    ap.add_argument("--object", required=True, help="object id to anchor the labels on")
    ap.add_argument("--out", type=Path, required=True, help="labels JSON path to write")
    ap.add_argument("--dim", type=int, default=32, help="feature dimension")
    ap.add_argument("--temperature", type=float, default=DEFAULT_TEMPERATURE)
    ap.add_argument("--labels", nargs=2, default=("top", "bottom"), metavar=("UPPER", "LOWER"))
    args = ap.parse_args()

    dataset = load_dataset(args.dataset)
    if args.object not in dataset.clouds:
        raise SystemExit(f"object {args.object!r} not in dataset (have: {sorted(dataset.clouds)})")
    cloud = dataset.clouds[args.object]
    field = encode_point_features(cloud, dim=args.dim, seed=0)

    split = np.median(cloud.points[:, 2])
    upper = cloud.points[:, 2] > split
    anchors = []
    for mask in (upper, ~upper):
        if not mask.any():
            raise SystemExit("degenerate z split; cannot anchor both labels")
        mean = field.features[mask].mean(axis=0)
        anchors.append(mean / np.linalg.norm(mean))

    labels = LabelEmbeddingSet(
        labels=tuple(args.labels),
        embeddings=np.stack(anchors),
        temperature=args.temperature,
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_label_embeddings(args.out, labels)
    print(
        f"wrote {args.out} ({args.labels[0]}: {int(upper.sum())} pts, "
        f"{args.labels[1]}: {int((~upper).sum())} pts anchor regions)"
    )


if __name__ == "__main__":
    main()
