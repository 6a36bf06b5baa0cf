"""Binary array container used for clouds, features, embeddings and checkpoints.

Layout (all little-endian):
    bytes 0..7   magic ``DGDARR01``
    u32          rank
    u32 * rank   dims
    f32 * prod   data, row-major
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"DGDARR01"


def write_array(path: str | Path, array: np.ndarray) -> None:
    """Write ``array`` as a DGD1 file. Data is stored as float32."""
    arr = np.ascontiguousarray(array, dtype=np.float32)
    if arr.ndim < 1:
        arr = arr.reshape(1)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        fh.write(arr.tobytes(order="C"))


def read_array(path: str | Path) -> np.ndarray:
    """Read a DGD1 file. Returns a float32 array of the stored shape."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        (rank,) = struct.unpack("<I", fh.read(4))
        if rank == 0 or rank > 8:
            raise ValueError(f"{path}: unsupported rank {rank}")
        dims = struct.unpack(f"<{rank}I", fh.read(4 * rank))
        count = int(np.prod(dims))
        raw = fh.read(4 * count)
        if len(raw) != 4 * count:
            raise ValueError(f"{path}: truncated data ({len(raw)} bytes, wanted {4 * count})")
        data = np.frombuffer(raw, dtype="<f4").reshape(dims)
    return data.astype(np.float32)
