"""Writer for the SSEB embedding interchange format.

Layout (all little-endian): magic "SSEB", u16 format version (1), u16
embedding dim, u32 record count, then per record u32 frame, u32 detection
index, dim x 32-bit IEEE-754 floats."""

from __future__ import annotations

import struct
from typing import Mapping

import numpy as np

MAGIC = b"SSEB"
VERSION = 1


def write_sseb(features: Mapping[tuple[int, int], np.ndarray], dim: int) -> bytes:
    out = bytearray()
    out += MAGIC
    out += struct.pack("<HHI", VERSION, dim, len(features))
    for frame, idx in sorted(features):
        vec = np.asarray(features[(frame, idx)], dtype=np.float32)
        if vec.shape != (dim,):
            raise ValueError(f"feature for ({frame},{idx}) has shape {vec.shape}, expected ({dim},)")
        out += struct.pack("<II", frame, idx)
        out += vec.astype("<f4").tobytes()
    return bytes(out)
