"""Sequence file I/O: MOTChallenge-style CSV files and the binary SSEB embedding format."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

import numpy as np

from .geometry import BoundingBox
from .tracker import TrackRecord

SSEB_MAGIC = b"SSEB"
SSEB_VERSION = 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class SequenceMeta:
    name: str
    frame_count: int
    fps: float
    image_width: float
    image_height: float

    def __post_init__(self):
        if self.frame_count < 1:
            raise ValueError("frame_count must be >= 1")
        if self.fps <= 0 or self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("fps and image dimensions must be positive")


@dataclass(frozen=True)
class GtEntry:
    frame: int
    id: int
    box: BoundingBox
    visibility: float = 1.0


def _fmt(x: float) -> str:
    """Compact numeric formatting: integers without a trailing .0."""
    return f"{int(x)}" if float(x).is_integer() else repr(float(x))


def parse_detections(stream: IO[str] | Iterable[str]) -> dict[int, list[tuple[BoundingBox, float]]]:
    """Parse `frame,id,left,top,width,height,conf,...` rows into per-frame lists.

    Frames are returned sorted; within-frame input order is preserved (the
    detection index is the embedding alignment key)."""
    frames: dict[int, list[tuple[BoundingBox, float]]] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) < 7:
            raise ParseError(f"expected >= 7 fields, got {len(parts)}", lineno)
        try:
            frame = int(float(parts[0]))
            left, top, w, h = (float(p) for p in parts[2:6])
            conf = float(parts[6])
        except ValueError as e:
            raise ParseError(f"bad numeric field: {e}", lineno) from None
        if w < 0 or h < 0:
            raise ParseError(f"negative box size w={w}, h={h}", lineno)
        if frame < 1:
            raise ParseError(f"frame numbers start at 1, got {frame}", lineno)
        frames.setdefault(frame, []).append((BoundingBox.from_ltwh(left, top, w, h), conf))
    return dict(sorted(frames.items()))


def parse_gt(stream: IO[str] | Iterable[str]) -> list[GtEntry]:
    """Parse a ground-truth file. Rows with 9+ fields are filtered by the
    consider-flag (field 7) and class (field 8, pedestrians only); shorter rows
    are taken as-is."""
    entries: list[GtEntry] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) < 6:
            raise ParseError(f"expected >= 6 fields, got {len(parts)}", lineno)
        try:
            frame = int(float(parts[0]))
            tid = int(float(parts[1]))
            left, top, w, h = (float(p) for p in parts[2:6])
            flag = int(float(parts[6])) if len(parts) > 6 else 1
            cls = int(float(parts[7])) if len(parts) > 7 else 1
            vis = float(parts[8]) if len(parts) > 8 else 1.0
        except ValueError as e:
            raise ParseError(f"bad numeric field: {e}", lineno) from None
        if w < 0 or h < 0:
            raise ParseError(f"negative box size w={w}, h={h}", lineno)
        if flag != 1 or cls != 1:
            continue
        entries.append(GtEntry(frame=frame, id=tid, box=BoundingBox.from_ltwh(left, top, w, h), visibility=vis))
    entries.sort(key=lambda e: (e.frame, e.id))
    return entries


def write_gt(entries: Iterable[GtEntry]) -> str:
    lines = []
    for e in sorted(entries, key=lambda e: (e.frame, e.id)):
        left, top, w, h = e.box.to_ltwh()
        lines.append(
            f"{e.frame},{e.id},{_fmt(left)},{_fmt(top)},{_fmt(w)},{_fmt(h)},1,1,{_fmt(e.visibility)}"
        )
    return "".join(line + "\n" for line in lines)


def write_detections(frames: Mapping[int, list[tuple[BoundingBox, float]]]) -> str:
    lines = []
    for frame in sorted(frames):
        for box, conf in frames[frame]:
            left, top, w, h = box.to_ltwh()
            lines.append(
                f"{frame},-1,{_fmt(left)},{_fmt(top)},{_fmt(w)},{_fmt(h)},{_fmt(conf)},-1,-1,-1"
            )
    return "".join(line + "\n" for line in lines)


def write_tracks(records: Iterable[TrackRecord]) -> str:
    """MOT result rows `frame,id,left,top,width,height,1,-1,-1,-1`, sorted by (frame, id)."""
    lines = []
    for rec in sorted(records, key=lambda r: (r.frame, r.id)):
        left, top, w, h = rec.box.to_ltwh()
        lines.append(f"{rec.frame},{rec.id},{_fmt(left)},{_fmt(top)},{_fmt(w)},{_fmt(h)},1,-1,-1,-1")
    return "".join(line + "\n" for line in lines)


def parse_tracks(stream: IO[str] | Iterable[str]) -> list[TrackRecord]:
    records: list[TrackRecord] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) < 6:
            raise ParseError(f"expected >= 6 fields, got {len(parts)}", lineno)
        try:
            frame = int(float(parts[0]))
            tid = int(float(parts[1]))
            left, top, w, h = (float(p) for p in parts[2:6])
        except ValueError as e:
            raise ParseError(f"bad numeric field: {e}", lineno) from None
        if w < 0 or h < 0:
            raise ParseError(f"negative box size w={w}, h={h}", lineno)
        records.append(TrackRecord(frame=frame, id=tid, box=BoundingBox.from_ltwh(left, top, w, h)))
    records.sort(key=lambda r: (r.frame, r.id))
    return records


def write_embeddings(features: Mapping[tuple[int, int], np.ndarray], dim: int) -> bytes:
    """Serialize (frame, detection index) -> feature into the SSEB binary layout.

    Layout (little-endian): magic "SSEB", u16 version, u16 dim, u32 record
    count, then records of (u32 frame, u32 index, dim x f32)."""
    keys = sorted(features)
    out = bytearray()
    out += SSEB_MAGIC
    out += struct.pack("<HHI", SSEB_VERSION, dim, len(keys))
    for frame, idx in keys:
        vec = np.asarray(features[(frame, idx)], dtype=np.float32)
        if vec.shape != (dim,):
            raise ValueError(f"feature for ({frame},{idx}) has shape {vec.shape}, expected ({dim},)")
        out += struct.pack("<II", frame, idx)
        out += vec.astype("<f4").tobytes()
    return bytes(out)


def read_embeddings(data: bytes, expected_dim: int | None = None) -> dict[tuple[int, int], np.ndarray]:
    """Read an SSEB blob; re-normalizes slight norm drift, rejects corrupt records."""
    if len(data) < 12:
        raise ParseError("truncated SSEB header")
    if data[:4] != SSEB_MAGIC:
        raise ParseError(f"bad magic {data[:4]!r}, expected {SSEB_MAGIC!r}")
    version, dim, count = struct.unpack_from("<HHI", data, 4)
    if version != SSEB_VERSION:
        raise ParseError(f"unsupported SSEB version {version}")
    if expected_dim is not None and dim != expected_dim:
        raise ParseError(f"embedding dim {dim} does not match configured {expected_dim}")
    rec_size = 8 + 4 * dim
    expected_len = 12 + count * rec_size
    if len(data) != expected_len:
        raise ParseError(f"SSEB length {len(data)} != expected {expected_len} for {count} records")
    out: dict[tuple[int, int], np.ndarray] = {}
    off = 12
    for _ in range(count):
        frame, idx = struct.unpack_from("<II", data, off)
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=off + 8).astype(np.float64)
        off += rec_size
        key = (frame, idx)
        if key in out:
            raise ParseError(f"duplicate embedding record for (frame={frame}, index={idx})")
        norm = float(np.linalg.norm(vec))
        dev = abs(norm - 1.0)
        if dev >= 1e-3:
            raise ParseError(f"corrupt embedding (frame={frame}, index={idx}): |norm-1| = {dev:.3g}")
        if dev > 1e-6:
            vec = vec / norm
        out[key] = vec
    return out


def per_frame_features(
    features: Mapping[tuple[int, int], np.ndarray],
) -> dict[int, dict[int, np.ndarray]]:
    grouped: dict[int, dict[int, np.ndarray]] = {}
    for (frame, idx), vec in features.items():
        grouped.setdefault(frame, {})[idx] = vec
    return grouped
