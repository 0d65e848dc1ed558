"""Minimal reader for MOT-style detection files: frame,id,left,top,w,h,conf,..."""

from __future__ import annotations

from pathlib import Path


def read_detections(path: str | Path) -> dict[int, list[tuple[float, float, float, float]]]:
    """frame -> ordered list of (left, top, width, height); within-frame order
    defines the detection index used as the embedding key."""
    frames: dict[int, list[tuple[float, float, float, float]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < 6:
                raise ValueError(f"{path}:{lineno}: expected >= 6 fields")
            frame = int(float(parts[0]))
            left, top, w, h = (float(p) for p in parts[2:6])
            if w < 0 or h < 0:
                raise ValueError(f"{path}:{lineno}: negative box size")
            frames.setdefault(frame, []).append((left, top, w, h))
    return frames
