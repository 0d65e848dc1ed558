"""Clip indexing (one class per clip) and a synthetic clip corpus generator."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

log = logging.getLogger(__name__)

IMAGE_EXTS = {".png", ".jpg", ".jpeg", ".bmp"}


@dataclass
class ClipIndex:
    """clips[i] = (clip id i, ordered frame paths); each clip is one class."""

    clips: list[tuple[int, list[Path]]]

    @property
    def n_classes(self) -> int:
        return len(self.clips)


def build_clip_index(root: str | Path, max_clip_seconds: float = 10.0, fps: float = 30.0) -> ClipIndex:
    """Index a directory of clip subdirectories; clips longer than
    max_clip_seconds * fps frames are truncated."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"clip root not found: {root}")
    cap = int(max_clip_seconds * fps)
    clips: list[tuple[int, list[Path]]] = []
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        frames = sorted(p for p in sub.iterdir() if p.suffix.lower() in IMAGE_EXTS)
        if not frames:
            log.warning("skipping empty clip directory %s", sub)
            continue
        clips.append((len(clips), frames[:cap]))
    if not clips:
        raise ValueError(f"no clips found under {root}")
    return ClipIndex(clips=clips)


def generate_synthetic_clips(
    out_dir: str | Path,
    n_clips: int = 20,
    frames_per_clip: int = 30,
    size: int = 256,
    seed: int = 0,
) -> Path:
    """Write a corpus of synthetic clips: each clip has its own base color,
    stripe texture and drift direction, so frames within a clip look alike and
    clips look different. Deterministic given the seed."""
    out_dir = Path(out_dir)
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    for c in range(n_clips):
        clip_dir = out_dir / f"clip_{c:03d}"
        os.makedirs(clip_dir, exist_ok=True)
        base = rng.uniform(40, 215, size=3)
        stripe_dir = rng.uniform(0, np.pi)
        stripe_freq = rng.uniform(0.05, 0.2)
        stripe_amp = rng.uniform(20, 40)
        drift = rng.uniform(1.0, 4.0)
        phase0 = rng.uniform(0, 2 * np.pi)
        proj = np.cos(stripe_dir) * xx + np.sin(stripe_dir) * yy
        for f in range(frames_per_clip):
            stripes = stripe_amp * np.sin(stripe_freq * proj + phase0 + drift * f * 0.1)
            img = np.clip(base[None, None, :] + stripes[:, :, None], 0, 255).astype(np.uint8)
            Image.fromarray(img).save(clip_dir / f"{f:05d}.png")
    return out_dir
