"""Patch preparation: scale the shorter side to a minimum length, then crop square."""

from __future__ import annotations

import numpy as np
from PIL import Image

RESIZE_MIN = 256
CROP = 224


def resize_min_side(img: Image.Image, min_side: int = RESIZE_MIN) -> Image.Image:
    """Scale so the shorter side equals min_side, preserving aspect ratio.
    Images already at or above min_side on both axes are left untouched."""
    w, h = img.size
    if w < 1 or h < 1:
        raise ValueError(f"image too small: {w}x{h}")
    short = min(w, h)
    if short >= min_side:
        return img
    scale = min_side / short
    return img.resize((max(min_side, round(w * scale)), max(min_side, round(h * scale))), Image.BILINEAR)


def augment(img: Image.Image, rng: np.random.Generator, crop: int = CROP, min_side: int = RESIZE_MIN) -> Image.Image:
    """Training-time patch: min-side resize, then a uniformly random square crop."""
    img = resize_min_side(img, min_side)
    w, h = img.size
    x0 = int(rng.integers(0, w - crop + 1))
    y0 = int(rng.integers(0, h - crop + 1))
    return img.crop((x0, y0, x0 + crop, y0 + crop))


def center_patch(img: Image.Image, crop: int = CROP, min_side: int = RESIZE_MIN) -> Image.Image:
    """Deterministic export-time patch: min-side resize, center crop."""
    img = resize_min_side(img, min_side)
    w, h = img.size
    x0 = (w - crop) // 2
    y0 = (h - crop) // 2
    return img.crop((x0, y0, x0 + crop, y0 + crop))


def to_tensor_array(img: Image.Image) -> np.ndarray:
    """HWC uint8 -> CHW float32 in [0, 1]."""
    arr = np.asarray(img.convert("RGB"), dtype=np.float32) / 255.0
    return np.transpose(arr, (2, 0, 1))
