"""Axis-aligned bounding-box algebra: IoU, perimeter and the normalized box distance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateBoxError(ValueError):
    """Raised when an operation needs a box with positive extent and gets none."""


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in absolute pixel coordinates, stored as (top, left, bottom, right)."""

    top: float
    left: float
    bottom: float
    right: float

    def __post_init__(self):
        coords = (self.top, self.left, self.bottom, self.right)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite box coordinates: {coords}")
        if self.bottom < self.top or self.right < self.left:
            raise ValueError(f"inverted box: {coords}")

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.bottom - self.top

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.left + self.right) / 2.0, (self.top + self.bottom) / 2.0

    def as_array(self) -> np.ndarray:
        return np.array([self.top, self.left, self.bottom, self.right], dtype=np.float64)

    @classmethod
    def from_ltwh(cls, left: float, top: float, w: float, h: float) -> "BoundingBox":
        if w < 0 or h < 0:
            raise ValueError(f"negative box size: w={w}, h={h}")
        return cls(top=top, left=left, bottom=top + h, right=left + w)

    def to_ltwh(self) -> tuple[float, float, float, float]:
        return self.left, self.top, self.width, self.height


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union; 0 when the union has no area."""
    inter_w = min(a.right, b.right) - max(a.left, b.left)
    inter_h = min(a.bottom, b.bottom) - max(a.top, b.top)
    if inter_w <= 0 or inter_h <= 0:
        return 0.0
    inter = inter_w * inter_h
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def perimeter(b: BoundingBox) -> float:
    return 2.0 * (b.width + b.height)


def bbox_distance(track_box: BoundingBox, det_box: BoundingBox, alpha: float = 2.0) -> float:
    """Euclidean distance between the two 4-coordinate vectors, normalized by
    alpha times the TRACK box perimeter (directional on purpose)."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    p = perimeter(track_box)
    if p <= 0:
        raise DegenerateBoxError("track box has zero perimeter")
    diff = track_box.as_array() - det_box.as_array()
    return float(np.linalg.norm(diff) / (alpha * p))
