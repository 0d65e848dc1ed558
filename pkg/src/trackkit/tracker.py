"""Online track lifecycle: per-frame matching, feature/box updates, lost-track aging."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .association import AssocConfig, two_stage_match
from .features import accumulate, is_unit
from .geometry import BoundingBox, perimeter


class TrackState(Enum):
    TRACKED = "tracked"
    LOST = "lost"


@dataclass
class Track:
    id: int
    state: TrackState
    box: BoundingBox
    feature: np.ndarray
    frames_since_seen: int = 0
    total_hits: int = 1


@dataclass
class TrackerConfig:
    assoc: AssocConfig = field(default_factory=AssocConfig)
    beta: float = 0.4
    max_lost_age: int = 30
    min_confidence: float = 0.4
    embedding_dim: int = 512

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0,1], got {self.beta}")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError(f"min_confidence must be in [0,1], got {self.min_confidence}")
        if self.max_lost_age < 0:
            raise ValueError(f"max_lost_age must be >= 0, got {self.max_lost_age}")
        if self.embedding_dim < 1:
            raise ValueError(f"embedding_dim must be positive, got {self.embedding_dim}")


@dataclass
class Detection:
    box: BoundingBox
    confidence: float
    feature: np.ndarray

    def __post_init__(self):
        if perimeter(self.box) <= 0:
            raise ValueError("detection box is degenerate")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0,1], got {self.confidence}")
        if not is_unit(self.feature):
            raise ValueError("detection feature is not unit-normalized")


class TrackRecord(NamedTuple):
    frame: int
    id: int
    box: BoundingBox


class Tracker:
    """Single-sequence online tracker. Mutated serially, one frame at a time."""

    def __init__(self, cfg: TrackerConfig | None = None):
        self.cfg = cfg or TrackerConfig()
        self.tracks: list[Track] = []
        self._next_id = 1
        self._last_frame: int | None = None

    def step(self, frame_index: int, detections: Sequence[Detection]) -> list[tuple[int, BoundingBox]]:
        """Advance one frame; returns (id, box) for every track in Tracked state."""
        if self._last_frame is not None and frame_index <= self._last_frame:
            raise ValueError(
                f"frame_index must increase: got {frame_index} after {self._last_frame}"
            )
        self._last_frame = frame_index

        cfg = self.cfg
        dets = [d for d in detections if d.confidence >= cfg.min_confidence]
        for d in dets:
            if d.feature.shape != (cfg.embedding_dim,):
                raise ValueError(
                    f"feature dim {d.feature.shape} != configured ({cfg.embedding_dim},)"
                )

        tracked = [t for t in self.tracks if t.state is TrackState.TRACKED]
        lost = [t for t in self.tracks if t.state is TrackState.LOST]
        by_id = {t.id: t for t in self.tracks}

        outcome = two_stage_match(
            [(t.id, t.box, t.feature) for t in tracked],
            [(t.id, t.box, t.feature) for t in lost],
            [(d.box, d.feature) for d in dets],
            cfg.assoc,
        )

        for tid, j, _cost in outcome.matches + outcome.reacquired:
            t = by_id[tid]
            d = dets[j]
            t.box = d.box
            t.feature = accumulate(t.feature, d.feature, cfg.beta)
            t.state = TrackState.TRACKED
            t.frames_since_seen = 0
            t.total_hits += 1

        unmatched = set(outcome.unmatched_tracks)
        survivors = []
        for t in self.tracks:
            if t.id in unmatched:
                if t.state is TrackState.TRACKED:
                    t.state = TrackState.LOST
                t.frames_since_seen += 1
                if t.frames_since_seen > cfg.max_lost_age:
                    continue
            survivors.append(t)
        self.tracks = survivors

        for j in outcome.unmatched_detections:
            d = dets[j]
            self.tracks.append(
                Track(
                    id=self._next_id,
                    state=TrackState.TRACKED,
                    box=d.box,
                    feature=np.asarray(d.feature, dtype=np.float64).copy(),
                )
            )
            self._next_id += 1

        return [
            (t.id, t.box) for t in self.tracks if t.state is TrackState.TRACKED
        ]


def run_sequence(
    frames: Sequence[tuple[int, Sequence[Detection]]],
    cfg: TrackerConfig | None = None,
) -> list[TrackRecord]:
    """Drive a fresh tracker over ordered frames; deterministic for fixed input."""
    tracker = Tracker(cfg)
    records: list[TrackRecord] = []
    for frame_index, dets in frames:
        for tid, box in tracker.step(frame_index, dets):
            records.append(TrackRecord(frame=frame_index, id=tid, box=box))
    return records
