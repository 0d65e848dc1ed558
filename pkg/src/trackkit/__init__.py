"""Online multi-object tracking: two-stage appearance + geometry association,
CLEAR-MOT/IDF1 evaluation, and seeded synthetic benchmarks."""

from .association import AssocConfig, CostMatrix, MatchOutcome, build_cost_matrix, solve_assignment, two_stage_match
from .features import accumulate, cosine_distance, normalize
from .geometry import BoundingBox, bbox_distance, iou, perimeter
from .metrics import MetricsReport, aggregate, clear_mot, evaluate, idf1, mt_ml
from .motio import GtEntry, SequenceMeta, parse_detections, parse_gt, parse_tracks, read_embeddings, write_embeddings, write_tracks
from .sim import SimConfig, Scenario, blink_scenario, generate_scenario
from .tracker import Detection, Track, TrackRecord, Tracker, TrackerConfig, TrackState, run_sequence

__version__ = "0.1.0"

__all__ = [
    "AssocConfig", "CostMatrix", "MatchOutcome", "build_cost_matrix", "solve_assignment",
    "two_stage_match", "accumulate", "cosine_distance", "normalize", "BoundingBox",
    "bbox_distance", "iou", "perimeter", "MetricsReport", "aggregate", "clear_mot",
    "evaluate", "idf1", "mt_ml", "GtEntry", "SequenceMeta", "parse_detections", "parse_gt",
    "parse_tracks", "read_embeddings", "write_embeddings", "write_tracks", "SimConfig",
    "Scenario", "blink_scenario", "generate_scenario", "Detection", "Track", "TrackRecord",
    "Tracker", "TrackerConfig", "TrackState", "run_sequence",
]
