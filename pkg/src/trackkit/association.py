"""Cost-matrix construction, gated assignment solving, and the two-stage match."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .features import cosine_distance
from .geometry import BoundingBox, bbox_distance

SOLVERS = ("hungarian", "greedy")


@dataclass
class AssocConfig:
    alpha: float = 2.0
    cos_weight: float = 1.0
    bbox_weight: float = 1.0
    tau1: float = 0.56
    tau2: float = 0.64
    solver: str = "hungarian"

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.cos_weight < 0 or self.bbox_weight < 0:
            raise ValueError("weights must be non-negative")
        if self.cos_weight == 0 and self.bbox_weight == 0:
            raise ValueError("at least one of cos_weight/bbox_weight must be positive")
        if self.tau2 < self.tau1:
            raise ValueError(f"tau2 ({self.tau2}) must be >= tau1 ({self.tau1})")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}, expected one of {SOLVERS}")


@dataclass
class CostMatrix:
    cost: np.ndarray      # (n_tracks, n_detections), finite, >= 0
    feasible: np.ndarray  # same shape, bool: cost <= active threshold

    @property
    def shape(self) -> tuple[int, int]:
        return self.cost.shape


@dataclass
class MatchOutcome:
    """Result of one frame's two-stage association."""

    matches: list[tuple[int, int, float]] = field(default_factory=list)      # (track id, det idx, cost)
    reacquired: list[tuple[int, int, float]] = field(default_factory=list)   # (lost-track id, det idx, cost)
    unmatched_tracks: list[int] = field(default_factory=list)
    unmatched_detections: list[int] = field(default_factory=list)


def build_cost_matrix(
    tracks: Sequence[tuple[BoundingBox, np.ndarray]],
    detections: Sequence[tuple[BoundingBox, np.ndarray]],
    cfg: AssocConfig,
    threshold: float,
) -> CostMatrix:
    """cost(i,j) = cos_weight * D_cos + bbox_weight * D_bbox, gated at <= threshold."""
    n, m = len(tracks), len(detections)
    cost = np.zeros((n, m), dtype=np.float64)
    for i, (tbox, tfeat) in enumerate(tracks):
        for j, (dbox, dfeat) in enumerate(detections):
            c = 0.0
            if cfg.cos_weight > 0:
                c += cfg.cos_weight * cosine_distance(tfeat, dfeat)
            if cfg.bbox_weight > 0:
                c += cfg.bbox_weight * bbox_distance(tbox, dbox, cfg.alpha)
            cost[i, j] = max(c, 0.0)
    return CostMatrix(cost=cost, feasible=cost <= threshold)


def solve_assignment(m: CostMatrix, solver: str = "hungarian") -> list[tuple[int, int]]:
    """One-to-one pairing over feasible cells.

    hungarian: minimal total cost among all maximum-cardinality feasible pairings.
    greedy: ascending-cost sweep, ties broken by (row, col).
    """
    if solver == "hungarian":
        pairs = _solve_hungarian(m)
    elif solver == "greedy":
        pairs = _solve_greedy(m)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return sorted(pairs)


def _solve_hungarian(m: CostMatrix) -> list[tuple[int, int]]:
    n, k = m.shape
    if n == 0 or k == 0 or not m.feasible.any():
        return []
    # Big-M on infeasible cells: the solver then maximizes the feasible
    # cardinality first and minimizes cost among those pairings.
    big = float(m.cost[m.feasible].sum()) + 1.0
    padded = np.where(m.feasible, m.cost, big)
    rows, cols = linear_sum_assignment(padded)
    return [(int(r), int(c)) for r, c in zip(rows, cols) if m.feasible[r, c]]


def _solve_greedy(m: CostMatrix) -> list[tuple[int, int]]:
    cells = [
        (m.cost[r, c], r, c)
        for r in range(m.shape[0])
        for c in range(m.shape[1])
        if m.feasible[r, c]
    ]
    cells.sort()
    used_r: set[int] = set()
    used_c: set[int] = set()
    pairs = []
    for cost, r, c in cells:
        if r in used_r or c in used_c:
            continue
        used_r.add(r)
        used_c.add(c)
        pairs.append((r, c))
    return pairs


def two_stage_match(
    tracked: Sequence[tuple[int, BoundingBox, np.ndarray]],
    lost: Sequence[tuple[int, BoundingBox, np.ndarray]],
    detections: Sequence[tuple[BoundingBox, np.ndarray]],
    cfg: AssocConfig,
) -> MatchOutcome:
    """Stage 1 pairs detections with tracked tracks at tau1; leftovers get a
    second chance against lost tracks (last-known box, accumulated feature) at
    the more generous tau2."""
    tracked_ids = {tid for tid, _, _ in tracked}
    if tracked_ids & {tid for tid, _, _ in lost}:
        raise ValueError("tracked and lost track ids must be disjoint")

    out = MatchOutcome()
    det_left = list(range(len(detections)))

    m1 = build_cost_matrix([(b, f) for _, b, f in tracked], detections, cfg, cfg.tau1)
    pairs1 = solve_assignment(m1, cfg.solver)
    matched_dets = set()
    matched_tracks = set()
    for r, c in pairs1:
        out.matches.append((tracked[r][0], c, float(m1.cost[r, c])))
        matched_tracks.add(r)
        matched_dets.add(c)
    out.unmatched_tracks.extend(tracked[r][0] for r in range(len(tracked)) if r not in matched_tracks)
    det_left = [j for j in det_left if j not in matched_dets]

    if lost and det_left:
        sub_dets = [detections[j] for j in det_left]
        m2 = build_cost_matrix([(b, f) for _, b, f in lost], sub_dets, cfg, cfg.tau2)
        pairs2 = solve_assignment(m2, cfg.solver)
        matched_lost = set()
        reacq_dets = set()
        for r, c in pairs2:
            j = det_left[c]
            out.reacquired.append((lost[r][0], j, float(m2.cost[r, c])))
            matched_lost.add(r)
            reacq_dets.add(j)
        out.unmatched_tracks.extend(lost[r][0] for r in range(len(lost)) if r not in matched_lost)
        det_left = [j for j in det_left if j not in reacq_dets]
    else:
        out.unmatched_tracks.extend(tid for tid, _, _ in lost)

    out.unmatched_detections = det_left
    out.unmatched_tracks.sort()
    return out
