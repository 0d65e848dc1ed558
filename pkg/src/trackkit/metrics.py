"""CLEAR-MOT (MOTA, FP, FN, IDSW), IDF1 and MT/ML evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .geometry import iou
from .motio import GtEntry
from .tracker import TrackRecord

DEFAULT_IOU_GATE = 0.5
MT_COVERAGE = 0.8
ML_COVERAGE = 0.2


@dataclass
class MetricsReport:
    name: str
    gt_total: int
    pred_total: int
    fp: int
    fn: int
    idsw: int
    idtp: int
    idfp: int
    idfn: int
    mt: int
    ml: int
    n_gt_ids: int

    @property
    def mota(self) -> float | None:
        if self.gt_total == 0:
            return None
        return 1.0 - (self.fp + self.fn + self.idsw) / self.gt_total

    @property
    def idf1(self) -> float:
        denom = 2 * self.idtp + self.idfp + self.idfn
        return 2 * self.idtp / denom if denom else 0.0

    @property
    def mt_pct(self) -> float:
        return 100.0 * self.mt / self.n_gt_ids if self.n_gt_ids else 0.0

    @property
    def ml_pct(self) -> float:
        return 100.0 * self.ml / self.n_gt_ids if self.n_gt_ids else 0.0


def _group_gt(gt: Iterable[GtEntry]) -> dict[int, dict[int, object]]:
    """frame -> {gt id -> box}"""
    frames: dict[int, dict[int, object]] = {}
    for e in gt:
        frames.setdefault(e.frame, {})[e.id] = e.box
    return frames


def _group_pred(pred: Iterable[TrackRecord]) -> dict[int, dict[int, object]]:
    frames: dict[int, dict[int, object]] = {}
    for r in pred:
        frames.setdefault(r.frame, {})[r.id] = r.box
    return frames


def frame_matchings(
    gt: Sequence[GtEntry],
    pred: Sequence[TrackRecord],
    iou_gate: float = DEFAULT_IOU_GATE,
) -> dict[int, dict[int, int]]:
    """Per-frame gt id -> pred id matching under the CLEAR rules.

    Pairs matched in the previous frame persist if still within the IoU gate;
    the remainder is matched by minimum-cost assignment on (1 - IoU), gated."""
    gt_frames = _group_gt(gt)
    pred_frames = _group_pred(pred)
    all_frames = sorted(set(gt_frames) | set(pred_frames))

    matchings: dict[int, dict[int, int]] = {}
    prev: dict[int, int] = {}
    for frame in all_frames:
        g = gt_frames.get(frame, {})
        p = pred_frames.get(frame, {})
        cur: dict[int, int] = {}

        # carry over last frame's pairs that are still valid
        for gid, pid in prev.items():
            if gid in g and pid in p and pid not in cur.values():
                if iou(g[gid], p[pid]) >= iou_gate:
                    cur[gid] = pid

        free_g = [gid for gid in sorted(g) if gid not in cur]
        free_p = [pid for pid in sorted(p) if pid not in cur.values()]
        if free_g and free_p:
            cost = np.ones((len(free_g), len(free_p)), dtype=np.float64)
            feasible = np.zeros_like(cost, dtype=bool)
            for i, gid in enumerate(free_g):
                for j, pid in enumerate(free_p):
                    v = iou(g[gid], p[pid])
                    if v >= iou_gate:
                        cost[i, j] = 1.0 - v
                        feasible[i, j] = True
            if feasible.any():
                big = float(cost[feasible].sum()) + 1.0
                padded = np.where(feasible, cost, big)
                rows, cols = linear_sum_assignment(padded)
                for r, c in zip(rows, cols):
                    if feasible[r, c]:
                        cur[free_g[r]] = free_p[c]

        matchings[frame] = cur
        prev = cur
    return matchings


def clear_mot(
    gt: Sequence[GtEntry],
    pred: Sequence[TrackRecord],
    iou_gate: float = DEFAULT_IOU_GATE,
) -> tuple[int, int, int, float | None]:
    """Returns (fp, fn, idsw, mota); mota is None when there is no ground truth."""
    gt_frames = _group_gt(gt)
    pred_frames = _group_pred(pred)
    matchings = frame_matchings(gt, pred, iou_gate)

    fp = fn = idsw = 0
    last_pred_for_gt: dict[int, int] = {}
    for frame in sorted(set(gt_frames) | set(pred_frames)):
        cur = matchings.get(frame, {})
        g = gt_frames.get(frame, {})
        p = pred_frames.get(frame, {})
        fn += len(g) - len(cur)
        fp += len(p) - len(cur)
        for gid, pid in cur.items():
            if gid in last_pred_for_gt and last_pred_for_gt[gid] != pid:
                idsw += 1
            last_pred_for_gt[gid] = pid

    gt_total = len(gt)
    mota = None if gt_total == 0 else 1.0 - (fp + fn + idsw) / gt_total
    return fp, fn, idsw, mota


def idf1(
    gt: Sequence[GtEntry],
    pred: Sequence[TrackRecord],
    iou_gate: float = DEFAULT_IOU_GATE,
) -> tuple[int, int, int, float]:
    """Global trajectory-level pairing; returns (idtp, idfp, idfn, idf1)."""
    gt_frames = _group_gt(gt)
    pred_frames = _group_pred(pred)
    gt_ids = sorted({e.id for e in gt})
    pred_ids = sorted({r.id for r in pred})

    gt_len = {gid: sum(1 for e in gt if e.id == gid) for gid in gt_ids}
    pred_len = {pid: sum(1 for r in pred if r.id == pid) for pid in pred_ids}

    # matched-frame counts per (gt id, pred id) pair
    overlap = np.zeros((len(gt_ids), len(pred_ids)), dtype=np.int64)
    for frame, g in gt_frames.items():
        p = pred_frames.get(frame)
        if not p:
            continue
        for i, gid in enumerate(gt_ids):
            if gid not in g:
                continue
            for j, pid in enumerate(pred_ids):
                if pid in p and iou(g[gid], p[pid]) >= iou_gate:
                    overlap[i, j] += 1

    idtp = 0
    if gt_ids and pred_ids:
        # pairing (g,p) saves 2*overlap relative to leaving both unmatched;
        # minimize total misses+fps == maximize total overlap
        cost = -overlap.astype(np.float64)
        rows, cols = linear_sum_assignment(cost)
        idtp = int(sum(overlap[r, c] for r, c in zip(rows, cols)))

    total_gt = len(gt)
    total_pred = len(pred)
    idfn = total_gt - idtp
    idfp = total_pred - idtp
    denom = 2 * idtp + idfp + idfn
    score = 2 * idtp / denom if denom else 0.0
    return idtp, idfp, idfn, score


def mt_ml(
    gt: Sequence[GtEntry],
    pred: Sequence[TrackRecord],
    iou_gate: float = DEFAULT_IOU_GATE,
) -> tuple[int, int]:
    """Mostly-tracked / mostly-lost counts from per-identity frame coverage."""
    matchings = frame_matchings(gt, pred, iou_gate)
    frames_per_gt: dict[int, int] = {}
    matched_per_gt: dict[int, int] = {}
    for e in gt:
        frames_per_gt[e.id] = frames_per_gt.get(e.id, 0) + 1
    for frame, cur in matchings.items():
        for gid in cur:
            matched_per_gt[gid] = matched_per_gt.get(gid, 0) + 1
    mt = ml = 0
    for gid, total in frames_per_gt.items():
        coverage = matched_per_gt.get(gid, 0) / total
        if coverage >= MT_COVERAGE:
            mt += 1
        if coverage <= ML_COVERAGE:
            ml += 1
    return mt, ml


def evaluate(
    gt: Sequence[GtEntry],
    pred: Sequence[TrackRecord],
    iou_gate: float = DEFAULT_IOU_GATE,
    name: str = "sequence",
) -> MetricsReport:
    fp, fn, idsw, _ = clear_mot(gt, pred, iou_gate)
    idtp, idfp, idfn, _ = idf1(gt, pred, iou_gate)
    mt, ml = mt_ml(gt, pred, iou_gate)
    return MetricsReport(
        name=name,
        gt_total=len(gt),
        pred_total=len(pred),
        fp=fp,
        fn=fn,
        idsw=idsw,
        idtp=idtp,
        idfp=idfp,
        idfn=idfn,
        mt=mt,
        ml=ml,
        n_gt_ids=len({e.id for e in gt}),
    )


def aggregate(reports: Sequence[MetricsReport], name: str = "OVERALL") -> MetricsReport:
    """Sum raw counts across sequences, then recompute the ratios."""
    return MetricsReport(
        name=name,
        gt_total=sum(r.gt_total for r in reports),
        pred_total=sum(r.pred_total for r in reports),
        fp=sum(r.fp for r in reports),
        fn=sum(r.fn for r in reports),
        idsw=sum(r.idsw for r in reports),
        idtp=sum(r.idtp for r in reports),
        idfp=sum(r.idfp for r in reports),
        idfn=sum(r.idfn for r in reports),
        mt=sum(r.mt for r in reports),
        ml=sum(r.ml for r in reports),
        n_gt_ids=sum(r.n_gt_ids for r in reports),
    )


def format_table(reports: Sequence[MetricsReport]) -> str:
    header = f"{'name':<16}{'MOTA':>8}{'IDF1':>8}{'MT':>6}{'ML':>6}{'MT%':>7}{'ML%':>7}{'FP':>8}{'FN':>8}{'IDSW':>6}"
    lines = [header]
    for r in reports:
        mota = "n/a" if r.mota is None else f"{r.mota:.3f}"
        lines.append(
            f"{r.name:<16}{mota:>8}{r.idf1:>8.3f}{r.mt:>6}{r.ml:>6}"
            f"{r.mt_pct:>7.1f}{r.ml_pct:>7.1f}{r.fp:>8}{r.fn:>8}{r.idsw:>6}"
        )
    return "\n".join(lines) + "\n"


def write_kv(report: MetricsReport, stream: IO[str]) -> None:
    """One metric per line, machine readable."""
    mota = "nan" if report.mota is None else f"{report.mota:.6f}"
    stream.write(f"mota {mota}\n")
    stream.write(f"idf1 {report.idf1:.6f}\n")
    for key in ("mt", "ml", "fp", "fn", "idsw", "idtp", "idfp", "idfn", "gt_total", "pred_total"):
        stream.write(f"{key} {getattr(report, key)}\n")
    stream.write(f"mt_pct {report.mt_pct:.2f}\n")
    stream.write(f"ml_pct {report.ml_pct:.2f}\n")
