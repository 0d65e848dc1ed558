"""Independent brute-force oracles used to cross-check the fast implementations.

Everything here is deliberately written from scratch (own IoU arithmetic, own
matching by enumeration) so it shares no code path with the package."""

from __future__ import annotations

from itertools import permutations

import numpy as np


def brute_force_assignment(cost: np.ndarray, feasible: np.ndarray) -> tuple[int, float]:
    """(max feasible cardinality, min total cost at that cardinality), by
    enumerating all permutations of the big-M padded square matrix."""
    n, m = cost.shape
    if n == 0 or m == 0 or not feasible.any():
        return 0, 0.0
    s = max(n, m)
    big = float(cost[feasible].sum()) + 1.0
    padded = np.full((s, s), big)
    padded[:n, :m] = np.where(feasible, cost, big)
    best = None
    for perm in permutations(range(s)):
        total = sum(padded[i, perm[i]] for i in range(s))
        if best is None or total < best[0]:
            card = sum(1 for i in range(s) if padded[i, perm[i]] < big)
            best = (total, card)
    total, card = best
    return card, float(total - (s - card) * big)


def _iou(a, b) -> float:
    # boxes as (top, left, bottom, right) tuples
    it = max(a[0], b[0])
    il = max(a[1], b[1])
    ib = min(a[2], b[2])
    ir = min(a[3], b[3])
    if ib <= it or ir <= il:
        return 0.0
    inter = (ib - it) * (ir - il)
    area_a = (a[2] - a[0]) * (a[3] - a[1])
    area_b = (b[2] - b[0]) * (b[3] - b[1])
    union = area_a + area_b - inter
    return inter / union if union > 0 else 0.0


def _best_matching(free_g, free_p, cost_of):
    """Exhaustive max-cardinality min-cost matching over feasible pairs.

    cost_of(g, p) returns a float cost or None when infeasible."""
    best = {"size": -1, "cost": 0.0, "pairs": []}

    def recurse(gi, used_p, pairs, total):
        if gi == len(free_g):
            size = len(pairs)
            if size > best["size"] or (size == best["size"] and total < best["cost"]):
                best["size"] = size
                best["cost"] = total
                best["pairs"] = list(pairs)
            return
        g = free_g[gi]
        recurse(gi + 1, used_p, pairs, total)  # leave g unmatched
        for p in free_p:
            if p in used_p:
                continue
            c = cost_of(g, p)
            if c is None:
                continue
            used_p.add(p)
            pairs.append((g, p))
            recurse(gi + 1, used_p, pairs, total + c)
            pairs.pop()
            used_p.remove(p)

    recurse(0, set(), [], 0.0)
    return best["pairs"]


def brute_clear_mot(gt_rows, pred_rows, iou_gate=0.5):
    """CLEAR-MOT by enumeration. Rows are (frame, id, box-tuple)."""
    gt_frames: dict[int, dict[int, tuple]] = {}
    for f, i, b in gt_rows:
        gt_frames.setdefault(f, {})[i] = b
    pred_frames: dict[int, dict[int, tuple]] = {}
    for f, i, b in pred_rows:
        pred_frames.setdefault(f, {})[i] = b

    fp = fn = idsw = 0
    prev: dict[int, int] = {}
    last_match: dict[int, int] = {}
    for frame in sorted(set(gt_frames) | set(pred_frames)):
        g = gt_frames.get(frame, {})
        p = pred_frames.get(frame, {})
        cur: dict[int, int] = {}
        for gid, pid in prev.items():
            if gid in g and pid in p and pid not in cur.values():
                if _iou(g[gid], p[pid]) >= iou_gate:
                    cur[gid] = pid

        free_g = [gid for gid in sorted(g) if gid not in cur]
        free_p = [pid for pid in sorted(p) if pid not in cur.values()]

        def cost_of(gid, pid):
            v = _iou(g[gid], p[pid])
            return 1.0 - v if v >= iou_gate else None

        for gid, pid in _best_matching(free_g, free_p, cost_of):
            cur[gid] = pid

        fn += len(g) - len(cur)
        fp += len(p) - len(cur)
        for gid, pid in cur.items():
            if gid in last_match and last_match[gid] != pid:
                idsw += 1
            last_match[gid] = pid
        prev = cur

    gt_total = sum(len(v) for v in gt_frames.values())
    mota = None if gt_total == 0 else 1.0 - (fp + fn + idsw) / gt_total
    return fp, fn, idsw, mota


def brute_idf1(gt_rows, pred_rows, iou_gate=0.5):
    """IDF1 by enumerating every injective gt-id -> pred-id mapping."""
    gt_frames: dict[int, dict[int, tuple]] = {}
    for f, i, b in gt_rows:
        gt_frames.setdefault(f, {})[i] = b
    pred_frames: dict[int, dict[int, tuple]] = {}
    for f, i, b in pred_rows:
        pred_frames.setdefault(f, {})[i] = b

    gt_ids = sorted({i for _, i, _ in gt_rows})
    pred_ids = sorted({i for _, i, _ in pred_rows})

    overlap: dict[tuple[int, int], int] = {}
    for frame, g in gt_frames.items():
        p = pred_frames.get(frame, {})
        for gid, gbox in g.items():
            for pid, pbox in p.items():
                if _iou(gbox, pbox) >= iou_gate:
                    overlap[(gid, pid)] = overlap.get((gid, pid), 0) + 1

    best_idtp = 0

    def recurse(gi, used_p, acc):
        nonlocal best_idtp
        if gi == len(gt_ids):
            best_idtp = max(best_idtp, acc)
            return
        gid = gt_ids[gi]
        recurse(gi + 1, used_p, acc)
        for pid in pred_ids:
            if pid in used_p:
                continue
            used_p.add(pid)
            recurse(gi + 1, used_p, acc + overlap.get((gid, pid), 0))
            used_p.remove(pid)

    recurse(0, set(), 0)

    total_gt = len(gt_rows)
    total_pred = len(pred_rows)
    idtp = best_idtp
    idfn = total_gt - idtp
    idfp = total_pred - idtp
    denom = 2 * idtp + idfp + idfn
    return idtp, idfp, idfn, (2 * idtp / denom if denom else 0.0)


def random_micro_instance(rng: np.random.Generator, max_ids=4, max_frames=8):
    """A small gt/pred pair with overlapping, drifting, occasionally relabeled boxes."""
    n_ids = int(rng.integers(1, max_ids + 1))
    n_frames = int(rng.integers(1, max_frames + 1))
    gt_rows = []
    pred_rows = []
    for gid in range(1, n_ids + 1):
        x = rng.uniform(0, 70)
        y = rng.uniform(0, 70)
        w = rng.uniform(10, 30)
        h = rng.uniform(10, 30)
        vx, vy = rng.uniform(-4, 4, size=2)
        pid = gid
        for frame in range(1, n_frames + 1):
            if rng.random() < 0.15:
                continue  # gt gap
            box = (y, x, y + h, x + w)
            gt_rows.append((frame, gid, box))
            if rng.random() < 0.2:
                continue  # missed prediction
            if rng.random() < 0.1:
                pid = pid + n_ids  # identity switch in the prediction
            jitter = rng.uniform(-6, 6, size=4)
            pbox = (y + jitter[0], x + jitter[1], y + h + abs(jitter[2]) * 0.2, x + w + abs(jitter[3]) * 0.2)
            pbox = (min(pbox[0], pbox[2]), min(pbox[1], pbox[3]), max(pbox[0], pbox[2]), max(pbox[1], pbox[3]))
            pred_rows.append((frame, pid, pbox))
            x += vx
            y += vy
    # occasional pure false positives
    for _ in range(int(rng.integers(0, 3))):
        frame = int(rng.integers(1, n_frames + 1))
        x, y = rng.uniform(0, 80, size=2)
        pred_rows.append((frame, 90 + int(rng.integers(0, 5)), (y, x, y + 15, x + 15)))
    # dedupe (frame, id)
    seen = set()
    pred_rows = [r for r in pred_rows if (r[0], r[1]) not in seen and not seen.add((r[0], r[1]))]
    return gt_rows, pred_rows
