"""Deterministic matplotlib rendering of trajectories and ablation charts."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .tracker import TrackRecord  # noqa: E402

# fixed hash salt + no Date metadata make SVG output byte-identical across runs
matplotlib.rcParams["svg.hashsalt"] = "trackkit"

_CMAP = plt.get_cmap("tab20")


def id_color(track_id: int):
    return _CMAP(track_id % 20)


def render_trajectories(
    records: Sequence[TrackRecord],
    out_path: str,
    arena: tuple[float, float] | None = None,
    title: str = "trajectories",
) -> None:
    """One colored polyline through box centers per id, on the arena rectangle."""
    fig, ax = plt.subplots(figsize=(8, 6))
    by_id: dict[int, list[tuple[int, float, float]]] = {}
    for r in records:
        cx, cy = r.box.center
        by_id.setdefault(r.id, []).append((r.frame, cx, cy))

    if arena is None:
        if records:
            xs = [r.box.right for r in records] + [r.box.left for r in records]
            ys = [r.box.bottom for r in records] + [r.box.top for r in records]
            arena = (max(xs), max(ys))
        else:
            arena = (100.0, 100.0)

    ax.add_patch(
        plt.Rectangle((0, 0), arena[0], arena[1], fill=False, edgecolor="black", linewidth=1.0)
    )
    for tid in sorted(by_id):
        pts = sorted(by_id[tid])
        xs = [p[1] for p in pts]
        ys = [p[2] for p in pts]
        ax.plot(xs, ys, "-", color=id_color(tid), linewidth=1.2)
        ax.annotate(str(tid), (xs[0], ys[0]), fontsize=7, color=id_color(tid))
    ax.set_xlim(-0.05 * arena[0], 1.05 * arena[0])
    ax.set_ylim(1.05 * arena[1], -0.05 * arena[1])  # image coordinates: y down
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_ablation_chart(
    rows: Sequence[tuple[str, float, float, float]],
    out_path: str,
) -> None:
    """Bar chart of (variant, mota, idf1, idsw) rows; idsw on a twin axis."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    names = [r[0] for r in rows]
    x = range(len(rows))
    width = 0.35
    ax.bar([i - width / 2 for i in x], [r[1] for r in rows], width, label="MOTA", color="#4477aa")
    ax.bar([i + width / 2 for i in x], [r[2] for r in rows], width, label="IDF1", color="#66ccee")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, rotation=15, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax2 = ax.twinx()
    ax2.plot(list(x), [r[3] for r in rows], "o-", color="#ee6677", label="IDSW")
    ax2.set_ylabel("mean IDSW")
    ax.legend(loc="lower left")
    ax2.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
