"""Command-line surface: track, eval, simulate, ablate, render."""

from __future__ import annotations

import argparse
import dataclasses
import io
import os
import sys
import time

from . import metrics as metrics_mod
from . import motio
from .config import DEFAULT_CONFIG, ConfigError, RunConfig, load_config_file
from .motio import ParseError
from .sim import SimConfig, generate_scenario, standard_benchmark
from .tracker import Detection, TrackerConfig, run_sequence

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InputError(Exception):
    pass


def _load_run_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    if not os.path.exists(path):
        raise InputError(f"config file not found: {path}")
    try:
        return load_config_file(path)
    except ConfigError as e:
        raise InputError(f"{path}: {e}") from None


def _apply_overrides(cfg: TrackerConfig, args) -> TrackerConfig:
    assoc = cfg.assoc
    if getattr(args, "solver", None):
        assoc = dataclasses.replace(assoc, solver=args.solver)
    if getattr(args, "no_bbox_term", False):
        assoc = dataclasses.replace(assoc, bbox_weight=0.0)
    cfg = dataclasses.replace(cfg, assoc=assoc)
    if getattr(args, "no_feature_acc", False):
        cfg = dataclasses.replace(cfg, beta=1.0)
    if getattr(args, "max_lost_age", None) is not None:
        cfg = dataclasses.replace(cfg, max_lost_age=args.max_lost_age)
    return cfg


def _read_text(path: str) -> str:
    if not os.path.exists(path):
        raise InputError(f"input file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _read_bytes(path: str) -> bytes:
    if not os.path.exists(path):
        raise InputError(f"input file not found: {path}")
    with open(path, "rb") as fh:
        return fh.read()


def _build_frames(det_frames, features, tracker_cfg: TrackerConfig):
    """Pair parsed detections with their embeddings; a missing embedding for a
    confident detection is a hard error."""
    frames = []
    for frame in sorted(det_frames):
        dets = []
        for idx, (box, conf) in enumerate(det_frames[frame]):
            if conf < tracker_cfg.min_confidence:
                continue
            key = (frame, idx)
            if key not in features:
                raise InputError(
                    f"no embedding for confident detection (frame={frame}, index={idx})"
                )
            dets.append(Detection(box=box, confidence=conf, feature=features[key]))
        frames.append((frame, dets))
    return frames


def cmd_track(args) -> int:
    run_cfg = _load_run_config(args.config)
    tracker_cfg = _apply_overrides(run_cfg.tracker, args)

    t0 = time.perf_counter()
    try:
        det_frames = motio.parse_detections(io.StringIO(_read_text(args.det)))
    except ParseError as e:
        raise InputError(f"{args.det}: {e}") from None
    try:
        features = motio.read_embeddings(_read_bytes(args.emb), expected_dim=tracker_cfg.embedding_dim)
    except ParseError as e:
        raise InputError(f"{args.emb}: {e}") from None

    frames = _build_frames(det_frames, features, tracker_cfg)
    records = run_sequence(frames, tracker_cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(motio.write_tracks(records))
    elapsed = time.perf_counter() - t0

    n_dets = sum(len(v) for v in det_frames.values())
    print(
        f"tracked {len(det_frames)} frames, {n_dets} detections -> "
        f"{len({r.id for r in records})} tracks, {len(records)} records "
        f"({elapsed:.3f}s) -> {args.out}"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        gt = motio.parse_gt(io.StringIO(_read_text(args.gt)))
        pred = motio.parse_tracks(io.StringIO(_read_text(args.res)))
    except ParseError as e:
        raise InputError(str(e)) from None
    report = metrics_mod.evaluate(gt, pred, iou_gate=args.iou_gate, name=os.path.basename(args.res))
    table = metrics_mod.format_table([report])
    print(table, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            metrics_mod.write_kv(report, fh)
        with open(args.out + ".txt", "w", encoding="utf-8") as fh:
            fh.write(table)
    return EXIT_OK


def cmd_simulate(args) -> int:
    run_cfg = _load_run_config(args.config)
    sim_cfg = run_cfg.sim
    if args.seed is not None:
        sim_cfg = dataclasses.replace(sim_cfg, seed=args.seed)
    scenario = generate_scenario(sim_cfg)

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "gt.txt"), "w", encoding="utf-8") as fh:
        fh.write(motio.write_gt(scenario.gt))
    with open(os.path.join(args.out, "det.txt"), "w", encoding="utf-8") as fh:
        fh.write(motio.write_detections(scenario.detections))
    with open(os.path.join(args.out, "emb.sseb"), "wb") as fh:
        fh.write(motio.write_embeddings(scenario.features, sim_cfg.feature_dim))
    with open(os.path.join(args.out, "stats.txt"), "w", encoding="utf-8") as fh:
        s = scenario.stats
        fh.write(f"max_same_id_cos_dist {s.max_same_id_cos_dist:.9f}\n")
        fh.write(f"min_cross_id_cos_dist {s.min_cross_id_cos_dist:.9f}\n")
        fh.write(f"max_same_id_bbox_dist {s.max_same_id_bbox_dist:.9f}\n")
    print(
        f"simulated {sim_cfg.n_identities} identities x {sim_cfg.n_frames} frames "
        f"(seed {sim_cfg.seed}) -> {args.out}"
    )
    return EXIT_OK


ABLATION_VARIANTS = (
    ("cosine only", dict(bbox=False, acc=False)),
    ("+ bbox term", dict(bbox=True, acc=False)),
    ("+ bbox + feature acc", dict(bbox=True, acc=True)),
)


def run_ablation(sim_cfg: SimConfig, tracker_cfg: TrackerConfig, seeds: list[int]):
    """Run the three matching variants over the seed set; returns
    (variant name, mean mota, mean idf1, mean idsw) rows."""
    rows = []
    for name, flags in ABLATION_VARIANTS:
        assoc = tracker_cfg.assoc
        if not flags["bbox"]:
            assoc = dataclasses.replace(assoc, bbox_weight=0.0)
        cfg = dataclasses.replace(
            tracker_cfg,
            assoc=assoc,
            beta=tracker_cfg.beta if flags["acc"] else 1.0,
            embedding_dim=sim_cfg.feature_dim,
        )
        motas, idf1s, idsws = [], [], []
        for seed in seeds:
            scenario = generate_scenario(dataclasses.replace(sim_cfg, seed=seed))
            frames = [
                (
                    frame,
                    [
                        Detection(box=box, confidence=conf, feature=scenario.features[(frame, idx)])
                        for idx, (box, conf) in enumerate(dets)
                    ],
                )
                for frame, dets in sorted(scenario.detections.items())
            ]
            records = run_sequence(frames, cfg)
            report = metrics_mod.evaluate(scenario.gt, records)
            motas.append(report.mota if report.mota is not None else 0.0)
            idf1s.append(report.idf1)
            idsws.append(report.idsw)
        n = len(seeds)
        rows.append((name, sum(motas) / n, sum(idf1s) / n, sum(idsws) / n))
    return rows


def cmd_ablate(args) -> int:
    run_cfg = _load_run_config(args.config)
    # without an explicit config, ablate runs on the standard seeded benchmark
    sim_cfg = run_cfg.sim if args.config else standard_benchmark()
    base_seed = args.seed if args.seed is not None else sim_cfg.seed
    seeds = [base_seed + i for i in range(args.n_seeds)]
    rows = run_ablation(sim_cfg, run_cfg.tracker, seeds)

    header = f"{'variant':<24}{'MOTA':>8}{'IDF1':>8}{'IDSW':>8}"
    lines = [header] + [f"{n:<24}{m:>8.3f}{i:>8.3f}{s:>8.1f}" for n, m, i, s in rows]
    print("\n".join(lines))

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "ablation.tsv"), "w", encoding="utf-8") as fh:
            fh.write("variant\tmota\tidf1\tidsw\n")
            for n, m, i, s in rows:
                fh.write(f"{n}\t{m:.6f}\t{i:.6f}\t{s:.3f}\n")
        from .plotting import render_ablation_chart

        render_ablation_chart(rows, os.path.join(args.out, "ablation.svg"))
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        records = motio.parse_tracks(io.StringIO(_read_text(args.input)))
    except ParseError as e:
        raise InputError(f"{args.input}: {e}") from None
    arena = None
    if args.width is not None and args.height is not None:
        arena = (args.width, args.height)
    from .plotting import render_trajectories

    render_trajectories(records, args.out, arena=arena, title=os.path.basename(args.input))
    print(f"rendered {len(records)} records -> {args.out}")
    return EXIT_OK


def cmd_init_config(args) -> int:
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(DEFAULT_CONFIG)
    print(f"wrote default config -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trackkit", description="online multi-object tracking toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("track", help="run the tracker over a detection + embedding file")
    t.add_argument("--det", required=True)
    t.add_argument("--emb", required=True)
    t.add_argument("--config")
    t.add_argument("--out", required=True)
    t.add_argument("--solver", choices=("hungarian", "greedy"))
    t.add_argument("--no-bbox-term", action="store_true")
    t.add_argument("--no-feature-acc", action="store_true")
    t.add_argument("--max-lost-age", type=int)
    t.set_defaults(func=cmd_track)

    e = sub.add_parser("eval", help="evaluate a result file against ground truth")
    e.add_argument("--gt", required=True)
    e.add_argument("--res", required=True)
    e.add_argument("--iou-gate", type=float, default=0.5)
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("simulate", help="generate a synthetic sequence (gt/det/embeddings)")
    s.add_argument("--config")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("ablate", help="compare matching variants over seeded scenarios")
    a.add_argument("--config")
    a.add_argument("--seed", type=int)
    a.add_argument("--n-seeds", type=int, default=10)
    a.add_argument("--out")
    a.set_defaults(func=cmd_ablate)

    r = sub.add_parser("render", help="render trajectories to an SVG overlay")
    r.add_argument("--input", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--width", type=float)
    r.add_argument("--height", type=float)
    r.set_defaults(func=cmd_render)

    c = sub.add_parser("init-config", help="write the default config file")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_init_config)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if e.code not in (0, None):
            return EXIT_USAGE
        return EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # invariant violation
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
