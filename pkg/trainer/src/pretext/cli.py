"""CLI: make-clips (synthetic corpus), train, export."""

from __future__ import annotations

import argparse
import logging
import sys

from .clips import build_clip_index, generate_synthetic_clips
from .encoder import load_encoder, save_encoder
from .loss import LossConfig
from .train import TrainConfig, export_embeddings, train_encoder


def cmd_make_clips(args) -> int:
    generate_synthetic_clips(
        args.out, n_clips=args.n_clips, frames_per_clip=args.frames, seed=args.seed
    )
    print(f"wrote {args.n_clips} synthetic clips -> {args.out}")
    return 0


def cmd_train(args) -> int:
    index = build_clip_index(args.clips, max_clip_seconds=args.max_clip_seconds, fps=args.fps)
    cfg = TrainConfig(
        loss=LossConfig(scale=args.scale, margin=args.margin, embedding_dim=args.dim),
        epochs=args.epochs,
        lr=args.lr,
        seed=args.seed,
    )
    model, info = train_encoder(index, cfg)
    save_encoder(model, args.out)
    print(
        f"trained on {info['n_classes']} clips, held-out verification accuracy "
        f"{info['verification_accuracy']:.3f} -> {args.out}"
    )
    return 0


def cmd_export(args) -> int:
    model = load_encoder(args.model)
    n = export_embeddings(model, args.frames, args.dets, args.out)
    print(f"exported {n} embeddings (dim {model.embedding_dim}) -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pretext", description="clip-as-identity pretext trainer")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("make-clips", help="generate a synthetic clip corpus")
    m.add_argument("--out", required=True)
    m.add_argument("--n-clips", type=int, default=20)
    m.add_argument("--frames", type=int, default=30)
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_make_clips)

    t = sub.add_parser("train", help="train the encoder on clip directories")
    t.add_argument("--clips", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--dim", type=int, default=64)
    t.add_argument("--scale", type=float, default=30.0)
    t.add_argument("--margin", type=float, default=0.35)
    t.add_argument("--epochs", type=int, default=3)
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--max-clip-seconds", type=float, default=10.0)
    t.add_argument("--fps", type=float, default=30.0)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("export", help="embed detection patches into an SSEB file")
    e.add_argument("--model", required=True)
    e.add_argument("--frames", required=True)
    e.add_argument("--dets", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)

    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
