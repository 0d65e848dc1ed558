"""Training loop for the clip-as-identity pretext and embedding export."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .augment import augment, center_patch, to_tensor_array
from .clips import ClipIndex
from .dets import read_detections
from .encoder import SmallEncoder
from .loss import LossConfig, lmcl_loss_batch
from .sseb import write_sseb

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    loss: LossConfig
    epochs: int = 3
    batch_size: int = 16
    lr: float = 1e-3
    holdout_per_clip: int = 4
    seed: int = 0


def _load_patches(paths, rng, train: bool) -> torch.Tensor:
    arrays = []
    for p in paths:
        with Image.open(p) as img:
            patch = augment(img, rng) if train else center_patch(img)
            arrays.append(to_tensor_array(patch))
    return torch.from_numpy(np.stack(arrays))


def train_encoder(index: ClipIndex, cfg: TrainConfig) -> tuple[SmallEncoder, dict]:
    """Train the encoder + margin head; clips with fewer frames than the
    holdout keep at least one training frame. Returns the model and the
    held-out verification accuracy."""
    if index.n_classes < 2:
        raise ValueError("classification pretext needs at least 2 clips")
    torch.manual_seed(cfg.seed)
    rng = np.random.default_rng(cfg.seed)

    train_items: list[tuple[Path, int]] = []
    holdout: dict[int, list[Path]] = {}
    for cid, frames in index.clips:
        k = min(cfg.holdout_per_clip, max(len(frames) - 1, 0))
        holdout[cid] = list(frames[-k:]) if k else []
        for p in frames[: len(frames) - k]:
            train_items.append((p, cid))

    model = SmallEncoder(embedding_dim=cfg.loss.embedding_dim)
    head = torch.nn.Parameter(torch.randn(index.n_classes, cfg.loss.embedding_dim) * 0.01)
    opt = torch.optim.Adam(list(model.parameters()) + [head], lr=cfg.lr)

    model.train()
    order = np.arange(len(train_items))
    for epoch in range(cfg.epochs):
        rng.shuffle(order)
        total = 0.0
        n_batches = 0
        for start in range(0, len(order), cfg.batch_size):
            batch = [train_items[i] for i in order[start : start + cfg.batch_size]]
            x = _load_patches([p for p, _ in batch], rng, train=True)
            y = torch.tensor([c for _, c in batch], dtype=torch.long)
            emb = model(x)
            loss = lmcl_loss_batch(emb, head, y, cfg.loss)
            if not torch.isfinite(loss):
                raise RuntimeError(f"training diverged: loss={loss.item()} at epoch {epoch}")
            opt.zero_grad()
            loss.backward()
            opt.step()
            total += float(loss.item())
            n_batches += 1
        log.info("epoch %d: mean loss %.4f", epoch, total / max(n_batches, 1))

    model.eval()
    acc = verification_accuracy(model, holdout, rng)
    return model, {"verification_accuracy": acc, "n_classes": index.n_classes}


def verification_accuracy(
    model: SmallEncoder,
    holdout: dict[int, list[Path]],
    rng: np.random.Generator,
    n_triplets: int = 200,
) -> float:
    """Fraction of sampled (anchor, same-clip, other-clip) triplets where the
    same-clip cosine similarity wins."""
    usable = {cid: paths for cid, paths in holdout.items() if len(paths) >= 2}
    if len(usable) < 2:
        raise ValueError("need at least 2 clips with >= 2 held-out frames")

    emb_cache: dict[Path, torch.Tensor] = {}

    def embed(path: Path) -> torch.Tensor:
        if path not in emb_cache:
            with Image.open(path) as img:
                x = torch.from_numpy(to_tensor_array(center_patch(img)))[None]
            with torch.no_grad():
                emb_cache[path] = model(x)[0]
        return emb_cache[path]

    cids = sorted(usable)
    wins = 0
    for _ in range(n_triplets):
        cid = cids[int(rng.integers(0, len(cids)))]
        other = cids[int(rng.integers(0, len(cids)))]
        while other == cid:
            other = cids[int(rng.integers(0, len(cids)))]
        a, b = rng.choice(len(usable[cid]), size=2, replace=False)
        c = int(rng.integers(0, len(usable[other])))
        anchor = embed(usable[cid][a])
        same = float(anchor @ embed(usable[cid][b]))
        diff = float(anchor @ embed(usable[other][c]))
        if same > diff:
            wins += 1
    return wins / n_triplets


def export_embeddings(
    model: SmallEncoder,
    frames_dir: str | Path,
    det_path: str | Path,
    out_path: str | Path,
) -> int:
    """Crop every detection patch, embed it, and write the SSEB file.
    Frame images are looked up as <frame:06d>.<ext>. Returns the record count."""
    frames_dir = Path(frames_dir)
    dets = read_detections(det_path)
    features: dict[tuple[int, int], np.ndarray] = {}
    model.eval()
    for frame, boxes in sorted(dets.items()):
        img_path = None
        for ext in (".png", ".jpg", ".jpeg", ".bmp"):
            cand = frames_dir / f"{frame:06d}{ext}"
            if cand.exists():
                img_path = cand
                break
        if img_path is None:
            raise FileNotFoundError(f"no frame image for frame {frame} under {frames_dir}")
        with Image.open(img_path) as img:
            w, h = img.size
            for idx, (left, top, bw, bh) in enumerate(boxes):
                # clamp the crop to the image, keeping at least one pixel
                x0 = min(max(left, 0), w - 1)
                y0 = min(max(top, 0), h - 1)
                x1 = min(max(left + bw, x0 + 1), w)
                y1 = min(max(top + bh, y0 + 1), h)
                patch = img.crop((int(x0), int(y0), int(np.ceil(x1)), int(np.ceil(y1))))
                x = torch.from_numpy(to_tensor_array(center_patch(patch)))[None]
                with torch.no_grad():
                    emb = model(x)[0].numpy().astype(np.float64)
                features[(frame, idx)] = emb / np.linalg.norm(emb)
    blob = write_sseb(features, model.embedding_dim)
    with open(out_path, "wb") as fh:
        fh.write(blob)
    return len(features)
