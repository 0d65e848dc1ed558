"""Large-margin cosine loss: softmax over scaled cosines with the true-class
cosine reduced by a fixed margin."""

from __future__ import annotations

from dataclasses import dataclass

import torch


@dataclass
class LossConfig:
    scale: float = 30.0
    margin: float = 0.35
    embedding_dim: int = 64

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if not 0.0 <= self.margin < 1.0:
            raise ValueError(f"margin must be in [0,1), got {self.margin}")


def lmcl_loss(
    embedding: torch.Tensor,
    class_weights: torch.Tensor,
    label: int,
    cfg: LossConfig,
) -> torch.Tensor:
    """-log softmax_y of (s * (cos_y - m), s * cos_j for j != y), for one
    unit-normalized embedding against N unit-normalized class weights."""
    if not 0 <= label < class_weights.shape[0]:
        raise ValueError(f"label {label} out of range for {class_weights.shape[0]} classes")
    cos = class_weights @ embedding
    logits = cfg.scale * cos
    logits = logits.clone()
    logits[label] = cfg.scale * (cos[label] - cfg.margin)
    return torch.logsumexp(logits, dim=0) - logits[label]


def lmcl_loss_batch(
    embeddings: torch.Tensor,
    class_weights: torch.Tensor,
    labels: torch.Tensor,
    cfg: LossConfig,
) -> torch.Tensor:
    """Mean loss over a batch; embeddings and weights are normalized here so
    the head can hold raw parameters."""
    emb = torch.nn.functional.normalize(embeddings, dim=1)
    w = torch.nn.functional.normalize(class_weights, dim=1)
    cos = emb @ w.T
    logits = cfg.scale * cos
    margin = torch.zeros_like(logits)
    margin[torch.arange(len(labels)), labels] = cfg.scale * cfg.margin
    logits = logits - margin
    return torch.nn.functional.cross_entropy(logits, labels)
