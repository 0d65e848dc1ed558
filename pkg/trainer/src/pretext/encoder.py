"""A deliberately small convolutional encoder producing L2-normalized embeddings."""

from __future__ import annotations

import torch
import torch.nn as nn


class SmallEncoder(nn.Module):
    def __init__(self, embedding_dim: int = 64):
        super().__init__()
        self.embedding_dim = embedding_dim
        self.features = nn.Sequential(
            nn.Conv2d(3, 16, kernel_size=5, stride=4, padding=2),
            nn.ReLU(inplace=True),
            nn.Conv2d(16, 32, kernel_size=3, stride=2, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv2d(32, 64, kernel_size=3, stride=2, padding=1),
            nn.ReLU(inplace=True),
            nn.AdaptiveAvgPool2d(1),
        )
        self.head = nn.Linear(64, embedding_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """Returns unit-normalized embeddings, shape (batch, embedding_dim)."""
        z = self.features(x).flatten(1)
        z = self.head(z)
        return torch.nn.functional.normalize(z, dim=1)


def save_encoder(model: SmallEncoder, path: str) -> None:
    torch.save({"embedding_dim": model.embedding_dim, "state": model.state_dict()}, path)


def load_encoder(path: str) -> SmallEncoder:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    model = SmallEncoder(embedding_dim=blob["embedding_dim"])
    model.load_state_dict(blob["state"])
    model.eval()
    return model
