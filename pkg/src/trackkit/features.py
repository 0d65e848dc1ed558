"""Appearance-embedding algebra: unit normalization, cosine distance, feature blending."""

from __future__ import annotations

import numpy as np

UNIT_NORM_TOL = 1e-6
MIN_NORM = 1e-12


class FeatureError(ValueError):
    """Raised for unusable or mismatched embedding vectors."""


def normalize(v: np.ndarray) -> np.ndarray:
    """Return v / ||v||_2 as float64. Rejects vectors with vanishing norm."""
    v = np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(v))
    if n < MIN_NORM:
        raise FeatureError("cannot normalize a (near-)zero vector")
    return v / n


def is_unit(v: np.ndarray, tol: float = UNIT_NORM_TOL) -> bool:
    return abs(float(np.linalg.norm(v)) - 1.0) <= tol


def cosine_distance(f: np.ndarray, g: np.ndarray) -> float:
    """1 - <f, g> for unit-normalized inputs; lies in [0, 2]."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != g.shape:
        raise FeatureError(f"dimension mismatch: {f.shape} vs {g.shape}")
    return 1.0 - float(np.dot(f, g))


def accumulate(f_track: np.ndarray, f_new: np.ndarray, beta: float) -> np.ndarray:
    """Blend a track's stored feature with a fresh one: normalize(beta*f_new + (1-beta)*f_track)."""
    f_track = np.asarray(f_track, dtype=np.float64)
    f_new = np.asarray(f_new, dtype=np.float64)
    if f_track.shape != f_new.shape:
        raise FeatureError(f"dimension mismatch: {f_track.shape} vs {f_new.shape}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0,1], got {beta}")
    blended = beta * f_new + (1.0 - beta) * f_track
    n = float(np.linalg.norm(blended))
    if n < MIN_NORM:
        raise FeatureError("blended feature is the zero vector (antipodal inputs)")
    return blended / n
