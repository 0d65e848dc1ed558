"""Self-supervised pretext training: every short clip is one identity class."""

__version__ = "0.1.0"
