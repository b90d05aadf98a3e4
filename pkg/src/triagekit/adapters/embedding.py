"""Text embedders behind one interface.

The deterministic embedder hashes character trigrams into a fixed-size
signed-count vector and L2-normalizes it. It is a pure function of
(text, dimension): stable across processes and platforms, which is what
lets similarity thresholds be asserted exactly in tests.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

DETERMINISTIC = "deterministic-test"
REMOTE = "remote"


@dataclass(frozen=True)
class EmbedderSpec:
    kind: str = DETERMINISTIC
    dimension: int = 64

    def __post_init__(self) -> None:
        if self.kind not in (DETERMINISTIC, REMOTE):
            raise ValueError(f"unknown embedder kind {self.kind!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")


class HashedNgramEmbedder:
    """Character-trigram hashing embedder (the deterministic test kind)."""

    def __init__(self, dimension: int = 64, ngram: int = 3) -> None:
        self.dimension = dimension
        self.ngram = ngram

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float64)
        padded = f" {text.lower()} "
        if len(padded) < self.ngram:
            return vec
        for i in range(len(padded) - self.ngram + 1):
            gram = padded[i : i + self.ngram].encode("utf-8")
            h = zlib.crc32(gram)
            idx = h % self.dimension
            sign = 1.0 if (h >> 16) & 1 else -1.0
            vec[idx] += sign
        norm = float(np.linalg.norm(vec))
        if norm > 0:
            vec /= norm
        return vec


def embed(spec: EmbedderSpec, text: str) -> np.ndarray:
    """Embed ``text`` under ``spec``; deterministic kind needs no network."""
    if spec.kind == DETERMINISTIC:
        return HashedNgramEmbedder(spec.dimension).embed(text)
    from triagekit.adapters.remote import RemoteEmbedder

    return RemoteEmbedder.from_environment(spec.dimension).embed(text)
