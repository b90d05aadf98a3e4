"""Append-only vector store for historical dialogue questions.

Lookup is an exact nearest-neighbor scan; entries are never mutated or
removed, and writes are serialized behind a lock so concurrent readers
always see a consistent prefix. Persistence, when enabled, appends one
JSON record per entry.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from triagekit.collector.similarity import cosine_similarity


@dataclass(frozen=True)
class CacheEntry:
    dialogue_embedding: np.ndarray
    questions: tuple[str, ...]
    source_id: str

    def __post_init__(self) -> None:
        if not self.questions:
            raise ValueError("cache entry needs at least one question")


class VectorStore:
    def __init__(self, persist_path: str | Path | None = None) -> None:
        self._entries: list[CacheEntry] = []
        self._lock = threading.Lock()
        self._persist_path = Path(persist_path) if persist_path else None
        if self._persist_path and self._persist_path.exists():
            self._load()

    def _load(self) -> None:
        assert self._persist_path is not None
        for line in self._persist_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            doc = json.loads(line)
            self._entries.append(
                CacheEntry(
                    dialogue_embedding=np.asarray(doc["embedding"], dtype=np.float64),
                    questions=tuple(doc["questions"]),
                    source_id=doc["source_id"],
                )
            )

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> list[CacheEntry]:
        return list(self._entries)

    def add(self, entry: CacheEntry) -> None:
        with self._lock:
            self._entries.append(entry)
            if self._persist_path:
                record = json.dumps(
                    {
                        "embedding": entry.dialogue_embedding.tolist(),
                        "questions": list(entry.questions),
                        "source_id": entry.source_id,
                    }
                )
                with self._persist_path.open("a", encoding="utf-8") as fh:
                    fh.write(record + "\n")

    def best_match(self, query: np.ndarray) -> tuple[CacheEntry | None, float]:
        """Entry with maximum cosine similarity; earliest insertion wins ties."""
        best: CacheEntry | None = None
        best_sim = -np.inf
        for entry in self._entries:
            sim = cosine_similarity(query, entry.dialogue_embedding)
            if sim > best_sim:
                best, best_sim = entry, sim
        if best is None:
            return None, 0.0
        return best, float(best_sim)
