"""Information-collection pipeline: cached and generated follow-up questions."""

from triagekit.collector.pipeline import (
    CollectorConfig,
    CollectorError,
    QuestionCandidate,
    collect_step,
    dedup,
    rank_and_select,
)
from triagekit.collector.similarity import cosine_similarity
from triagekit.collector.store import CacheEntry, VectorStore

__all__ = [
    "CacheEntry",
    "CollectorConfig",
    "CollectorError",
    "QuestionCandidate",
    "VectorStore",
    "collect_step",
    "cosine_similarity",
    "dedup",
    "rank_and_select",
]
