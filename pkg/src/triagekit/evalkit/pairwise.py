"""Pairwise multiset agreement between system referrals and expert labels.

For two specialty multisets of equal size k, ``match_count`` counts all
index pairs whose labels agree (exact, case-insensitive), and
``any_match`` is the 0/1 indicator of at least one agreement. Over a
corpus of n chats:

    precision@k = sum(match_count) / (n * k^2)
    recall@k    = sum(any_match)   / n

With several experts, metrics are computed per (system, expert) pair
and averaged; the standard error of that mean is reported with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

DEFAULT_K_MAX = 5


@dataclass(frozen=True)
class ExpertLabelSet:
    """A multiset of specialty strings from one annotator for one chat."""

    labels: tuple[str, ...]
    k_max: int = DEFAULT_K_MAX

    def __post_init__(self) -> None:
        if not 1 <= len(self.labels) <= self.k_max:
            raise ValueError(
                f"label multiset size {len(self.labels)} outside [1, {self.k_max}]"
            )

    @property
    def k(self) -> int:
        return len(self.labels)


def _normalized(labels: Sequence[str]) -> list[str]:
    return [label.strip().lower() for label in labels]


def match_count(system: ExpertLabelSet, expert: ExpertLabelSet) -> int:
    """Number of (p, q) index pairs with equal labels; sizes must agree."""
    if system.k != expert.k:
        raise ValueError(f"multiset sizes differ: {system.k} vs {expert.k}")
    left = _normalized(system.labels)
    right = _normalized(expert.labels)
    return sum(1 for a in left for b in right if a == b)


def any_match(system: ExpertLabelSet, expert: ExpertLabelSet) -> int:
    """1 iff the multisets share at least one label."""
    return 1 if match_count(system, expert) > 0 else 0


def pairwise_precision_recall(
    system_labels: Sequence[ExpertLabelSet],
    expert_labels: Sequence[ExpertLabelSet],
    k: int,
) -> tuple[float, float]:
    """Corpus-level precision@k and recall@k for one expert."""
    if len(system_labels) != len(expert_labels):
        raise ValueError("system and expert lists must have equal length")
    n = len(system_labels)
    if n == 0:
        raise ValueError("empty corpus")
    for labels in (*system_labels, *expert_labels):
        if labels.k != k:
            raise ValueError(f"all multisets must have size k={k}, found {labels.k}")
    total_matches = sum(
        match_count(s, e) for s, e in zip(system_labels, expert_labels)
    )
    total_hits = sum(any_match(s, e) for s, e in zip(system_labels, expert_labels))
    return total_matches / (n * k * k), total_hits / n


@dataclass(frozen=True)
class PairwiseSummary:
    k: int
    n_chats: int
    n_experts: int
    per_expert: tuple[tuple[float, float], ...]
    precision_mean: float
    precision_stderr: float
    recall_mean: float
    recall_stderr: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n_chats": self.n_chats,
            "n_experts": self.n_experts,
            "per_expert": [
                {"precision": p, "recall": r} for p, r in self.per_expert
            ],
            "precision_mean": self.precision_mean,
            "precision_stderr": self.precision_stderr,
            "recall_mean": self.recall_mean,
            "recall_stderr": self.recall_stderr,
        }


def _mean_stderr(values: list[float]) -> tuple[float, float]:
    mean = sum(values) / len(values)
    if len(values) < 2:
        return mean, 0.0
    variance = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return mean, math.sqrt(variance / len(values))


def aggregate_pairwise(
    system_labels: Sequence[ExpertLabelSet],
    experts: Sequence[Sequence[ExpertLabelSet]],
    k: int,
) -> PairwiseSummary:
    """Metrics per (system, expert) pair, averaged with standard error."""
    if not experts:
        raise ValueError("need at least one expert")
    pairs = [
        pairwise_precision_recall(system_labels, expert_labels, k)
        for expert_labels in experts
    ]
    p_mean, p_err = _mean_stderr([p for p, _ in pairs])
    r_mean, r_err = _mean_stderr([r for _, r in pairs])
    return PairwiseSummary(
        k=k,
        n_chats=len(system_labels),
        n_experts=len(experts),
        per_expert=tuple(pairs),
        precision_mean=p_mean,
        precision_stderr=p_err,
        recall_mean=r_mean,
        recall_stderr=r_err,
    )
