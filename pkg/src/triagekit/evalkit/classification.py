"""Binary classification metrics and MAPE with explicit zero conventions.

Precision, recall, and F1 are defined as 0 when their denominators
vanish; FPR is 0 when there are no negatives. MAPE rejects non-positive
gold values instead of silently dividing by zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class BinaryMetrics:
    precision: float
    recall: float
    f1: float
    fpr: float
    tp: int
    fp: int
    tn: int
    fn: int

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "fpr": self.fpr,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
        }


def binary_metrics(pred: Sequence[int], gold: Sequence[int]) -> BinaryMetrics:
    if len(pred) != len(gold):
        raise ValueError("prediction and gold lists must have equal length")
    for value in (*pred, *gold):
        if value not in (0, 1):
            raise ValueError("labels must be 0 or 1")
    tp = sum(1 for p, g in zip(pred, gold) if p == 1 and g == 1)
    fp = sum(1 for p, g in zip(pred, gold) if p == 1 and g == 0)
    tn = sum(1 for p, g in zip(pred, gold) if p == 0 and g == 0)
    fn = sum(1 for p, g in zip(pred, gold) if p == 0 and g == 1)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    fpr = fp / (fp + tn) if fp + tn else 0.0
    return BinaryMetrics(
        precision=precision, recall=recall, f1=f1, fpr=fpr, tp=tp, fp=fp, tn=tn, fn=fn
    )


def mape(pred: Sequence[float], gold: Sequence[float]) -> float:
    """Mean absolute percentage error; gold values must be positive."""
    if len(pred) != len(gold):
        raise ValueError("prediction and gold lists must have equal length")
    if not gold:
        raise ValueError("empty inputs")
    if any(g <= 0 for g in gold):
        raise ValueError("gold values must be strictly positive")
    return sum(abs(p - g) / g for p, g in zip(pred, gold)) / len(gold)
