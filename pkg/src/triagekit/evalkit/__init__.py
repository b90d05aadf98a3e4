"""Evaluation mathematics and synthetic fixture generation."""

from triagekit.evalkit.classification import BinaryMetrics, binary_metrics, mape
from triagekit.evalkit.fixtures import (
    AnnotatedCorpus,
    CorpusRecord,
    FixtureSpec,
    generate_fixtures,
)
from triagekit.evalkit.funnel import FunnelReport, funnel_stats
from triagekit.evalkit.pairwise import (
    ExpertLabelSet,
    PairwiseSummary,
    aggregate_pairwise,
    any_match,
    match_count,
    pairwise_precision_recall,
)

__all__ = [
    "AnnotatedCorpus",
    "BinaryMetrics",
    "CorpusRecord",
    "ExpertLabelSet",
    "FixtureSpec",
    "FunnelReport",
    "PairwiseSummary",
    "aggregate_pairwise",
    "any_match",
    "binary_metrics",
    "funnel_stats",
    "generate_fixtures",
    "mape",
    "match_count",
    "pairwise_precision_recall",
]
