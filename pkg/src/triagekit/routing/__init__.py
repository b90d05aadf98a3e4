"""Diagnosis-to-specialist routing and free-dialogue answering."""

from triagekit.routing.answers import answer_free
from triagekit.routing.selector import (
    DiagnosisHypothesis,
    ReferralTriple,
    RoutingConfig,
    RoutingError,
    RoutingResult,
    explain,
    generate_hypotheses,
    route,
    select_specialist,
)

__all__ = [
    "DiagnosisHypothesis",
    "ReferralTriple",
    "RoutingConfig",
    "RoutingError",
    "RoutingResult",
    "answer_free",
    "explain",
    "generate_hypotheses",
    "route",
    "select_specialist",
]
