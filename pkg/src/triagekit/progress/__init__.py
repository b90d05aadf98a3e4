"""Dialogue-progress classifiers: question detection and readiness."""

from triagekit.progress.linear import (
    LinearTextModel,
    QuestionVerdict,
    ReadinessVerdict,
    detect_question,
    estimate_readiness,
    fit_linear,
    load_linear_model,
    logistic_loss_and_grad,
    save_linear_model,
)

__all__ = [
    "LinearTextModel",
    "QuestionVerdict",
    "ReadinessVerdict",
    "detect_question",
    "estimate_readiness",
    "fit_linear",
    "load_linear_model",
    "logistic_loss_and_grad",
    "save_linear_model",
]
