"""Input/output moderation and emergency detection."""

from triagekit.transcript import flatten_chat
from triagekit.safety.boosting import StumpEnsemble, fit_boosted_stumps
from triagekit.safety.emergency import (
    EmergencyModel,
    EmergencyVerdict,
    emergency_score,
    load_emergency_model,
    save_emergency_model,
    train_emergency,
)
from triagekit.safety.features import FeatureVector, TfidfVocabulary, featurize, tokenize
from triagekit.safety.moderation import (
    BlacklistTree,
    ModerationVerdict,
    load_blacklist,
    moderate,
)
from triagekit.safety.pca import pca_fit, pca_project, pca_reconstruct

__all__ = [
    "BlacklistTree",
    "EmergencyModel",
    "EmergencyVerdict",
    "FeatureVector",
    "ModerationVerdict",
    "StumpEnsemble",
    "TfidfVocabulary",
    "emergency_score",
    "featurize",
    "fit_boosted_stumps",
    "flatten_chat",
    "load_blacklist",
    "load_emergency_model",
    "moderate",
    "pca_fit",
    "pca_project",
    "pca_reconstruct",
    "save_emergency_model",
    "tokenize",
    "train_emergency",
]
