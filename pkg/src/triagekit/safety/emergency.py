"""Emergency detector: tf-idf + critical-word flags + model probe,
projected with PCA and scored by the boosted-stump ensemble.

The verdict is critical iff score > threshold, strict. The shipped
default threshold is 0.11; deployments override it per their own
false-alarm budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from triagekit.safety.boosting import StumpEnsemble, fit_boosted_stumps
from triagekit.safety.features import FeatureVector, TfidfVocabulary, featurize
from triagekit.safety.pca import pca_fit, pca_project
from triagekit.transcript import Transcript, flatten_chat

DEFAULT_THRESHOLD = 0.11

BUNDLE_VERSION = 1


class ModelIntegrityError(ValueError):
    """Stage dimensions of a loaded model do not line up."""


@dataclass(frozen=True)
class EmergencyModel:
    vocab: TfidfVocabulary
    critical_words: tuple[str, ...]
    pca_mean: np.ndarray
    pca_basis: np.ndarray
    scorer: StumpEnsemble
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self) -> None:
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        dim = len(self.vocab.terms) + len(self.critical_words) + 1
        if self.pca_mean.shape != (dim,):
            raise ModelIntegrityError(
                f"pca mean has dimension {self.pca_mean.shape}, features have {dim}"
            )
        if self.pca_basis.ndim != 2 or self.pca_basis.shape[1] != dim:
            raise ModelIntegrityError("pca basis does not match the feature dimension")
        gram = self.pca_basis @ self.pca_basis.T
        if not np.allclose(gram, np.eye(self.pca_basis.shape[0]), atol=1e-8):
            raise ModelIntegrityError("pca basis rows are not orthonormal")

    @property
    def n_components(self) -> int:
        return self.pca_basis.shape[0]

    def features(self, history: Transcript, llm_flag: bool) -> FeatureVector:
        return featurize(history, self.vocab, self.critical_words, llm_flag)


@dataclass(frozen=True)
class EmergencyVerdict:
    score: float
    critical: bool

    def __post_init__(self) -> None:
        if not 0 <= self.score <= 1:
            raise ValueError("score must lie in [0, 1]")


def emergency_score(
    history: Transcript, model: EmergencyModel, llm_flag: bool
) -> EmergencyVerdict:
    """Score one chat; critical iff score > model.threshold (strict)."""
    vec = model.features(history, llm_flag).concatenated
    projected = pca_project(vec, model.pca_mean, model.pca_basis)
    score = float(model.scorer.score(projected)[0])
    return EmergencyVerdict(score=score, critical=score > model.threshold)


def train_emergency(
    chats: list[Transcript],
    labels: list[int],
    llm_flags: list[bool],
    critical_words: list[str],
    *,
    rounds: int = 100,
    n_components: int | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> EmergencyModel:
    """Fit vocabulary, PCA, and scorer on a labeled chat corpus.

    ``n_components`` defaults to the full usable rank,
    min(feature dim, len(chats) - 1).
    """
    if not (len(chats) == len(labels) == len(llm_flags)):
        raise ValueError("chats, labels, and llm_flags must align")
    if len(chats) < 2:
        raise ValueError("need at least 2 training chats")
    documents = [flatten_chat(c) for c in chats]
    vocab = TfidfVocabulary.fit(documents)
    words = tuple(critical_words)
    rows = np.stack(
        [
            featurize(chat, vocab, words, flag).concatenated
            for chat, flag in zip(chats, llm_flags)
        ]
    )
    if n_components is None:
        n_components = min(rows.shape[1], rows.shape[0] - 1)
    mean, basis = pca_fit(rows, n_components)
    projected = pca_project(rows, mean, basis)
    scorer = fit_boosted_stumps(projected, np.asarray(labels, dtype=np.float64), rounds)
    return EmergencyModel(
        vocab=vocab,
        critical_words=words,
        pca_mean=mean,
        pca_basis=basis,
        scorer=scorer,
        threshold=threshold,
    )


def save_emergency_model(model: EmergencyModel, path: str | Path) -> None:
    doc = {
        "version": BUNDLE_VERSION,
        "kind": "emergency",
        "vocab": {"terms": list(model.vocab.terms), "idf": list(model.vocab.idf)},
        "critical_words": list(model.critical_words),
        "pca_mean": model.pca_mean.tolist(),
        "pca_basis": model.pca_basis.tolist(),
        "scorer": model.scorer.to_dict(),
        "threshold": model.threshold,
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_emergency_model(path: str | Path) -> EmergencyModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("version") != BUNDLE_VERSION or doc.get("kind") != "emergency":
        raise ModelIntegrityError(f"not a version-{BUNDLE_VERSION} emergency bundle")
    return EmergencyModel(
        vocab=TfidfVocabulary(
            terms=tuple(doc["vocab"]["terms"]), idf=tuple(doc["vocab"]["idf"])
        ),
        critical_words=tuple(doc["critical_words"]),
        pca_mean=np.asarray(doc["pca_mean"], dtype=np.float64),
        pca_basis=np.asarray(doc["pca_basis"], dtype=np.float64),
        scorer=StumpEnsemble.from_dict(doc["scorer"]),
        threshold=float(doc["threshold"]),
    )
