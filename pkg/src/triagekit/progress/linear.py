"""Linear text classifiers over tf-idf plus contextual embeddings.

Two deployments of the same machinery:
  * question detection scores a single user message;
  * readiness scores the whole collected history, with an explicit
    user-turn-count feature appended, and carries a linear regression
    head that predicts how many question/answer turns remain.

Training is full-batch gradient descent on L2-regularized logistic
loss with step halving, so the recorded loss trajectory never
increases. The regression head is an ordinary least-squares fit over
the same features.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from triagekit.adapters.embedding import EmbedderSpec, embed
from triagekit.transcript import Transcript, flatten_chat
from triagekit.safety.features import TfidfVocabulary

KIND_QUESTION = "question"
KIND_READINESS = "readiness"

BUNDLE_VERSION = 1

_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


@dataclass(frozen=True)
class LinearTextModel:
    kind: str
    vocab: TfidfVocabulary
    embedder: EmbedderSpec
    weights: np.ndarray
    bias: float
    decision_threshold: float = 0.5
    regression_weights: np.ndarray | None = None
    regression_bias: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (KIND_QUESTION, KIND_READINESS):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if not 0 < self.decision_threshold < 1:
            raise ValueError("decision_threshold must lie in (0, 1)")
        extras = 1 if self.kind == KIND_READINESS else 0
        expected = len(self.vocab.terms) + self.embedder.dimension + extras
        if self.weights.shape != (expected,):
            raise ValueError(
                f"weights have dimension {self.weights.shape}, features have {expected}"
            )

    def features_for_message(self, message: str) -> np.ndarray:
        return np.concatenate([self.vocab.transform(message), embed(self.embedder, message)])

    def features_for_history(self, history: Transcript) -> np.ndarray:
        text = flatten_chat(history)
        turn_count = float(len(history.user_messages()))
        return np.concatenate(
            [self.vocab.transform(text), embed(self.embedder, text), [turn_count]]
        )

    def score(self, features: np.ndarray) -> float:
        raw = float(features @ self.weights + self.bias)
        return float(np.clip(_sigmoid(np.array(raw)), _EPS, 1 - _EPS))


@dataclass(frozen=True)
class QuestionVerdict:
    is_question: bool
    score: float


@dataclass(frozen=True)
class ReadinessVerdict:
    ready: bool
    score: float
    predicted_remaining_turns: int


def detect_question(message: str, model: LinearTextModel) -> QuestionVerdict:
    """Logistic verdict on whether one message is a clarifying question."""
    if model.kind != KIND_QUESTION:
        raise ValueError("model was not trained for question detection")
    score = model.score(model.features_for_message(message))
    return QuestionVerdict(is_question=score >= model.decision_threshold, score=score)


def estimate_readiness(history: Transcript, model: LinearTextModel) -> ReadinessVerdict:
    """Judge whether the collected history suffices to route the patient."""
    if model.kind != KIND_READINESS:
        raise ValueError("model was not trained for readiness estimation")
    if not history.user_messages():
        raise ValueError("history must contain at least one user message")
    features = model.features_for_history(history)
    score = model.score(features)
    remaining = 0
    if model.regression_weights is not None:
        predicted = float(features @ model.regression_weights + model.regression_bias)
        remaining = max(0, int(round(predicted)))
    return ReadinessVerdict(
        ready=score >= model.decision_threshold,
        score=score,
        predicted_remaining_turns=remaining,
    )


def logistic_loss_and_grad(
    params: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean logistic loss and its gradient; params = [weights..., bias].

    The L2 penalty applies to the weights only, never the bias.
    """
    w, b = params[:-1], params[-1]
    raw = x @ w + b
    p = np.clip(_sigmoid(raw), _EPS, 1 - _EPS)
    loss = float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))
    loss += 0.5 * l2 * float(w @ w)
    residual = p - y
    grad_w = x.T @ residual / len(y) + l2 * w
    grad_b = float(np.mean(residual))
    return loss, np.concatenate([grad_w, [grad_b]])


def _train_logistic(
    x: np.ndarray,
    y: np.ndarray,
    *,
    l2: float,
    learning_rate: float,
    max_epochs: int,
    tol: float,
) -> tuple[np.ndarray, float, list[float]]:
    params = np.zeros(x.shape[1] + 1)
    loss, grad = logistic_loss_and_grad(params, x, y, l2)
    losses = [loss]
    lr = learning_rate
    for _ in range(max_epochs):
        stepped = False
        for _ in range(40):
            candidate = params - lr * grad
            new_loss, new_grad = logistic_loss_and_grad(candidate, x, y, l2)
            if new_loss <= loss:
                stepped = True
                break
            lr /= 2.0
        if not stepped:
            break
        improvement = loss - new_loss
        params, loss, grad = candidate, new_loss, new_grad
        losses.append(loss)
        lr *= 1.1
        if improvement < tol:
            break
    return params, loss, losses


def fit_linear(
    corpus: Sequence,
    kind: str,
    *,
    embedder: EmbedderSpec | None = None,
    decision_threshold: float = 0.5,
    l2: float = 1e-4,
    learning_rate: float = 1.0,
    max_epochs: int = 500,
    tol: float = 1e-7,
) -> LinearTextModel:
    """Fit a classifier of the given kind.

    ``corpus`` rows are (message, label) for question models and
    (history, label, remaining_turns) for readiness models. Both
    classes must be present.
    """
    if embedder is None:
        embedder = EmbedderSpec()
    if kind == KIND_QUESTION:
        texts = [str(m) for m, _ in corpus]
        labels = np.array([float(lbl) for _, lbl in corpus])
        remaining = None
    elif kind == KIND_READINESS:
        texts = [flatten_chat(h) for h, _, _ in corpus]
        labels = np.array([float(lbl) for _, lbl, _ in corpus])
        remaining = np.array([float(r) for _, _, r in corpus])
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    if len(set(labels.tolist())) < 2:
        raise ValueError("corpus must contain both classes")

    vocab = TfidfVocabulary.fit(texts)
    blocks = [np.concatenate([vocab.transform(t), embed(embedder, t)]) for t in texts]
    if kind == KIND_READINESS:
        counts = [float(len(h.user_messages())) for h, _, _ in corpus]
        blocks = [np.concatenate([b, [c]]) for b, c in zip(blocks, counts)]
    x = np.stack(blocks)

    params, _, _ = _train_logistic(
        x, labels, l2=l2, learning_rate=learning_rate, max_epochs=max_epochs, tol=tol
    )

    reg_w: np.ndarray | None = None
    reg_b = 0.0
    if remaining is not None:
        design = np.column_stack([x, np.ones(len(x))])
        solution, *_ = np.linalg.lstsq(design, remaining, rcond=None)
        reg_w, reg_b = solution[:-1], float(solution[-1])

    return LinearTextModel(
        kind=kind,
        vocab=vocab,
        embedder=embedder,
        weights=params[:-1],
        bias=float(params[-1]),
        decision_threshold=decision_threshold,
        regression_weights=reg_w,
        regression_bias=reg_b,
    )


def constant_relevance_model(embedder: EmbedderSpec | None = None) -> LinearTextModel:
    """Zero-weight message scorer: every input scores 0.5, so callers
    ranking with it fall back to their own tie-breaking order."""
    embedder = embedder or EmbedderSpec()
    return LinearTextModel(
        kind=KIND_QUESTION,
        vocab=TfidfVocabulary(terms=("question",), idf=(1.0,)),
        embedder=embedder,
        weights=np.zeros(1 + embedder.dimension),
        bias=0.0,
    )


def save_linear_model(model: LinearTextModel, path: str | Path) -> None:
    doc = {
        "version": BUNDLE_VERSION,
        "kind": model.kind,
        "vocab": {"terms": list(model.vocab.terms), "idf": list(model.vocab.idf)},
        "embedder": {"kind": model.embedder.kind, "dimension": model.embedder.dimension},
        "weights": model.weights.tolist(),
        "bias": model.bias,
        "decision_threshold": model.decision_threshold,
        "regression_weights": (
            model.regression_weights.tolist() if model.regression_weights is not None else None
        ),
        "regression_bias": model.regression_bias,
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_linear_model(path: str | Path) -> LinearTextModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("version") != BUNDLE_VERSION:
        raise ValueError(f"not a version-{BUNDLE_VERSION} linear model bundle")
    reg = doc.get("regression_weights")
    return LinearTextModel(
        kind=doc["kind"],
        vocab=TfidfVocabulary(
            terms=tuple(doc["vocab"]["terms"]), idf=tuple(doc["vocab"]["idf"])
        ),
        embedder=EmbedderSpec(
            kind=doc["embedder"]["kind"], dimension=int(doc["embedder"]["dimension"])
        ),
        weights=np.asarray(doc["weights"], dtype=np.float64),
        bias=float(doc["bias"]),
        decision_threshold=float(doc["decision_threshold"]),
        regression_weights=None if reg is None else np.asarray(reg, dtype=np.float64),
        regression_bias=float(doc.get("regression_bias", 0.0)),
    )
