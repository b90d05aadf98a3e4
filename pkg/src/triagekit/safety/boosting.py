"""Gradient-boosted depth-1 regression stumps on logistic loss.

The ensemble is additive: raw(x) = base + sum of stump outputs, score =
sigmoid(raw). Each round fits one stump to the loss gradient with
Newton leaf values; the step is halved until the training loss does not
increase, so the loss trajectory is non-increasing by construction.
The ensemble is plain data (JSON-serializable), so externally trained
stump lists can be dropped in behind the same interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-12


def sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def log_loss(raw: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(sigmoid(raw), _EPS, 1 - _EPS)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


@dataclass(frozen=True)
class Stump:
    feature: int
    threshold: float
    left_value: float   # emitted when x[feature] <= threshold
    right_value: float

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.where(x[:, self.feature] <= self.threshold, self.left_value, self.right_value)


@dataclass
class StumpEnsemble:
    base_score: float = 0.0
    stumps: list[Stump] = field(default_factory=list)
    train_losses: list[float] = field(default_factory=list)

    def raw(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.full(x.shape[0], self.base_score, dtype=np.float64)
        for stump in self.stumps:
            out += stump.predict(x)
        return out

    def score(self, x: np.ndarray) -> np.ndarray:
        return sigmoid(self.raw(x))

    def to_dict(self) -> dict:
        return {
            "base_score": self.base_score,
            "stumps": [
                [s.feature, s.threshold, s.left_value, s.right_value] for s in self.stumps
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StumpEnsemble":
        return cls(
            base_score=float(doc["base_score"]),
            stumps=[Stump(int(f), float(t), float(l), float(r)) for f, t, l, r in doc["stumps"]],
        )


def _best_stump(x: np.ndarray, grad: np.ndarray, hess: np.ndarray) -> Stump:
    """Exhaustive search over features and split midpoints for the Newton stump."""
    best: Stump | None = None
    best_gain = -np.inf
    total_g, total_h = grad.sum(), hess.sum()
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind="stable")
        col = x[order, j]
        g_cum = np.cumsum(grad[order])
        h_cum = np.cumsum(hess[order])
        boundaries = np.flatnonzero(np.diff(col) > 0)
        for b in boundaries:
            g_left, h_left = g_cum[b], h_cum[b]
            g_right, h_right = total_g - g_left, total_h - h_left
            gain = g_left**2 / (h_left + _EPS) + g_right**2 / (h_right + _EPS)
            if gain > best_gain:
                best_gain = gain
                best = Stump(
                    feature=j,
                    threshold=float((col[b] + col[b + 1]) / 2.0),
                    left_value=float(g_left / (h_left + _EPS)),
                    right_value=float(g_right / (h_right + _EPS)),
                )
    if best is None:
        # All columns constant: a single Newton leaf.
        value = float(total_g / (total_h + _EPS))
        best = Stump(feature=0, threshold=np.inf, left_value=value, right_value=value)
    return best


def fit_boosted_stumps(
    x: np.ndarray,
    y: np.ndarray,
    rounds: int,
    learning_rate: float = 0.5,
) -> StumpEnsemble:
    """Boost ``rounds`` stumps; training loss is non-increasing per round."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape[0] != y.size or y.size < 2:
        raise ValueError("need matching x/y with at least 2 examples")
    classes = set(np.unique(y).tolist())
    if not classes <= {0.0, 1.0} or len(classes) < 2:
        raise ValueError("labels must contain both classes 0 and 1")

    rate = float(np.clip(np.mean(y), _EPS, 1 - _EPS))
    ensemble = StumpEnsemble(base_score=float(np.log(rate / (1 - rate))))
    raw = ensemble.raw(x)
    loss = log_loss(raw, y)
    ensemble.train_losses.append(loss)

    for _ in range(rounds):
        p = sigmoid(raw)
        grad = y - p
        hess = p * (1 - p)
        stump = _best_stump(x, grad, hess)
        step = learning_rate
        # Halve the step until the loss does not increase (zero stump as last resort).
        for _ in range(30):
            candidate = Stump(
                stump.feature, stump.threshold, stump.left_value * step, stump.right_value * step
            )
            new_raw = raw + candidate.predict(x)
            new_loss = log_loss(new_raw, y)
            if new_loss <= loss:
                break
            step /= 2.0
        else:
            candidate = Stump(stump.feature, stump.threshold, 0.0, 0.0)
            new_raw, new_loss = raw, loss
        ensemble.stumps.append(candidate)
        raw, loss = new_raw, new_loss
        ensemble.train_losses.append(loss)
    return ensemble
