"""Text featurization for the emergency detector.

The feature vector is the concatenation of three blocks:
  1. tf-idf over the flattened chat (tf = raw count,
     idf = ln((1 + N) / (1 + df)) + 1, block L2-normalized),
  2. 0/1 indicators for each configured critical word/phrase,
  3. one 0/1 component from the model-side criticality probe.

Tokenization is lowercase Unicode word boundaries, no stemming.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from triagekit.transcript import Transcript, flatten_chat

_WORD = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _WORD.findall(text.lower())


@dataclass(frozen=True)
class TfidfVocabulary:
    """Ordered term list with idf weights fitted on a training corpus."""

    terms: tuple[str, ...]
    idf: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.terms) != len(self.idf):
            raise ValueError("terms and idf must align")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("duplicate vocabulary term")

    @classmethod
    def fit(cls, documents: list[str]) -> "TfidfVocabulary":
        n_docs = len(documents)
        df: Counter[str] = Counter()
        for doc in documents:
            df.update(set(tokenize(doc)))
        terms = tuple(sorted(df))
        idf = tuple(math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in terms)
        return cls(terms=terms, idf=idf)

    def transform(self, text: str) -> np.ndarray:
        counts = Counter(tokenize(text))
        vec = np.array(
            [counts[t] * w for t, w in zip(self.terms, self.idf)], dtype=np.float64
        )
        norm = float(np.linalg.norm(vec))
        if norm > 0:
            vec /= norm
        return vec


@dataclass(frozen=True)
class FeatureVector:
    tfidf_block: np.ndarray
    ohe_block: np.ndarray
    llm_flag: float

    @property
    def concatenated(self) -> np.ndarray:
        return np.concatenate([self.tfidf_block, self.ohe_block, [self.llm_flag]])

    @property
    def dimension(self) -> int:
        return self.tfidf_block.size + self.ohe_block.size + 1


def _phrase_present(phrase: str, text_tokens: list[str]) -> bool:
    want = tokenize(phrase)
    n = len(want)
    if n == 0 or n > len(text_tokens):
        return False
    return any(text_tokens[i : i + n] == want for i in range(len(text_tokens) - n + 1))


def critical_word_indicators(text: str, critical_words: tuple[str, ...]) -> np.ndarray:
    toks = tokenize(text)
    return np.array(
        [1.0 if _phrase_present(w, toks) else 0.0 for w in critical_words],
        dtype=np.float64,
    )


def featurize(
    history: Transcript,
    vocab: TfidfVocabulary,
    critical_words: tuple[str, ...],
    llm_flag: bool,
) -> FeatureVector:
    """Build the concatenated feature vector for one chat."""
    if not vocab.terms:
        raise ValueError("vocabulary is empty; fit it on a corpus first")
    text = flatten_chat(history)
    return FeatureVector(
        tfidf_block=vocab.transform(text),
        ohe_block=critical_word_indicators(text, critical_words),
        llm_flag=1.0 if llm_flag else 0.0,
    )
