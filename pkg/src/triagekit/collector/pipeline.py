"""Follow-up question selection.

One collection step per turn:
  1. embed the flattened dialogue history;
  2. probe the vector store; a sufficiently similar past dialogue
     (similarity strictly above ``reuse_threshold``) supplies its cached
     questions, skipping generation entirely;
  3. otherwise ask the generation backend for candidate questions;
  4. drop candidates too similar (strictly above ``dup_threshold``) to
     anything already asked this session;
  5. score survivors with the relevance model and return the best one,
     recording the new questions in the store.

All thresholds are strict: equality with the threshold is never a hit
and never a discard. Questions already asked are recovered from the
system side of the transcript, so a session can never be asked a
near-duplicate twice.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from triagekit.adapters.base import AdapterError, ChatBackend, CompletionRequest
from triagekit.adapters.embedding import EmbedderSpec, embed
from triagekit.collector.similarity import cosine_similarity
from triagekit.collector.store import CacheEntry, VectorStore
from triagekit.progress.linear import KIND_QUESTION, LinearTextModel
from triagekit.transcript import Transcript, flatten_chat

logger = logging.getLogger(__name__)

GENERATION_TAG = "collector"

GENERATION_PROMPT = (
    "You are assisting a medical intake interview. Given the conversation so "
    "far, propose {n} short follow-up questions that would clarify the "
    "patient's complaints and history. Reply with one question per line and "
    "nothing else."
)

DEFAULT_FALLBACK_QUESTION = (
    "Could you tell me more about your symptoms: when they started, how "
    "strong they are, and anything that makes them better or worse?"
)


class CollectorError(RuntimeError):
    """Question generation failed after the retry; the caller decides fallback."""


@dataclass(frozen=True)
class CollectorConfig:
    reuse_threshold: float = 0.965
    dup_threshold: float = 0.86
    n_candidates: int = 5
    fallback_question: str = DEFAULT_FALLBACK_QUESTION
    embedder: EmbedderSpec = field(default_factory=EmbedderSpec)

    def __post_init__(self) -> None:
        if not 0 < self.reuse_threshold <= 1 or not 0 < self.dup_threshold <= 1:
            raise ValueError("thresholds must lie in (0, 1]")
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")


@dataclass(frozen=True)
class QuestionCandidate:
    text: str
    relevance_score: float = 0.5
    discarded_as_duplicate: bool = False


def dedup(
    candidates: list[str],
    prior_questions: list[str],
    cfg: CollectorConfig,
) -> list[QuestionCandidate]:
    """Mark candidates whose similarity to any prior question exceeds the bound."""
    prior_vecs = [embed(cfg.embedder, q) for q in prior_questions]
    out: list[QuestionCandidate] = []
    for text in candidates:
        vec = embed(cfg.embedder, text)
        worst = max(
            (cosine_similarity(vec, pv) for pv in prior_vecs), default=-np.inf
        )
        out.append(
            QuestionCandidate(text=text, discarded_as_duplicate=worst > cfg.dup_threshold)
        )
    return out


def rank_and_select(
    candidates: list[QuestionCandidate], relevance_model: LinearTextModel
) -> str | None:
    """Highest-relevance surviving candidate; list order breaks ties."""
    if relevance_model.kind != KIND_QUESTION:
        raise ValueError("relevance model must be a message-level classifier")
    best_text: str | None = None
    best_score = -np.inf
    for candidate in candidates:
        if candidate.discarded_as_duplicate:
            continue
        score = relevance_model.score(relevance_model.features_for_message(candidate.text))
        if score > best_score:
            best_text, best_score = candidate.text, score
    return best_text


def score_candidates(
    candidates: list[QuestionCandidate], relevance_model: LinearTextModel
) -> list[QuestionCandidate]:
    return [
        replace(
            c,
            relevance_score=relevance_model.score(
                relevance_model.features_for_message(c.text)
            ),
        )
        for c in candidates
    ]


def _parse_questions(reply: str) -> list[str]:
    questions = []
    for line in reply.splitlines():
        text = line.strip().lstrip("-*0123456789.) ").strip()
        if text:
            questions.append(text)
    return questions


def _generate_candidates(
    llm: ChatBackend, history: Transcript, cfg: CollectorConfig
) -> list[str]:
    request = CompletionRequest(
        system_prompt=GENERATION_PROMPT.format(n=cfg.n_candidates),
        messages=history,
        temperature=0.0,
        tag=GENERATION_TAG,
    )
    return _parse_questions(llm.complete(request))[: cfg.n_candidates]


def _first_fresh_question(
    questions: tuple[str, ...], asked_vecs: list[np.ndarray], cfg: CollectorConfig
) -> str | None:
    for question in questions:
        vec = embed(cfg.embedder, question)
        worst = max(
            (cosine_similarity(vec, av) for av in asked_vecs), default=-np.inf
        )
        if not worst > cfg.dup_threshold:
            return question
    return None


def collect_step(
    history: Transcript,
    store: VectorStore,
    cfg: CollectorConfig,
    llm: ChatBackend,
    relevance_model: LinearTextModel,
) -> tuple[str, str]:
    """Produce the next follow-up question; returns (question, provenance).

    Provenance is "cache" when a stored dialogue supplied the question
    and "generated" otherwise. Raises :class:`CollectorError` when the
    generation backend fails twice in a row.
    """
    dialogue_vec = embed(cfg.embedder, flatten_chat(history))
    asked = history.system_messages()
    asked_vecs = [embed(cfg.embedder, q) for q in asked]

    entry, sim = store.best_match(dialogue_vec)
    if entry is not None and sim > cfg.reuse_threshold:
        cached = _first_fresh_question(entry.questions, asked_vecs, cfg)
        if cached is not None:
            return cached, "cache"
        logger.debug("cache hit but every stored question was already asked")

    last_error: AdapterError | None = None
    any_generation_succeeded = False
    for _ in range(2):
        try:
            raw_candidates = _generate_candidates(llm, history, cfg)
        except AdapterError as exc:
            last_error = exc
            continue
        any_generation_succeeded = True
        candidates = score_candidates(
            dedup(raw_candidates, asked, cfg), relevance_model
        )
        winner = rank_and_select(candidates, relevance_model)
        if winner is not None:
            survivors = sorted(
                (c for c in candidates if not c.discarded_as_duplicate),
                key=lambda c: -c.relevance_score,
            )
            store.add(
                CacheEntry(
                    dialogue_embedding=dialogue_vec,
                    questions=tuple(c.text for c in survivors),
                    source_id=f"session-{len(store)}",
                )
            )
            return winner, "generated"
    if not any_generation_succeeded:
        raise CollectorError("question generation failed after retry") from last_error
    # Every candidate was a near-duplicate twice over; the generic fallback
    # is only usable if it has not effectively been asked already.
    fallback = _first_fresh_question((cfg.fallback_question,), asked_vecs, cfg)
    if fallback is None:
        raise CollectorError("no fresh question available for this session")
    return fallback, "generated"
