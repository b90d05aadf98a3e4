from __future__ import annotations

import random

import pytest

from triagekit.evalkit.fixtures import FixtureSpec, generate_fixtures
from triagekit.progress.linear import KIND_QUESTION, KIND_READINESS, fit_linear
from triagekit.safety.emergency import train_emergency

FIXTURE_SEED = 7
SPLIT_SEED = 13

CRITICAL_WORDS = [
    "chest pain",
    "cannot breathe",
    "bleeding",
    "consciousness",
    "slurred",
    "vomiting blood",
]


@pytest.fixture(scope="session")
def fixture_corpus():
    return generate_fixtures(FIXTURE_SEED, FixtureSpec())


def split_half(records):
    """Deterministic shuffled split keeping both classes on both sides."""
    indices = list(range(len(records)))
    random.Random(SPLIT_SEED).shuffle(indices)
    cut = len(indices) // 2
    train = [records[i] for i in sorted(indices[:cut])]
    held = [records[i] for i in sorted(indices[cut:])]
    return train, held


@pytest.fixture(scope="session")
def emergency_split(fixture_corpus):
    return split_half(fixture_corpus.emergency_records())


@pytest.fixture(scope="session")
def emergency_model(emergency_split):
    train, _ = emergency_split
    return train_emergency(
        chats=[r.transcript for r in train],
        labels=[r.emergency for r in train],
        llm_flags=[r.llm_flag for r in train],
        critical_words=CRITICAL_WORDS,
        rounds=60,
    )


@pytest.fixture(scope="session")
def question_split(fixture_corpus):
    return split_half(fixture_corpus.question_records())


@pytest.fixture(scope="session")
def question_model(question_split):
    train, _ = question_split
    rows = [(r.transcript.user_messages()[0], r.question) for r in train]
    return fit_linear(rows, KIND_QUESTION)


@pytest.fixture(scope="session")
def readiness_split(fixture_corpus):
    return split_half(fixture_corpus.readiness_records())


@pytest.fixture(scope="session")
def readiness_model(readiness_split):
    train, _ = readiness_split
    rows = [(r.transcript, r.ready, r.remaining_turns) for r in train]
    return fit_linear(rows, KIND_READINESS)
