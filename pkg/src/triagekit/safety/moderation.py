"""Topic-keyed blacklist moderation.

Matching is exact token-boundary phrase matching: a listed phrase hits
only when its token sequence appears contiguously in the tokenized
text. Substrings inside longer tokens never match, which keeps the
false-positive rate down. Matching is applied to user input and to
generated output alike.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

_WORD = re.compile(r"\w+", re.UNICODE)


def normalize_phrase(phrase: str) -> str:
    return " ".join(phrase.lower().split())


def _tokens(text: str) -> list[str]:
    return _WORD.findall(text.lower())


@dataclass(frozen=True)
class BlacklistTree:
    """topic name -> set of normalized prohibited words/phrases."""

    topics: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for topic, phrases in self.topics.items():
            if not topic:
                raise ValueError("empty topic name")
            for phrase in phrases:
                if phrase != normalize_phrase(phrase) or not phrase:
                    raise ValueError(
                        f"phrase {phrase!r} in topic {topic!r} is not normalized"
                    )

    @classmethod
    def from_dict(cls, topics: dict[str, list[str] | set[str]]) -> "BlacklistTree":
        return cls(
            {
                topic: frozenset(normalize_phrase(p) for p in phrases if p.strip())
                for topic, phrases in topics.items()
            }
        )


@dataclass(frozen=True)
class ModerationVerdict:
    flagged: bool
    matched: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if self.flagged != bool(self.matched):
            raise ValueError("flagged must mirror non-empty matched list")


def _phrase_occurs(phrase_tokens: list[str], text_tokens: list[str]) -> bool:
    n = len(phrase_tokens)
    if n == 0 or n > len(text_tokens):
        return False
    for i in range(len(text_tokens) - n + 1):
        if text_tokens[i : i + n] == phrase_tokens:
            return True
    return False


def moderate(text: str, blacklist: BlacklistTree) -> ModerationVerdict:
    """Flag ``text`` iff any blacklisted phrase occurs at token boundaries."""
    text_tokens = _tokens(text)
    hits: list[tuple[str, str]] = []
    for topic in sorted(blacklist.topics):
        for phrase in sorted(blacklist.topics[topic]):
            if _phrase_occurs(phrase.split(), text_tokens):
                hits.append((topic, phrase))
    return ModerationVerdict(flagged=bool(hits), matched=tuple(hits))


def load_blacklist(path: str | Path) -> BlacklistTree:
    """Read a blacklist file: JSON object {topic: [phrase, ...]}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ValueError("blacklist file must be a JSON object keyed by topic")
    return BlacklistTree.from_dict(doc)


def save_blacklist(blacklist: BlacklistTree, path: str | Path) -> None:
    doc = {topic: sorted(phrases) for topic, phrases in sorted(blacklist.topics.items())}
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False), encoding="utf-8")
