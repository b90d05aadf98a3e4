"""Shared conversation primitives: messages, transcripts, session context.

Every service in the package consumes dialogue history through these
types, so they stay deliberately small: a message is a (role, text)
pair and a transcript is a chronologically ordered tuple of messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Iterable

USER = "user"
SYSTEM = "system"

_ROLES = (USER, SYSTEM)


@dataclass(frozen=True)
class Message:
    role: str
    text: str

    def __post_init__(self) -> None:
        if self.role not in _ROLES:
            raise ValueError(f"unknown role {self.role!r}; expected one of {_ROLES}")


@dataclass(frozen=True)
class Transcript:
    """Ordered user/system message history."""

    messages: tuple[Message, ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "Transcript":
        return cls(tuple(Message(role, text) for role, text in pairs))

    def append(self, role: str, text: str) -> "Transcript":
        return Transcript(self.messages + (Message(role, text),))

    def user_messages(self) -> list[str]:
        return [m.text for m in self.messages if m.role == USER]

    def system_messages(self) -> list[str]:
        return [m.text for m in self.messages if m.role == SYSTEM]

    def last_user_message(self) -> str | None:
        for m in reversed(self.messages):
            if m.role == USER:
                return m.text
        return None

    def __len__(self) -> int:
        return len(self.messages)

    def __iter__(self):
        return iter(self.messages)


def flatten_chat(history: Transcript) -> str:
    """Join a transcript into one role-prefixed string, newline separated.

    Deterministic: ``[user:"a", system:"b"]`` becomes ``"user: a\\nsystem: b"``.
    """
    return "\n".join(f"{m.role}: {m.text}" for m in history.messages)


@dataclass(frozen=True)
class SessionContext:
    """Per-session user facts carried alongside the transcript.

    ``sex`` is stored opaquely as supplied by the caller; the engine
    never interprets its encoding.
    """

    age: int | None = None
    sex: bool | None = None
    facts: dict[str, Any] = field(default_factory=dict)

    def with_fact(self, key: str, value: Any) -> "SessionContext":
        merged = dict(self.facts)
        merged[key] = value
        return replace(self, facts=merged)
