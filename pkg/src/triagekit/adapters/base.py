"""Backend-agnostic completion contract.

Safety-critical call sites (criticality probe, routing stages) request
``temperature=0`` so the production backend decodes deterministically;
the scripted stub is deterministic regardless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from triagekit.transcript import Transcript


class AdapterError(RuntimeError):
    """Transport or backend failure after the retry budget is spent."""


@dataclass(frozen=True)
class CompletionRequest:
    system_prompt: str
    messages: Transcript
    max_tokens: int = 512
    temperature: float = 0.0
    tag: str = ""

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


@runtime_checkable
class ChatBackend(Protocol):
    """Anything that can answer a completion request with reply text."""

    def complete(self, request: CompletionRequest) -> str:
        ...
