"""Deterministic rule-based stand-in for the production chat model.

Rules are matched first-rule-wins against the request tag or the last
user message; the simulator and the whole test suite run on this
backend, so a rules file fully scripts a session.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from triagekit.adapters.base import CompletionRequest


@dataclass(frozen=True)
class ScriptedRule:
    """One matcher/reply pair.

    ``tag`` matches the request tag exactly; ``contains`` matches
    case-insensitively against the last user message. A rule with both
    set requires both to hold; a rule with neither never matches.
    """

    reply: str
    tag: str | None = None
    contains: str | None = None

    def matches(self, request: CompletionRequest) -> bool:
        if self.tag is None and self.contains is None:
            return False
        if self.tag is not None and request.tag != self.tag:
            return False
        if self.contains is not None:
            last = request.messages.last_user_message() or ""
            if self.contains.lower() not in last.lower():
                return False
        return True


class ScriptedStubBackend:
    def __init__(self, rules: list[ScriptedRule], default_reply: str = "") -> None:
        self.rules = list(rules)
        self.default_reply = default_reply
        self.calls = 0

    def complete(self, request: CompletionRequest) -> str:
        self.calls += 1
        for rule in self.rules:
            if rule.matches(request):
                return rule.reply
        return self.default_reply


def load_stub_rules(path: str | Path) -> ScriptedStubBackend:
    """Load a rules file: {"default": str, "rules": [{tag?, contains?, reply}]}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    rules = [
        ScriptedRule(reply=r["reply"], tag=r.get("tag"), contains=r.get("contains"))
        for r in doc.get("rules", [])
    ]
    return ScriptedStubBackend(rules, default_reply=doc.get("default", ""))
