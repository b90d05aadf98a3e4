"""Criticality probe: one yes/no question to the chat backend.

The answer feeds the emergency detector as a single binary feature, so
every failure mode degrades to False: the boosted scorer's other
features and the dialogue engine's red-flag transitions stay in charge.
"""

from __future__ import annotations

import logging

from triagekit.adapters.base import AdapterError, ChatBackend, CompletionRequest
from triagekit.transcript import Transcript, flatten_chat

logger = logging.getLogger(__name__)

CRITICALITY_PROMPT = (
    "You are a medical safety screener. Read the conversation and answer "
    "with a single word, yes or no: does the patient describe a condition "
    "that may need emergency care right now?"
)
CRITICALITY_TAG = "criticality"


def _parse_yes_no(reply: str) -> bool | None:
    token = reply.strip().lower().strip(".,!?:;\"'")
    first = token.split()[0] if token.split() else ""
    if first in ("yes", "y"):
        return True
    if first in ("no", "n"):
        return False
    return None


def llm_critical_flag(backend: ChatBackend, history: Transcript) -> bool:
    """Ask the backend whether the condition looks critical; fail-safe False."""
    request = CompletionRequest(
        system_prompt=CRITICALITY_PROMPT,
        messages=Transcript.from_pairs([("user", flatten_chat(history))]),
        max_tokens=8,
        temperature=0.0,
        tag=CRITICALITY_TAG,
    )
    try:
        reply = backend.complete(request)
    except AdapterError as exc:
        logger.warning("criticality probe failed, defaulting to False: %s", exc)
        return False
    parsed = _parse_yes_no(reply)
    if parsed is None:
        logger.warning("unparseable criticality reply %r, defaulting to False", reply)
        return False
    return parsed
