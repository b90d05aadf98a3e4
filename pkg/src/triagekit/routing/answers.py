"""Open-dialogue answering with an output moderation gate.

The reply is generated under the configured medical-domain system
prompt, then screened by the same blacklist used on input. A flagged
reply is regenerated once; if it trips moderation again the configured
safe-refusal text is returned instead, so no released answer ever
contains a blacklisted phrase.
"""

from __future__ import annotations

import logging

from triagekit.adapters.base import AdapterError, ChatBackend, CompletionRequest
from triagekit.safety.moderation import BlacklistTree, moderate
from triagekit.transcript import Transcript

logger = logging.getLogger(__name__)

ANSWER_TAG = "free-dialogue"

DOMAIN_SYSTEM_PROMPT = (
    "You are a careful medical consultation assistant. Answer only health "
    "and medicine questions; for anything else, briefly steer the user back "
    "to describing their symptoms. Never give definitive diagnoses."
)

SAFE_REFUSAL = (
    "I can provide consultations on health and medical issues. Please tell "
    "me more about your symptoms or concerns so that I can offer "
    "appropriate assistance."
)


def answer_free(
    llm: ChatBackend,
    history: Transcript,
    system_prompt: str = DOMAIN_SYSTEM_PROMPT,
    *,
    blacklist: BlacklistTree | None = None,
    safe_refusal: str = SAFE_REFUSAL,
    temperature: float = 0.3,
) -> str:
    """Answer an arbitrary query; moderation is applied before release."""
    blacklist = blacklist or BlacklistTree()
    request = CompletionRequest(
        system_prompt=system_prompt,
        messages=history,
        temperature=temperature,
        tag=ANSWER_TAG,
    )
    for attempt in range(2):
        try:
            reply = llm.complete(request)
        except AdapterError as exc:
            logger.warning("free-dialogue attempt %d failed: %s", attempt + 1, exc)
            continue
        verdict = moderate(reply, blacklist)
        if not verdict.flagged:
            return reply
        logger.info("moderation flagged generated reply on topics %s", verdict.matched)
    return safe_refusal
