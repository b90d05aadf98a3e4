"""Pluggable generation and embedding backends.

The rest of the package talks to language models exclusively through
:class:`~triagekit.adapters.base.ChatBackend` and
:func:`~triagekit.adapters.embedding.embed`, so the full test suite runs
against the deterministic scripted stub with no network access.
"""

from triagekit.adapters.base import (
    AdapterError,
    ChatBackend,
    CompletionRequest,
)
from triagekit.adapters.embedding import EmbedderSpec, HashedNgramEmbedder, embed
from triagekit.adapters.flags import llm_critical_flag
from triagekit.adapters.remote import RemoteChatBackend, RemoteEmbedder
from triagekit.adapters.scripted import ScriptedRule, ScriptedStubBackend, load_stub_rules

__all__ = [
    "AdapterError",
    "ChatBackend",
    "CompletionRequest",
    "EmbedderSpec",
    "HashedNgramEmbedder",
    "RemoteChatBackend",
    "RemoteEmbedder",
    "ScriptedRule",
    "ScriptedStubBackend",
    "embed",
    "llm_critical_flag",
    "load_stub_rules",
]
