"""JSON HTTP boundary: wire codec, session store, per-turn orchestration."""

from triagekit.gateway.service import ConcurrentTurnError, GatewayService
from triagekit.gateway.sessions import (
    FileSessionStore,
    InMemorySessionStore,
    SessionRecord,
)
from triagekit.gateway.wire import (
    OuterContext,
    SystemResponse,
    UserRequest,
    WireFormatError,
    deserialize_request,
    deserialize_response,
    serialize_request,
    serialize_response,
    session_key,
)

__all__ = [
    "ConcurrentTurnError",
    "FileSessionStore",
    "GatewayService",
    "InMemorySessionStore",
    "OuterContext",
    "SessionRecord",
    "SystemResponse",
    "UserRequest",
    "WireFormatError",
    "deserialize_request",
    "deserialize_response",
    "serialize_request",
    "serialize_response",
    "session_key",
]
