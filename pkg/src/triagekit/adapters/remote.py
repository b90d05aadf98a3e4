"""HTTP chat-completion and embedding clients.

Wire protocol (JSON over POST):
    request  {"system": str, "messages": [{"role", "content"}...],
              "max_tokens": int, "temperature": float}
    reply    {"text": str}

Embeddings use {"text": str} -> {"values": [float...]}. Both clients
apply a request timeout and a bounded retry with exponential backoff.
"""

from __future__ import annotations

import logging
import os
import time

import numpy as np
import requests

from triagekit.adapters.base import AdapterError, CompletionRequest

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30.0
DEFAULT_RETRIES = 2


class RemoteChatBackend:
    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        backoff: float = 0.5,
        headers: dict[str, str] | None = None,
        session: requests.Session | None = None,
    ) -> None:
        self.endpoint = endpoint
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.headers = dict(headers or {})
        self._session = session or requests.Session()

    def complete(self, request: CompletionRequest) -> str:
        body = {
            "system": request.system_prompt,
            "messages": [
                {"role": m.role, "content": m.text} for m in request.messages
            ],
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
        }
        last_error: Exception | None = None
        for attempt in range(1 + self.retries):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self._session.post(
                    self.endpoint, json=body, timeout=self.timeout, headers=self.headers
                )
                resp.raise_for_status()
                payload = resp.json()
                text = payload.get("text")
                if not isinstance(text, str):
                    raise AdapterError(f"reply missing 'text': {payload!r}")
                return text
            except AdapterError:
                raise
            except Exception as exc:  # noqa: BLE001 - transport errors vary by stack
                last_error = exc
                logger.warning("completion attempt %d failed: %s", attempt + 1, exc)
        raise AdapterError(f"backend unreachable after {1 + self.retries} attempts") from last_error


class RemoteEmbedder:
    def __init__(
        self,
        endpoint: str,
        dimension: int,
        *,
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ) -> None:
        self.endpoint = endpoint
        self.dimension = dimension
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._session = session or requests.Session()

    @classmethod
    def from_environment(cls, dimension: int) -> "RemoteEmbedder":
        endpoint = os.environ.get("TRIAGEKIT_EMBED_ENDPOINT")
        if not endpoint:
            raise AdapterError("remote embedder requested but TRIAGEKIT_EMBED_ENDPOINT is unset")
        return cls(endpoint, dimension)

    def embed(self, text: str) -> np.ndarray:
        last_error: Exception | None = None
        for attempt in range(1 + self.retries):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self._session.post(
                    self.endpoint, json={"text": text}, timeout=self.timeout
                )
                resp.raise_for_status()
                values = resp.json().get("values")
                vec = np.asarray(values, dtype=np.float64)
                if vec.shape != (self.dimension,):
                    raise AdapterError(
                        f"embedding dimension {vec.shape} != ({self.dimension},)"
                    )
                return vec
            except AdapterError:
                raise
            except Exception as exc:  # noqa: BLE001
                last_error = exc
                logger.warning("embedding attempt %d failed: %s", attempt + 1, exc)
        raise AdapterError(f"embedder unreachable after {1 + self.retries} attempts") from last_error
