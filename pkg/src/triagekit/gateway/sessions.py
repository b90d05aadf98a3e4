"""Session persistence with atomic per-key read-modify-write.

One record per dialogue key; the transcript is append-only. The
in-memory store backs tests and single-process deployments; the file
store adds write-through JSON persistence with atomic replacement.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Protocol

from triagekit.transcript import SessionContext, Transcript


@dataclass(frozen=True)
class SessionRecord:
    key: str
    cursor: str
    transcript: Transcript = field(default_factory=Transcript)
    context: SessionContext = field(default_factory=SessionContext)
    updated_at: float = 0.0
    turns: int = 0

    def advanced(
        self, cursor: str, user_text: str, system_text: str
    ) -> "SessionRecord":
        """One completed turn: both messages appended, cursor moved."""
        transcript = self.transcript.append("user", user_text).append(
            "system", system_text
        )
        return replace(
            self,
            cursor=cursor,
            transcript=transcript,
            updated_at=time.time(),
            turns=self.turns + 1,
        )


class SessionStore(Protocol):
    def get(self, key: str) -> SessionRecord | None:
        ...

    def put(self, record: SessionRecord) -> None:
        ...


class InMemorySessionStore:
    def __init__(self) -> None:
        self._records: dict[str, SessionRecord] = {}
        self._lock = threading.Lock()

    def get(self, key: str) -> SessionRecord | None:
        with self._lock:
            return self._records.get(key)

    def put(self, record: SessionRecord) -> None:
        with self._lock:
            self._records[record.key] = record

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)


def _record_to_dict(record: SessionRecord) -> dict:
    return {
        "key": record.key,
        "cursor": record.cursor,
        "transcript": [[m.role, m.text] for m in record.transcript],
        "context": {
            "age": record.context.age,
            "sex": record.context.sex,
            "facts": record.context.facts,
        },
        "updated_at": record.updated_at,
        "turns": record.turns,
    }


def _record_from_dict(doc: dict) -> SessionRecord:
    return SessionRecord(
        key=doc["key"],
        cursor=doc["cursor"],
        transcript=Transcript.from_pairs([(r, t) for r, t in doc["transcript"]]),
        context=SessionContext(
            age=doc["context"].get("age"),
            sex=doc["context"].get("sex"),
            facts=dict(doc["context"].get("facts", {})),
        ),
        updated_at=float(doc.get("updated_at", 0.0)),
        turns=int(doc.get("turns", 0)),
    )


class FileSessionStore:
    """Write-through store persisted as one JSON document."""

    def __init__(self, path: str | Path) -> None:
        self._path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, SessionRecord] = {}
        if self._path.exists():
            doc = json.loads(self._path.read_text(encoding="utf-8"))
            self._records = {
                key: _record_from_dict(value) for key, value in doc.items()
            }

    def get(self, key: str) -> SessionRecord | None:
        with self._lock:
            return self._records.get(key)

    def put(self, record: SessionRecord) -> None:
        with self._lock:
            self._records[record.key] = record
            doc = {key: _record_to_dict(r) for key, r in self._records.items()}
            tmp = self._path.with_suffix(".tmp")
            tmp.write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")
            os.replace(tmp, self._path)

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)


class TurnLocks:
    """Per-session turn serialization; acquisition never blocks."""

    def __init__(self) -> None:
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def try_acquire(self, key: str) -> bool:
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        return lock.acquire(blocking=False)

    def release(self, key: str) -> None:
        with self._guard:
            lock = self._locks.get(key)
        if lock is not None:
            lock.release()
