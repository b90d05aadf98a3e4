"""Per-turn orchestration behind the HTTP boundary.

Each request runs exactly one turn: load or create the session, run the
bounded transition loop from the cursor, append exactly one user and
one system message, persist, and map the output to the wire shape. An
empty Text on an unknown key opens the session with the greeting from
the initial state. Turns on the same key are serialized; an overlapping
request fails fast with :class:`ConcurrentTurnError`.

Every turn appends one structured line to the audit log (hashed key,
state path, verdicts), which is the input format of the funnel report.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from pathlib import Path

from triagekit.fsm.clinical import DIAGNOSTIC_ROUTING
from triagekit.fsm.engine import TurnInput, run_turn, state_output
from triagekit.fsm.graph import FsmGraph
from triagekit.gateway.sessions import (
    InMemorySessionStore,
    SessionRecord,
    SessionStore,
    TurnLocks,
)
from triagekit.gateway.wire import (
    SystemResponse,
    UserRequest,
    session_key,
)
from triagekit.transcript import SessionContext

logger = logging.getLogger(__name__)


class ConcurrentTurnError(RuntimeError):
    """A turn for this session is already in flight."""


class GatewayService:
    def __init__(
        self,
        graph: FsmGraph,
        store: SessionStore | None = None,
        *,
        audit_log_path: str | Path | None = None,
        results_state: str = DIAGNOSTIC_ROUTING,
    ) -> None:
        self.graph = graph
        self.store = store if store is not None else InMemorySessionStore()
        self.results_state = results_state
        self._locks = TurnLocks()
        self._audit_path = Path(audit_log_path) if audit_log_path else None
        self._audit_lock = threading.Lock()

    def handle_request(self, request: UserRequest) -> SystemResponse:
        key = session_key(request.outer_context)
        if not self._locks.try_acquire(key):
            raise ConcurrentTurnError(f"turn already in flight for {key!r}")
        try:
            return self._run_turn(key, request)
        finally:
            self._locks.release(key)

    def _run_turn(self, key: str, request: UserRequest) -> SystemResponse:
        record = self.store.get(key)
        opened = record is None
        if record is None:
            record = SessionRecord(
                key=key,
                cursor=self.graph.initial_state,
                context=SessionContext(
                    age=request.outer_context.age, sex=request.outer_context.sex
                ),
            )

        turn = TurnInput(
            message=request.text, history=record.transcript, context=record.context
        )
        if opened and not request.text.strip():
            # Session-open ping: greet from the initial state, no transition.
            output = state_output(self.graph, self.graph.initial_state, turn)
            path = [self.graph.initial_state]
            terminated_by = "opened"
            cursor = self.graph.initial_state
        else:
            output, cursor, trace = run_turn(self.graph, record.cursor, turn)
            path = trace.path()
            terminated_by = trace.terminated_by.value

        self.store.put(record.advanced(cursor, request.text, output.text))
        self._audit(key, record.turns + 1, opened, path, terminated_by, turn)

        results = output.payload if output.emitted_state == self.results_state else None
        return SystemResponse(text=output.text, results=tuple(results or ()))

    def _audit(
        self,
        key: str,
        turn_number: int,
        opened: bool,
        path: list[str],
        terminated_by: str,
        turn: TurnInput,
    ) -> None:
        verdicts = {}
        for name in ("moderation", "emergency", "readiness", "question"):
            if name in turn.memo:
                verdict = turn.memo[name]
                flag = getattr(
                    verdict,
                    "flagged",
                    getattr(
                        verdict,
                        "critical",
                        getattr(verdict, "ready", getattr(verdict, "is_question", None)),
                    ),
                )
                verdicts[name] = bool(flag)
        line = {
            "ts": time.time(),
            "key": hashlib.sha256(key.encode("utf-8")).hexdigest()[:16],
            "turn": turn_number,
            "opened": opened,
            "path": path,
            "final_state": path[-1] if path else None,
            "terminated_by": terminated_by,
            "verdicts": verdicts,
        }
        if self._audit_path is None:
            logger.debug("audit %s", line)
            return
        with self._audit_lock:
            with self._audit_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(line, ensure_ascii=False) + "\n")
