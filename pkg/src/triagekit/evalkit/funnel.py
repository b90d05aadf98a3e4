"""Session-funnel statistics over the gateway's audit log.

The audit log is line-delimited JSON, one record per turn; corrupt
lines are counted and skipped rather than aborting the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable


@dataclass(frozen=True)
class FunnelReport:
    initiated: int
    reached_routing: int
    emergency_flagged: int
    moderated: int
    turns: int
    skipped_lines: int

    @property
    def routing_rate(self) -> float:
        return self.reached_routing / self.initiated if self.initiated else 0.0

    @property
    def emergency_rate(self) -> float:
        return self.emergency_flagged / self.initiated if self.initiated else 0.0

    @property
    def moderation_rate(self) -> float:
        return self.moderated / self.initiated if self.initiated else 0.0

    def to_dict(self) -> dict:
        return {
            "initiated": self.initiated,
            "reached_routing": self.reached_routing,
            "emergency_flagged": self.emergency_flagged,
            "moderated": self.moderated,
            "turns": self.turns,
            "skipped_lines": self.skipped_lines,
            "routing_rate": self.routing_rate,
            "emergency_rate": self.emergency_rate,
            "moderation_rate": self.moderation_rate,
        }


def funnel_stats(lines: Iterable[str]) -> FunnelReport:
    """Aggregate per-session outcomes from audit-log lines."""
    sessions: dict[str, dict[str, bool]] = {}
    turns = 0
    skipped = 0
    for line in lines:
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            key = record["key"]
            path = record.get("path", [])
            if not isinstance(path, list):
                raise TypeError("path must be a list")
        except (json.JSONDecodeError, KeyError, TypeError):
            skipped += 1
            continue
        turns += 1
        status = sessions.setdefault(
            key, {"routing": False, "emergency": False, "moderation": False}
        )
        status["routing"] = status["routing"] or "DiagnosticRouting" in path
        status["emergency"] = status["emergency"] or "Emergency" in path
        status["moderation"] = status["moderation"] or "Moderation" in path
    return FunnelReport(
        initiated=len(sessions),
        reached_routing=sum(1 for s in sessions.values() if s["routing"]),
        emergency_flagged=sum(1 for s in sessions.values() if s["emergency"]),
        moderated=sum(1 for s in sessions.values() if s["moderation"]),
        turns=turns,
        skipped_lines=skipped,
    )


def funnel_stats_from_file(path: str | Path) -> FunnelReport:
    return funnel_stats(Path(path).read_text(encoding="utf-8").splitlines())
