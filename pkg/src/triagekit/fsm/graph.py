"""Dialogue graph model and its declarative file format.

A graph is data: states, prioritized transitions referencing condition
names, and one action name per state. Predicates and actions are bound
through registries when the graph is constructed, so every unresolved
name or structural defect is a load-time :class:`GraphConfigError`,
never a runtime surprise. Graphs are immutable once built and safe to
share across concurrent sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Callable

if TYPE_CHECKING:
    from triagekit.fsm.engine import TurnInput

SCHEMA_VERSION = 1


class GraphConfigError(ValueError):
    """Structural or binding problem detected while loading a graph."""


@dataclass(frozen=True)
class ActionOutput:
    """What a state action produces: reply text plus optional payload."""

    text: str
    payload: tuple | None = None


Predicate = Callable[["TurnInput"], bool]
ActionFn = Callable[["TurnInput"], ActionOutput]


@dataclass(frozen=True)
class Condition:
    """A named predicate; the name is the registry key it resolved from."""

    id: str
    predicate: Predicate = field(compare=False)

    def __call__(self, turn: "TurnInput") -> bool:
        return bool(self.predicate(turn))


@dataclass(frozen=True)
class Transition:
    source: str
    conditions: tuple[Condition, ...]
    target: str
    priority: int = 0

    def __post_init__(self) -> None:
        if not self.conditions:
            raise GraphConfigError(
                f"transition {self.source} -> {self.target} has no conditions"
            )

    @property
    def condition_ids(self) -> frozenset[str]:
        return frozenset(c.id for c in self.conditions)


class ConditionRegistry:
    def __init__(self, predicates: dict[str, Predicate] | None = None) -> None:
        self._predicates: dict[str, Predicate] = dict(predicates or {})

    def register(self, name: str, predicate: Predicate) -> None:
        self._predicates[name] = predicate

    def resolve(self, name: str) -> Condition:
        if name not in self._predicates:
            raise GraphConfigError(f"unknown condition {name!r}")
        return Condition(id=name, predicate=self._predicates[name])

    def names(self) -> set[str]:
        return set(self._predicates)


class ActionRegistry:
    def __init__(self, actions: dict[str, ActionFn] | None = None) -> None:
        self._actions: dict[str, ActionFn] = dict(actions or {})

    def register(self, name: str, action: ActionFn) -> None:
        self._actions[name] = action

    def resolve(self, name: str) -> ActionFn:
        if name not in self._actions:
            raise GraphConfigError(f"unknown action {name!r}")
        return self._actions[name]

    def names(self) -> set[str]:
        return set(self._actions)


def builtin_conditions() -> ConditionRegistry:
    """Registry preloaded with the trivial structural predicates."""
    return ConditionRegistry(
        {
            "always_true": lambda turn: True,
            "always_false": lambda turn: False,
            "empty_message": lambda turn: not turn.message.strip(),
        }
    )


@dataclass(frozen=True)
class FsmGraph:
    """States, conditioned transitions, and designated control states.

    ``default_state`` receives every input that triggers no transition;
    ``answer_state`` is where a resolved consultation lands; reaching a
    final state, the answer state, or ``max_attempts`` steps ends the
    per-turn execution loop.
    """

    states: frozenset[str]
    transitions: tuple[Transition, ...]
    initial_state: str
    default_state: str
    answer_state: str
    final_states: frozenset[str]
    actions: dict[str, str]
    action_impls: dict[str, ActionFn] = field(compare=False, repr=False)
    max_attempts: int = 3
    subgraphs: dict[str, "FsmGraph"] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.states:
            raise GraphConfigError("graph has no states")
        if any(not s for s in self.states):
            raise GraphConfigError("state names must be non-empty")
        for designated in (self.initial_state, self.default_state, self.answer_state):
            if designated not in self.states:
                raise GraphConfigError(f"designated state {designated!r} not in states")
        if not self.final_states <= self.states:
            raise GraphConfigError("final states must be a subset of states")
        if self.max_attempts < 1:
            raise GraphConfigError("max_attempts must be >= 1")
        seen_priorities: dict[tuple[str, int], Transition] = {}
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise GraphConfigError(
                    f"transition {t.source} -> {t.target} references unknown states"
                )
            key = (t.source, t.priority)
            if key in seen_priorities:
                raise GraphConfigError(
                    f"transitions from {t.source!r} share priority {t.priority}"
                )
            seen_priorities[key] = t
        for state in self.states:
            if state not in self.actions and state not in self.subgraphs:
                raise GraphConfigError(f"state {state!r} has neither action nor subgraph")
        for state, name in self.actions.items():
            if state not in self.states:
                raise GraphConfigError(f"action bound to unknown state {state!r}")
            if state not in self.action_impls:
                raise GraphConfigError(f"action {name!r} for {state!r} is unresolved")
        for state in self.subgraphs:
            if state not in self.states:
                raise GraphConfigError(f"subgraph bound to unknown state {state!r}")

    def transitions_from(self, state: str) -> list[Transition]:
        return sorted(
            (t for t in self.transitions if t.source == state), key=lambda t: t.priority
        )


def build_graph(
    *,
    states: list[str],
    transitions: list[tuple[str, list[str], str, int]],
    initial_state: str,
    default_state: str,
    answer_state: str,
    final_states: list[str],
    actions: dict[str, str],
    conditions: ConditionRegistry,
    action_registry: ActionRegistry,
    max_attempts: int = 3,
    subgraphs: dict[str, FsmGraph] | None = None,
) -> FsmGraph:
    """Bind names through the registries and construct a validated graph."""
    bound = tuple(
        Transition(
            source=src,
            conditions=tuple(conditions.resolve(name) for name in cond_names),
            target=dst,
            priority=priority,
        )
        for src, cond_names, dst, priority in transitions
    )
    impls = {state: action_registry.resolve(name) for state, name in actions.items()}
    return FsmGraph(
        states=frozenset(states),
        transitions=bound,
        initial_state=initial_state,
        default_state=default_state,
        answer_state=answer_state,
        final_states=frozenset(final_states),
        actions=dict(actions),
        action_impls=impls,
        max_attempts=max_attempts,
        subgraphs=dict(subgraphs or {}),
    )


def graph_to_dict(graph: FsmGraph) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "states": sorted(graph.states),
        "initial_state": graph.initial_state,
        "default_state": graph.default_state,
        "answer_state": graph.answer_state,
        "final_states": sorted(graph.final_states),
        "max_attempts": graph.max_attempts,
        "actions": {state: graph.actions[state] for state in sorted(graph.actions)},
        "transitions": [
            {
                "source": t.source,
                "conditions": [c.id for c in t.conditions],
                "target": t.target,
                "priority": t.priority,
            }
            for t in graph.transitions
        ],
        "subgraphs": {
            state: graph_to_dict(sub) for state, sub in sorted(graph.subgraphs.items())
        },
    }


def graph_from_dict(
    doc: dict, conditions: ConditionRegistry, actions: ActionRegistry
) -> FsmGraph:
    if doc.get("version") != SCHEMA_VERSION:
        raise GraphConfigError(
            f"unsupported graph schema version {doc.get('version')!r}"
        )
    subgraphs = {
        state: graph_from_dict(sub, conditions, actions)
        for state, sub in doc.get("subgraphs", {}).items()
    }
    return build_graph(
        states=list(doc["states"]),
        transitions=[
            (t["source"], list(t["conditions"]), t["target"], int(t.get("priority", 0)))
            for t in doc["transitions"]
        ],
        initial_state=doc["initial_state"],
        default_state=doc["default_state"],
        answer_state=doc["answer_state"],
        final_states=list(doc["final_states"]),
        actions=dict(doc.get("actions", {})),
        conditions=conditions,
        action_registry=actions,
        max_attempts=int(doc.get("max_attempts", 3)),
        subgraphs=subgraphs,
    )


def save_graph(graph: FsmGraph, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(graph_to_dict(graph), indent=2, ensure_ascii=False), encoding="utf-8"
    )


def load_graph(
    path: str | Path, conditions: ConditionRegistry, actions: ActionRegistry
) -> FsmGraph:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GraphConfigError(f"graph file is not valid JSON: {exc}") from exc
    return graph_from_dict(doc, conditions, actions)
