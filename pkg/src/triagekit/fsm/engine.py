"""Turn execution semantics.

One user turn drives a bounded loop: pick the lowest-priority triggered
transition (the default state when nothing triggers), run the target
state's action, and repeat until the walk reaches a final state, the
answer state, or the attempt bound. Composite states delegate to their
subgraph, which runs from its own initial state until it terminates,
and contribute a single step to the parent trace.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Callable

from triagekit.fsm.graph import FsmGraph, Transition
from triagekit.transcript import SessionContext, Transcript

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TurnInput:
    """Current user message plus everything known about the session.

    ``memo`` caches per-turn service verdicts so several conditions
    backed by the same classifier cost one call per turn.
    """

    message: str
    history: Transcript = field(default_factory=Transcript)
    context: SessionContext = field(default_factory=SessionContext)
    memo: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def full_transcript(self) -> Transcript:
        """History with the current user message appended."""
        return self.history.append("user", self.message)

    def once(self, key: str, compute: Callable[[], Any]) -> Any:
        if key not in self.memo:
            self.memo[key] = compute()
        return self.memo[key]


@dataclass(frozen=True)
class SystemOutput:
    text: str
    emitted_state: str
    payload: tuple | None = None


class TerminationReason(enum.Enum):
    FINAL = "final"
    ATTEMPTS_EXHAUSTED = "attempts_exhausted"
    CORRECT_ANSWER = "correct_answer"


@dataclass(frozen=True)
class StepTrace:
    visited: tuple[tuple[str, SystemOutput], ...]
    terminated_by: TerminationReason

    def path(self) -> list[str]:
        return [state for state, _ in self.visited]


def is_triggered(transition: Transition, turn: TurnInput) -> bool:
    """Conjunction of the transition's condition predicates."""
    return all(condition(turn) for condition in transition.conditions)


def next_state(graph: FsmGraph, state: str, turn: TurnInput) -> str:
    """Target of the lowest-priority triggered transition, else the default state."""
    if state not in graph.states:
        raise ValueError(f"state {state!r} is not in the graph")
    for transition in graph.transitions_from(state):
        if is_triggered(transition, turn):
            return transition.target
    return graph.default_state


def state_output(graph: FsmGraph, state: str, turn: TurnInput) -> SystemOutput:
    """Run the state's action; composite states run their subgraph instead."""
    subgraph = graph.subgraphs.get(state)
    if subgraph is not None:
        child_output, child_state, child_trace = run_turn(
            subgraph, subgraph.initial_state, turn
        )
        logger.debug(
            "subgraph of %s ended at %s via %s",
            state,
            child_state,
            child_trace.terminated_by.value,
        )
        return SystemOutput(
            text=child_output.text, emitted_state=state, payload=child_output.payload
        )
    action = graph.action_impls[state]
    result = action(turn)
    return SystemOutput(text=result.text, emitted_state=state, payload=result.payload)


def _termination(graph: FsmGraph, state: str, steps: int) -> TerminationReason:
    if state == graph.answer_state:
        return TerminationReason.CORRECT_ANSWER
    if state in graph.final_states:
        return TerminationReason.FINAL
    if steps >= graph.max_attempts:
        return TerminationReason.ATTEMPTS_EXHAUSTED
    raise AssertionError("termination queried on a non-terminal configuration")


def run_turn(
    graph: FsmGraph, state: str, turn: TurnInput
) -> tuple[SystemOutput, str, StepTrace]:
    """Execute one bounded turn from ``state``; returns (output, state, trace).

    The loop body runs at least once per turn: a fresh user message
    always produces a transition step and a response, even when the
    previous turn parked the session on a final state. Afterwards the
    walk continues until it reaches the answer state, a final state, or
    the attempt bound, and the last output is the turn's response.
    """
    if state not in graph.states:
        raise ValueError(f"state {state!r} is not in the graph")

    visited: list[tuple[str, SystemOutput]] = []
    while True:
        state = next_state(graph, state, turn)
        output = state_output(graph, state, turn)
        visited.append((state, output))
        if (
            state == graph.answer_state
            or state in graph.final_states
            or len(visited) >= graph.max_attempts
        ):
            break
    return output, state, StepTrace(tuple(visited), _termination(graph, state, len(visited)))
