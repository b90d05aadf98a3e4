#!/usr/bin/env python3
"""Walk through the dialogue graph machinery on a toy triage graph.

Builds a three-state graph, runs a few turns against it, exercises the
fallback to the default state, and finishes with the structural
validator and a save/load round trip.
"""

import tempfile

from triagekit.fsm.engine import TurnInput, run_turn
from triagekit.fsm.graph import (
    ActionOutput,
    ActionRegistry,
    ConditionRegistry,
    build_graph,
    load_graph,
    save_graph,
)
from triagekit.fsm.validate import validate_graph

conditions = ConditionRegistry(
    {
        "always_true": lambda turn: True,
        "is_question": lambda turn: turn.message.strip().endswith("?"),
        "mentions_pain": lambda turn: "pain" in turn.message.lower(),
    }
)

actions = ActionRegistry(
    {
        "ask": lambda turn: ActionOutput(text="Where does it hurt?"),
        "answer": lambda turn: ActionOutput(text="Let me explain..."),
        "wrap_up": lambda turn: ActionOutput(text="Take care!"),
    }
)

graph = build_graph(
    states=["Ask", "Answer", "Done"],
    transitions=[
        ("Ask", ["is_question"], "Answer", 0),
        ("Ask", ["mentions_pain"], "Ask", 1),
        ("Answer", ["always_true"], "Done", 0),
    ],
    initial_state="Ask",
    default_state="Done",
    answer_state="Done",
    final_states=["Ask", "Answer"],
    actions={"Ask": "ask", "Answer": "answer", "Done": "wrap_up"},
    conditions=conditions,
    action_registry=actions,
)

print("== one turn per input ==")
for message in ["my knee pain is back", "is that serious?", "thanks"]:
    output, state, trace = run_turn(graph, "Ask", TurnInput(message))
    print(f"{message!r} -> path {trace.path()} ({trace.terminated_by.value}): {output.text}")

print("\n== structural validation ==")
report = validate_graph(graph)
print(report.summary())

print("\n== file round trip ==")
with tempfile.NamedTemporaryFile(suffix=".json") as handle:
    save_graph(graph, handle.name)
    reloaded = load_graph(handle.name, conditions, actions)
    output, state, _ = run_turn(reloaded, "Ask", TurnInput("is it serious?"))
    print(f"reloaded graph answered from state {state}: {output.text}")
