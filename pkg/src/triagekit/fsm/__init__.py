"""Finite-state dialogue engine: graph model, turn execution, validation."""

from triagekit.fsm.engine import (
    StepTrace,
    SystemOutput,
    TerminationReason,
    TurnInput,
    is_triggered,
    next_state,
    run_turn,
    state_output,
)
from triagekit.fsm.graph import (
    ActionOutput,
    ActionRegistry,
    Condition,
    ConditionRegistry,
    FsmGraph,
    GraphConfigError,
    Transition,
    builtin_conditions,
    graph_from_dict,
    graph_to_dict,
    load_graph,
    save_graph,
)
from triagekit.fsm.validate import ValidationReport, validate_graph

__all__ = [
    "ActionOutput",
    "ActionRegistry",
    "Condition",
    "ConditionRegistry",
    "FsmGraph",
    "GraphConfigError",
    "StepTrace",
    "SystemOutput",
    "TerminationReason",
    "Transition",
    "TurnInput",
    "ValidationReport",
    "builtin_conditions",
    "graph_from_dict",
    "graph_to_dict",
    "is_triggered",
    "load_graph",
    "next_state",
    "run_turn",
    "save_graph",
    "state_output",
    "validate_graph",
]
