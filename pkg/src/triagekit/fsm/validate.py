"""Structural graph analysis: unreachable states, conflicting
transitions, and trap cycles with no exit.

Reachability treats every transition as a potential edge and adds the
implicit fallback edge from each state to the default state. A pair of
transitions conflicts when they leave the same state under identical
condition sets but point at different targets. A trap cycle is a
strongly connected component with at least one edge that contains no
final state, not the answer state, and has no transition leaving it.
"""

from __future__ import annotations

from dataclasses import dataclass

from triagekit.fsm.graph import FsmGraph, Transition


@dataclass(frozen=True)
class ValidationReport:
    unreachable: frozenset[str]
    conflicting: tuple[tuple[Transition, Transition], ...]
    cycles: tuple[tuple[str, ...], ...]

    @property
    def ok(self) -> bool:
        return not (self.unreachable or self.conflicting or self.cycles)

    def summary(self) -> str:
        lines = []
        lines.append(f"unreachable states: {sorted(self.unreachable) or 'none'}")
        if self.conflicting:
            for a, b in self.conflicting:
                lines.append(
                    "conflicting transitions from "
                    f"{a.source}: {sorted(a.condition_ids)} -> {a.target} vs {b.target}"
                )
        else:
            lines.append("conflicting transitions: none")
        if self.cycles:
            for cycle in self.cycles:
                lines.append(f"exit-less cycle: {list(cycle)}")
        else:
            lines.append("exit-less cycles: none")
        return "\n".join(lines)


def _reachable(graph: FsmGraph) -> set[str]:
    edges: dict[str, set[str]] = {s: {graph.default_state} for s in graph.states}
    for t in graph.transitions:
        edges[t.source].add(t.target)
    seen = {graph.initial_state}
    frontier = [graph.initial_state]
    while frontier:
        state = frontier.pop()
        for nxt in edges[state]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def _conflicting(graph: FsmGraph) -> list[tuple[Transition, Transition]]:
    pairs = []
    transitions = list(graph.transitions)
    for i, a in enumerate(transitions):
        for b in transitions[i + 1 :]:
            if (
                a.source == b.source
                and a.condition_ids == b.condition_ids
                and a.target != b.target
            ):
                pairs.append((a, b))
    return pairs


def _strongly_connected_components(graph: FsmGraph) -> list[set[str]]:
    """Iterative Tarjan over the explicit transition edges."""
    adjacency: dict[str, list[str]] = {s: [] for s in graph.states}
    for t in graph.transitions:
        adjacency[t.source].append(t.target)

    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[set[str]] = []
    counter = 0

    for root in sorted(graph.states):
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_idx = work[-1]
            if child_idx == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            neighbors = adjacency[node]
            while child_idx < len(neighbors):
                nxt = neighbors[child_idx]
                child_idx += 1
                if nxt not in index:
                    work[-1] = (node, child_idx)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index[node]:
                component = set()
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.add(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent, parent_idx = work[-1]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
                work[-1] = (parent, parent_idx)
    return components


def _trap_cycles(graph: FsmGraph) -> list[tuple[str, ...]]:
    cycles = []
    for component in _strongly_connected_components(graph):
        has_inner_edge = any(
            t.source in component and t.target in component for t in graph.transitions
        )
        if not has_inner_edge:
            continue
        if component & graph.final_states:
            continue
        if graph.answer_state in component:
            continue
        has_exit = any(
            t.source in component and t.target not in component for t in graph.transitions
        )
        if has_exit:
            continue
        cycles.append(tuple(sorted(component)))
    return cycles


def validate_graph(graph: FsmGraph) -> ValidationReport:
    reachable = _reachable(graph)
    return ValidationReport(
        unreachable=frozenset(graph.states - reachable),
        conflicting=tuple(_conflicting(graph)),
        cycles=tuple(sorted(_trap_cycles(graph))),
    )
