from __future__ import annotations

import itertools
import random

from fsm_helpers import make_graph, random_graph, random_turn
from triagekit.fsm.engine import run_turn
from triagekit.fsm.graph import FsmGraph
from triagekit.fsm.validate import validate_graph


# Brute-force oracles, deliberately naive and independent of the
# implementation: reachability by fixpoint expansion, conflicts by full
# pairwise scan, trap cycles by transitive-closure mutual reachability.

def oracle_reachable(graph: FsmGraph) -> set[str]:
    edges = {(t.source, t.target) for t in graph.transitions}
    edges |= {(s, graph.default_state) for s in graph.states}
    reached = {graph.initial_state}
    changed = True
    while changed:
        changed = False
        for src, dst in edges:
            if src in reached and dst not in reached:
                reached.add(dst)
                changed = True
    return reached


def oracle_conflicts(graph: FsmGraph):
    pairs = []
    for a, b in itertools.combinations(graph.transitions, 2):
        if (
            a.source == b.source
            and sorted(c.id for c in a.conditions) == sorted(c.id for c in b.conditions)
            and a.target != b.target
        ):
            pairs.append((a, b))
    return pairs


def oracle_trap_cycles(graph: FsmGraph) -> set[frozenset[str]]:
    states = sorted(graph.states)
    closure = {s: {s} for s in states}
    changed = True
    while changed:
        changed = False
        for t in graph.transitions:
            for s in states:
                if t.source in closure[s] and t.target not in closure[s]:
                    closure[s].add(t.target)
                    changed = True
    components: set[frozenset[str]] = set()
    for s in states:
        members = frozenset(m for m in states if m in closure[s] and s in closure[m])
        components.add(members)
    flagged = set()
    for component in components:
        has_edge = any(
            t.source in component and t.target in component for t in graph.transitions
        )
        has_exit = any(
            t.source in component and t.target not in component
            for t in graph.transitions
        )
        if (
            has_edge
            and not has_exit
            and not (component & graph.final_states)
            and graph.answer_state not in component
        ):
            flagged.add(component)
    return flagged


def test_isolated_state_reported_unreachable():
    g = make_graph(
        ["A", "B", "X"],
        [("A", ["always_true"], "B", 0)],
        initial="A", default="B", answer="B", finals=[],
    )
    report = validate_graph(g)
    assert report.unreachable == {"X"}


def test_initial_state_never_unreachable():
    g = make_graph(
        ["A", "B"], [], initial="A", default="B", answer="B", finals=[]
    )
    assert "A" not in validate_graph(g).unreachable


def test_default_state_reachable_via_fallback():
    # No explicit transitions at all: the implicit fallback edge still
    # reaches the default state.
    g = make_graph(
        ["A", "B"], [], initial="A", default="B", answer="B", finals=[]
    )
    assert validate_graph(g).unreachable == set()


def test_identical_condition_sets_conflict():
    g = make_graph(
        ["A", "B", "C"],
        [
            ("A", ["always_true", "is_question"], "B", 0),
            ("A", ["is_question", "always_true"], "C", 1),
        ],
        initial="A", default="A", answer="C", finals=[],
    )
    report = validate_graph(g)
    assert len(report.conflicting) == 1
    found = report.conflicting[0]
    assert {found[0].target, found[1].target} == {"B", "C"}
    assert report.conflicting == tuple(oracle_conflicts(g))


def test_same_target_duplicates_do_not_conflict():
    g = make_graph(
        ["A", "B"],
        [("A", ["always_true"], "B", 0), ("A", ["always_true"], "B", 1)],
        initial="A", default="A", answer="B", finals=[],
    )
    assert validate_graph(g).conflicting == ()


def test_two_state_trap_cycle_flagged():
    g = make_graph(
        ["A", "B", "C"],
        [("A", ["always_true"], "B", 0), ("B", ["always_true"], "A", 0)],
        initial="A", default="C", answer="C", finals=[],
    )
    report = validate_graph(g)
    assert report.cycles == (("A", "B"),)
    assert {frozenset(c) for c in report.cycles} == oracle_trap_cycles(g)


def test_cycle_with_exit_not_flagged():
    g = make_graph(
        ["A", "B", "C"],
        [
            ("A", ["always_true"], "B", 0),
            ("B", ["always_true"], "A", 0),
            ("B", ["is_question"], "C", 1),
        ],
        initial="A", default="C", answer="C", finals=[],
    )
    assert validate_graph(g).cycles == ()


def test_cycle_containing_final_not_flagged():
    g = make_graph(
        ["A", "B", "C"],
        [("A", ["always_true"], "B", 0), ("B", ["always_true"], "A", 0)],
        initial="A", default="C", answer="C", finals=["B"],
    )
    assert validate_graph(g).cycles == ()


def test_self_loop_trap_flagged():
    g = make_graph(
        ["A", "B"],
        [("B", ["always_true"], "B", 0)],
        initial="A", default="B", answer="A", finals=[],
    )
    assert validate_graph(g).cycles == (("B",),)


def test_fuzzed_graphs_match_oracles():
    rng = random.Random(4242)
    for _ in range(150):
        g = random_graph(rng, max_states=9)
        report = validate_graph(g)
        assert set(report.unreachable) == g.states - oracle_reachable(g)
        assert {frozenset(c) for c in report.cycles} == oracle_trap_cycles(g)
        got_pairs = {
            (id(a), id(b)) for a, b in report.conflicting
        }
        oracle_pairs = {(id(a), id(b)) for a, b in oracle_conflicts(g)}
        assert got_pairs == oracle_pairs


def test_unreachable_states_never_visited():
    """Soundness: a state reported unreachable is never visited when
    running from the initial state."""
    rng = random.Random(77)
    runs = 0
    while runs < 2000:
        g = random_graph(rng, max_states=8)
        report = validate_graph(g)
        if not report.unreachable:
            continue
        for _ in range(10):
            runs += 1
            _, _, trace = run_turn(g, g.initial_state, random_turn(rng))
            assert not (set(trace.path()) & report.unreachable)
