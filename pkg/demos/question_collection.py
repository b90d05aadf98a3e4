#!/usr/bin/env python3
"""Drive the information-collection pipeline with a scripted generator.

Shows all three paths: fresh generation with near-duplicate filtering,
a cache hit on a repeated dialogue, and the generic fallback when the
generator keeps proposing questions that were already asked.
"""

from triagekit.adapters.scripted import ScriptedStubBackend
from triagekit.collector.pipeline import CollectorConfig, collect_step
from triagekit.collector.store import VectorStore
from triagekit.progress.linear import constant_relevance_model
from triagekit.transcript import Transcript

cfg = CollectorConfig()
relevance = constant_relevance_model(cfg.embedder)
store = VectorStore()

backend = ScriptedStubBackend(
    [],
    default_reply="\n".join(
        [
            "Are you experiencing any other symptoms, such as nausea or vomiting?",
            # Near-duplicate of the line above; filtered once that one is asked.
            "Are you experiencing any other symptoms, such as nausea and vomiting?",
            "How long has this been going on?",
            "Any fever or chills?",
            "Does anything make it better or worse?",
        ]
    ),
)

history = Transcript.from_pairs(
    [("system", "What's bothering you?"), ("user", "i have a stomach ache")]
)

print("== generation with dedup ==")
for _ in range(3):
    question, provenance = collect_step(history, store, cfg, backend, relevance)
    print(f"[{provenance}] {question}")
    history = history.append("system", question).append("user", "hm, noted")

print(f"\nstore now holds {len(store)} dialogue(s); backend calls: {backend.calls}")

print("\n== cache hit on a repeated dialogue ==")
repeat = Transcript.from_pairs(
    [("system", "What's bothering you?"), ("user", "i have a stomach ache")]
)
question, provenance = collect_step(repeat, store, cfg, backend, relevance)
print(f"[{provenance}] {question}  (no new generator call: {backend.calls} total)")

print("\n== exhausted generator falls back ==")
stuck = ScriptedStubBackend([], default_reply="Where exactly is the pain located?")
history = Transcript.from_pairs(
    [
        ("system", "Where exactly is the pain located?"),
        ("user", "lower right side"),
    ]
)
question, provenance = collect_step(history, VectorStore(), cfg, stuck, relevance)
print(f"[{provenance}] {question}")
