"""Hybrid finite-state clinical triage dialogue engine.

A graph-driven dialogue manager orchestrates pluggable decision
services (moderation, emergency detection, readiness, question
detection), an information-collection pipeline with a similarity cache,
and a diagnosis-to-specialist router, all behind a JSON HTTP gateway.
Every language-model call goes through an adapter, so the whole system
runs deterministically on the scripted stub backend.
"""

__version__ = "0.1.0"
