"""Assemble a configured gateway from a JSON config file.

Every piece is optional: absent model bundles degrade to permissive
verdicts, an absent backend becomes an empty scripted stub, and the
session store defaults to in-memory. Environment variables
TRIAGEKIT_HOST, TRIAGEKIT_PORT, and TRIAGEKIT_LLM_ENDPOINT override
their config-file counterparts.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from triagekit.adapters.base import ChatBackend
from triagekit.adapters.flags import llm_critical_flag
from triagekit.adapters.remote import RemoteChatBackend
from triagekit.adapters.scripted import ScriptedStubBackend, load_stub_rules
from triagekit.collector.pipeline import CollectorConfig
from triagekit.collector.store import VectorStore
from triagekit.fsm.clinical import (
    ClinicalRuntime,
    ClinicalTexts,
    DecisionServices,
    clinical_actions,
    clinical_conditions,
    default_clinical_graph,
)
from triagekit.fsm.graph import FsmGraph, load_graph
from triagekit.gateway.service import GatewayService
from triagekit.gateway.sessions import FileSessionStore, InMemorySessionStore
from triagekit.progress.linear import (
    estimate_readiness,
    detect_question,
    load_linear_model,
)
from triagekit.routing.selector import RoutingConfig
from triagekit.safety.emergency import emergency_score, load_emergency_model
from triagekit.safety.moderation import BlacklistTree, load_blacklist, moderate


def load_config(path: str | Path | None) -> dict:
    config: dict = {}
    if path is not None:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    if "TRIAGEKIT_HOST" in os.environ:
        config["host"] = os.environ["TRIAGEKIT_HOST"]
    if "TRIAGEKIT_PORT" in os.environ:
        config["port"] = int(os.environ["TRIAGEKIT_PORT"])
    if "TRIAGEKIT_LLM_ENDPOINT" in os.environ:
        config["llm_endpoint"] = os.environ["TRIAGEKIT_LLM_ENDPOINT"]
    return config


def build_backend(config: dict) -> ChatBackend:
    if config.get("stub_rules"):
        return load_stub_rules(config["stub_rules"])
    if config.get("llm_endpoint"):
        return RemoteChatBackend(config["llm_endpoint"])
    return ScriptedStubBackend([])


def build_services(config: dict, backend: ChatBackend) -> DecisionServices:
    permissive = DecisionServices.permissive()
    moderation = permissive.moderation
    if config.get("blacklist"):
        blacklist = load_blacklist(config["blacklist"])
        moderation = lambda text: moderate(text, blacklist)  # noqa: E731

    emergency = permissive.emergency
    if config.get("emergency_model"):
        model = load_emergency_model(config["emergency_model"])
        emergency = lambda chat: emergency_score(  # noqa: E731
            chat, model, llm_critical_flag(backend, chat)
        )

    readiness = permissive.readiness
    if config.get("readiness_model"):
        readiness_model = load_linear_model(config["readiness_model"])
        readiness = lambda chat: estimate_readiness(chat, readiness_model)  # noqa: E731

    question = permissive.question
    if config.get("question_model"):
        question_model = load_linear_model(config["question_model"])
        question = lambda text: detect_question(text, question_model)  # noqa: E731

    return DecisionServices(
        moderation=moderation,
        emergency=emergency,
        readiness=readiness,
        question=question,
    )


def build_runtime(config: dict) -> ClinicalRuntime:
    backend = build_backend(config)
    services = build_services(config, backend)
    collector_doc = config.get("collector", {})
    collector_cfg = CollectorConfig(
        reuse_threshold=collector_doc.get("reuse_threshold", 0.965),
        dup_threshold=collector_doc.get("dup_threshold", 0.86),
        n_candidates=collector_doc.get("n_candidates", 5),
        fallback_question=collector_doc.get(
            "fallback_question", CollectorConfig().fallback_question
        ),
    )
    routing_doc = config.get("routing", {})
    routing_cfg = RoutingConfig(
        result_count=routing_doc.get("result_count", 3),
        default_specialty=routing_doc.get("default_specialty", "General practitioner"),
        specialty_vocabulary=tuple(routing_doc.get("specialty_vocabulary", ())),
    )
    blacklist = (
        load_blacklist(config["blacklist"]) if config.get("blacklist") else BlacklistTree()
    )
    texts = ClinicalTexts(**config.get("texts", {}))
    relevance = (
        load_linear_model(config["relevance_model"])
        if config.get("relevance_model")
        else None
    )
    return ClinicalRuntime(
        services=services,
        llm=backend,
        relevance_model=relevance,
        store=VectorStore(config.get("collector_store")),
        collector_cfg=collector_cfg,
        routing_cfg=routing_cfg,
        blacklist=blacklist,
        texts=texts,
        max_attempts=int(config.get("max_attempts", 3)),
    )


def build_graph(config: dict, runtime: ClinicalRuntime) -> FsmGraph:
    if config.get("graph_file"):
        return load_graph(
            config["graph_file"],
            clinical_conditions(runtime),
            clinical_actions(runtime),
        )
    return default_clinical_graph(runtime)


def build_service(config: dict) -> GatewayService:
    runtime = build_runtime(config)
    graph = build_graph(config, runtime)
    store = (
        FileSessionStore(config["session_store"])
        if config.get("session_store")
        else InMemorySessionStore()
    )
    return GatewayService(
        graph, store, audit_log_path=config.get("audit_log") or None
    )
