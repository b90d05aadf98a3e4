"""The shipped consultation graph.

Six states: Initialization greets, InformationCollection asks follow-up
questions, DiagnosticRouting (the answer state) delivers referral
triples, Moderation deflects prohibited content, Emergency runs the
fixed escalation script, FreeDialogue (the default state) answers
everything else. Every state routes unsafe input to Moderation first;
emergency detection outranks everything except moderation.

Conditions are backed by the decision services and memoized per turn,
so one turn costs at most one call per classifier however many
transitions consult it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from triagekit.adapters.base import AdapterError, ChatBackend
from triagekit.adapters.scripted import ScriptedStubBackend
from triagekit.collector.pipeline import CollectorConfig, CollectorError, collect_step
from triagekit.collector.store import VectorStore
from triagekit.fsm.engine import TurnInput
from triagekit.fsm.graph import (
    ActionOutput,
    ActionRegistry,
    ConditionRegistry,
    FsmGraph,
    build_graph,
)
from triagekit.progress.linear import (
    LinearTextModel,
    QuestionVerdict,
    ReadinessVerdict,
    constant_relevance_model,
)
from triagekit.routing.answers import SAFE_REFUSAL, answer_free
from triagekit.routing.selector import RoutingConfig, RoutingError, route
from triagekit.safety.emergency import EmergencyVerdict
from triagekit.safety.moderation import BlacklistTree, ModerationVerdict, moderate
from triagekit.transcript import Transcript

logger = logging.getLogger(__name__)

INITIALIZATION = "Initialization"
INFORMATION_COLLECTION = "InformationCollection"
DIAGNOSTIC_ROUTING = "DiagnosticRouting"
MODERATION = "Moderation"
EMERGENCY = "Emergency"
FREE_DIALOGUE = "FreeDialogue"

CLINICAL_STATES = [
    INITIALIZATION,
    INFORMATION_COLLECTION,
    DIAGNOSTIC_ROUTING,
    MODERATION,
    EMERGENCY,
    FREE_DIALOGUE,
]

GREETING = "What's bothering you?"

ESCALATION_SCRIPT = (
    "Your condition could be close to critical!\n"
    "Call 103 immediately.\n"
    "Wait for the response, do not hang up!\n"
    "Briefly explain what happened."
)

MODERATION_REFUSAL = (
    "I'm sorry, I didn't understand your response. Could you please provide "
    "more specific information or rephrase your message?"
)

ROUTING_CLOSING = "Is everything clear? Feel free to ask questions!"

SERVICE_APOLOGY = (
    "I'm sorry, something went wrong on my side. Could you describe your "
    "main complaint once more?"
)


@dataclass(frozen=True)
class ClinicalTexts:
    greeting: str = GREETING
    escalation: str = ESCALATION_SCRIPT
    refusal: str = MODERATION_REFUSAL
    closing: str = ROUTING_CLOSING
    apology: str = SERVICE_APOLOGY
    safe_refusal: str = SAFE_REFUSAL


@dataclass(frozen=True)
class DecisionServices:
    """The four per-turn classifiers, as plain callables.

    Production wiring binds these to trained models; tests may pass any
    deterministic stand-ins with the same shapes.
    """

    moderation: Callable[[str], ModerationVerdict]
    emergency: Callable[[Transcript], EmergencyVerdict]
    readiness: Callable[[Transcript], ReadinessVerdict]
    question: Callable[[str], QuestionVerdict]

    @classmethod
    def permissive(cls) -> "DecisionServices":
        """Services that never trip any gate; useful for offline validation."""
        return cls(
            moderation=lambda text: ModerationVerdict(flagged=False),
            emergency=lambda chat: EmergencyVerdict(score=0.0, critical=False),
            readiness=lambda chat: ReadinessVerdict(
                ready=False, score=0.0, predicted_remaining_turns=0
            ),
            question=lambda text: QuestionVerdict(is_question=False, score=0.0),
        )


@dataclass
class ClinicalRuntime:
    """Everything the shipped graph's conditions and actions depend on."""

    services: DecisionServices
    llm: ChatBackend
    relevance_model: LinearTextModel | None = None
    store: VectorStore = field(default_factory=VectorStore)
    collector_cfg: CollectorConfig = field(default_factory=CollectorConfig)
    routing_cfg: RoutingConfig = field(default_factory=RoutingConfig)
    blacklist: BlacklistTree = field(default_factory=BlacklistTree)
    texts: ClinicalTexts = field(default_factory=ClinicalTexts)
    max_attempts: int = 3

    @classmethod
    def inert(cls) -> "ClinicalRuntime":
        """A runtime wired to permissive services and an empty stub backend."""
        return cls(services=DecisionServices.permissive(), llm=ScriptedStubBackend([]))


def clinical_conditions(runtime: ClinicalRuntime) -> ConditionRegistry:
    services = runtime.services
    registry = ConditionRegistry(
        {
            "always_true": lambda turn: True,
            "always_false": lambda turn: False,
        }
    )

    def input_unsafe(turn: TurnInput) -> bool:
        verdict = turn.once(
            "moderation", lambda: services.moderation(turn.message)
        )
        return verdict.flagged

    def emergency_detected(turn: TurnInput) -> bool:
        verdict = turn.once(
            "emergency", lambda: services.emergency(turn.full_transcript())
        )
        return verdict.critical

    def is_question(turn: TurnInput) -> bool:
        verdict = turn.once("question", lambda: services.question(turn.message))
        return verdict.is_question

    def collection_ready(turn: TurnInput) -> bool:
        verdict = turn.once(
            "readiness", lambda: services.readiness(turn.full_transcript())
        )
        return verdict.ready

    registry.register("input_unsafe", input_unsafe)
    registry.register("emergency_detected", emergency_detected)
    registry.register("is_question", is_question)
    registry.register("collection_ready", collection_ready)
    return registry


def _relevance_model(runtime: ClinicalRuntime) -> LinearTextModel:
    if runtime.relevance_model is not None:
        return runtime.relevance_model
    return constant_relevance_model(runtime.collector_cfg.embedder)


def clinical_actions(runtime: ClinicalRuntime) -> ActionRegistry:
    texts = runtime.texts

    def greet(turn: TurnInput) -> ActionOutput:
        return ActionOutput(text=texts.greeting)

    def collect(turn: TurnInput) -> ActionOutput:
        try:
            question, provenance = collect_step(
                turn.full_transcript(),
                runtime.store,
                runtime.collector_cfg,
                runtime.llm,
                _relevance_model(runtime),
            )
            logger.debug("collector produced %r (%s)", question, provenance)
            return ActionOutput(text=question)
        except (CollectorError, AdapterError) as exc:
            logger.warning("collection failed, apologizing: %s", exc)
            return ActionOutput(text=texts.apology)

    def route_patient(turn: TurnInput) -> ActionOutput:
        try:
            result = route(runtime.llm, turn.full_transcript(), runtime.routing_cfg)
            return ActionOutput(text=texts.closing, payload=result.triples)
        except (RoutingError, AdapterError) as exc:
            logger.warning("routing failed, apologizing: %s", exc)
            return ActionOutput(text=texts.apology)

    def escalate(turn: TurnInput) -> ActionOutput:
        return ActionOutput(text=texts.escalation)

    def refuse(turn: TurnInput) -> ActionOutput:
        return ActionOutput(text=texts.refusal)

    def answer(turn: TurnInput) -> ActionOutput:
        reply = answer_free(
            runtime.llm,
            turn.full_transcript(),
            blacklist=runtime.blacklist,
            safe_refusal=texts.safe_refusal,
        )
        return ActionOutput(text=reply)

    registry = ActionRegistry()
    registry.register("greet", greet)
    registry.register("collect", collect)
    registry.register("route", route_patient)
    registry.register("escalate", escalate)
    registry.register("refuse", refuse)
    registry.register("answer", answer)
    registry.register("echo", lambda turn: ActionOutput(text=turn.message))
    return registry


CLINICAL_ACTION_MAP = {
    INITIALIZATION: "greet",
    INFORMATION_COLLECTION: "collect",
    DIAGNOSTIC_ROUTING: "route",
    MODERATION: "refuse",
    EMERGENCY: "escalate",
    FREE_DIALOGUE: "answer",
}

# (source, [conditions], target, priority); unsafe input always wins,
# emergency outranks everything else.
CLINICAL_TRANSITIONS: list[tuple[str, list[str], str, int]] = [
    (INITIALIZATION, ["input_unsafe"], MODERATION, 0),
    (INITIALIZATION, ["emergency_detected"], EMERGENCY, 1),
    (INITIALIZATION, ["is_question"], FREE_DIALOGUE, 2),
    (INITIALIZATION, ["always_true"], INFORMATION_COLLECTION, 3),
    (INFORMATION_COLLECTION, ["input_unsafe"], MODERATION, 0),
    (INFORMATION_COLLECTION, ["emergency_detected"], EMERGENCY, 1),
    (INFORMATION_COLLECTION, ["is_question"], FREE_DIALOGUE, 2),
    (INFORMATION_COLLECTION, ["collection_ready"], DIAGNOSTIC_ROUTING, 3),
    (INFORMATION_COLLECTION, ["always_true"], INFORMATION_COLLECTION, 4),
    (DIAGNOSTIC_ROUTING, ["input_unsafe"], MODERATION, 0),
    (DIAGNOSTIC_ROUTING, ["emergency_detected"], EMERGENCY, 1),
    (DIAGNOSTIC_ROUTING, ["always_true"], FREE_DIALOGUE, 2),
    (MODERATION, ["input_unsafe"], MODERATION, 0),
    (MODERATION, ["emergency_detected"], EMERGENCY, 1),
    (MODERATION, ["is_question"], FREE_DIALOGUE, 2),
    (MODERATION, ["always_true"], INFORMATION_COLLECTION, 3),
    (EMERGENCY, ["input_unsafe"], MODERATION, 0),
    (FREE_DIALOGUE, ["input_unsafe"], MODERATION, 0),
    (FREE_DIALOGUE, ["emergency_detected"], EMERGENCY, 1),
    (FREE_DIALOGUE, ["is_question"], FREE_DIALOGUE, 2),
    (FREE_DIALOGUE, ["collection_ready"], DIAGNOSTIC_ROUTING, 3),
    (FREE_DIALOGUE, ["always_true"], INFORMATION_COLLECTION, 4),
]


def default_clinical_graph(runtime: ClinicalRuntime | None = None) -> FsmGraph:
    """Build the shipped six-state consultation graph.

    Without a runtime the graph binds to permissive services and an
    empty scripted backend, which suffices for structural validation
    and serialization.
    """
    runtime = runtime or ClinicalRuntime.inert()
    return build_graph(
        states=CLINICAL_STATES,
        transitions=CLINICAL_TRANSITIONS,
        initial_state=INITIALIZATION,
        default_state=FREE_DIALOGUE,
        answer_state=DIAGNOSTIC_ROUTING,
        final_states=[INFORMATION_COLLECTION, MODERATION, EMERGENCY, FREE_DIALOGUE],
        actions=dict(CLINICAL_ACTION_MAP),
        conditions=clinical_conditions(runtime),
        action_registry=clinical_actions(runtime),
        max_attempts=runtime.max_attempts,
    )
