"""Three-stage referral pipeline.

Stage 1 asks the chat backend for candidate diagnoses, re-requesting
the shortfall when too few unique names come back. Stage 2 picks one
specialist per diagnosis (calls are independent, so they may run
concurrently; assembly order always follows hypothesis order). Stage 3
writes a short explanation per pair, falling back to a template rather
than ever emitting an empty description.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from triagekit.adapters.base import AdapterError, ChatBackend, CompletionRequest
from triagekit.transcript import Transcript

logger = logging.getLogger(__name__)

HYPOTHESES_TAG = "hypotheses"
SPECIALIST_TAG = "specialist"
EXPLAIN_TAG = "explain"

HYPOTHESES_PROMPT = (
    "You are a clinical triage assistant. From the conversation, list the {n} "
    "most plausible diagnostic hypotheses, one short name per line, nothing else."
)
SPECIALIST_PROMPT = (
    "Name the single most appropriate physician specialty for a patient whose "
    "working diagnosis is: {diagnosis}. Reply with the specialty name only."
)
EXPLAIN_PROMPT = (
    "In one or two sentences, explain to the patient why the diagnosis "
    "'{diagnosis}' suggests seeing a {doctor}, based on their complaints."
)

FALLBACK_DESCRIPTION = "Consult a {doctor} regarding {diagnosis}."


class RoutingError(RuntimeError):
    def __init__(self, message: str, partial: list["DiagnosisHypothesis"] | None = None):
        super().__init__(message)
        self.partial = partial or []


@dataclass(frozen=True)
class DiagnosisHypothesis:
    name: str

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("hypothesis name must be non-empty")
        object.__setattr__(self, "name", self.name.strip())


@dataclass(frozen=True)
class ReferralTriple:
    diagnosis: str
    doctor: str
    description: str

    def __post_init__(self) -> None:
        if not (self.diagnosis and self.doctor and self.description):
            raise ValueError("referral fields must all be non-empty")


@dataclass(frozen=True)
class RoutingResult:
    triples: tuple[ReferralTriple, ...]
    raw_hypothesis_count: int


@dataclass(frozen=True)
class RoutingConfig:
    result_count: int = 3
    stage1_retries: int = 2
    stage_retry: int = 1
    max_description_chars: int = 400
    default_specialty: str = "General practitioner"
    specialty_vocabulary: tuple[str, ...] = ()
    concurrency: int = 4

    def __post_init__(self) -> None:
        if self.result_count < 1:
            raise ValueError("result_count must be >= 1")


def _parse_lines(reply: str) -> list[str]:
    names = []
    for line in reply.splitlines():
        text = line.strip().lstrip("-*0123456789.) ").strip()
        if text:
            names.append(text)
    return names


def _generate_hypotheses_counted(
    llm: ChatBackend,
    history: Transcript,
    n: int,
    max_retries: int,
) -> tuple[list[DiagnosisHypothesis], int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    unique: list[DiagnosisHypothesis] = []
    seen: set[str] = set()
    raw_count = 0

    def absorb(reply: str) -> None:
        nonlocal raw_count
        names = _parse_lines(reply)
        raw_count += len(names)
        for name in names:
            key = name.strip().lower()
            if key and key not in seen:
                seen.add(key)
                unique.append(DiagnosisHypothesis(name))

    calls = 0
    while len(unique) < n and calls < 1 + max_retries:
        shortfall = n - len(unique)
        request = CompletionRequest(
            system_prompt=HYPOTHESES_PROMPT.format(n=shortfall),
            messages=history,
            temperature=0.0,
            tag=HYPOTHESES_TAG,
        )
        absorb(llm.complete(request))
        calls += 1
    if len(unique) < n:
        raise RoutingError(
            f"only {len(unique)} of {n} hypotheses after {calls} calls",
            partial=unique,
        )
    return unique[:n], raw_count


def generate_hypotheses(
    llm: ChatBackend,
    history: Transcript,
    n: int,
    max_retries: int = 2,
) -> list[DiagnosisHypothesis]:
    """Collect ``n`` unique diagnostic hypotheses, re-requesting shortfalls."""
    hypotheses, _ = _generate_hypotheses_counted(llm, history, n, max_retries)
    return hypotheses


def _canonical_specialty(raw: str, cfg: RoutingConfig) -> str:
    name = raw.strip()
    if not cfg.specialty_vocabulary:
        return name or cfg.default_specialty
    for known in cfg.specialty_vocabulary:
        if known.lower() == name.lower():
            return known
    return cfg.default_specialty


def select_specialist(
    llm: ChatBackend,
    hypothesis: DiagnosisHypothesis,
    cfg: RoutingConfig | None = None,
) -> str:
    """One specialty per hypothesis, retried once before failing."""
    cfg = cfg or RoutingConfig()
    request = CompletionRequest(
        system_prompt=SPECIALIST_PROMPT.format(diagnosis=hypothesis.name),
        messages=Transcript.from_pairs([("user", hypothesis.name)]),
        temperature=0.0,
        tag=SPECIALIST_TAG,
    )
    last_error: AdapterError | None = None
    for _ in range(1 + cfg.stage_retry):
        try:
            return _canonical_specialty(llm.complete(request), cfg)
        except AdapterError as exc:
            last_error = exc
    raise RoutingError(f"specialist selection failed for {hypothesis.name!r}") from last_error


def explain(
    llm: ChatBackend,
    hypothesis: DiagnosisHypothesis,
    doctor: str,
    history: Transcript,
    cfg: RoutingConfig | None = None,
) -> str:
    """Short per-pair description; templated fallback, never empty."""
    cfg = cfg or RoutingConfig()
    request = CompletionRequest(
        system_prompt=EXPLAIN_PROMPT.format(diagnosis=hypothesis.name, doctor=doctor),
        messages=history,
        temperature=0.0,
        tag=EXPLAIN_TAG,
    )
    for _ in range(1 + cfg.stage_retry):
        try:
            text = llm.complete(request).strip()
            if text:
                return text[: cfg.max_description_chars]
        except AdapterError as exc:
            logger.warning("explanation attempt failed: %s", exc)
    return FALLBACK_DESCRIPTION.format(doctor=doctor, diagnosis=hypothesis.name)


def route(
    llm: ChatBackend,
    history: Transcript,
    cfg: RoutingConfig | None = None,
) -> RoutingResult:
    """Run all three stages and assemble triples in hypothesis order."""
    cfg = cfg or RoutingConfig()
    hypotheses, raw_count = _generate_hypotheses_counted(
        llm, history, cfg.result_count, cfg.stage1_retries
    )
    with ThreadPoolExecutor(max_workers=cfg.concurrency) as pool:
        doctors = list(pool.map(lambda h: select_specialist(llm, h, cfg), hypotheses))
        descriptions = list(
            pool.map(
                lambda pair: explain(llm, pair[0], pair[1], history, cfg),
                zip(hypotheses, doctors),
            )
        )
    triples = tuple(
        ReferralTriple(diagnosis=h.name, doctor=d, description=desc)
        for h, d, desc in zip(hypotheses, doctors, descriptions)
    )
    return RoutingResult(triples=triples, raw_hypothesis_count=raw_count)
