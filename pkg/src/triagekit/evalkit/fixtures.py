"""Seeded synthetic corpora for desk-scale training and evaluation.

Emergency chats draw from disjoint critical/benign symptom pools so the
detector pipeline has a separable signal; question/statement messages
and staged readiness dialogues follow the same principle. Specialty
records pair a system multiset with several simulated experts whose
per-position agreement is controllable (agreement 1.0 copies the
system's labels, 0.0 samples from a disjoint vocabulary).

Generation is a pure function of (seed, spec): the serialized corpus is
byte-identical across runs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from triagekit.transcript import Transcript

CRITICAL_COMPLAINTS = [
    "crushing chest pain spreading to my left arm",
    "i suddenly cannot breathe properly",
    "my face is drooping and my speech is slurred",
    "heavy bleeding that will not stop",
    "i keep losing consciousness",
    "the worst headache of my life hit out of nowhere",
    "my heart is racing and my vision is going dark",
    "severe abdominal pain with vomiting blood",
]

BENIGN_COMPLAINTS = [
    "a runny nose since yesterday",
    "a mild headache in the evenings",
    "itchy skin after the new detergent",
    "a sore throat when swallowing",
    "lower back ache after gardening",
    "trouble falling asleep lately",
    "occasional heartburn after meals",
    "a small rash on my forearm",
]

CRITICAL_FOLLOWUPS = [
    "it started minutes ago and is getting worse",
    "i am sweating and dizzy, it feels serious",
    "the pain is unbearable, ten out of ten",
]

BENIGN_FOLLOWUPS = [
    "it is mild, maybe two out of ten",
    "it has been the same for a week",
    "it only bothers me a little in the morning",
]

INTAKE_QUESTIONS = [
    "Where exactly is the problem located?",
    "How intense is it on a scale from one to ten?",
    "When did it start?",
    "Does anything make it better or worse?",
    "Do you have any other symptoms?",
    "Have you taken any medication for it?",
    "Has this happened before?",
]

INTAKE_ANSWERS = [
    "mostly on the left side",
    "around five out of ten",
    "it started three days ago",
    "rest helps a little",
    "no other symptoms that i noticed",
    "i took a mild painkiller once",
    "never happened before",
]

QUESTION_TEMPLATES = [
    "what does {term} mean?",
    "is {term} dangerous?",
    "how long does {term} usually last?",
    "should i worry about {term}?",
    "can {term} be treated at home?",
    "do i need tests for {term}?",
]

STATEMENT_TEMPLATES = [
    "my {part} hurts since the morning",
    "i noticed {term} yesterday",
    "the {part} pain gets worse at night",
    "i have been taking vitamins for {term}",
    "there is some {term} after exercise",
    "my {part} feels stiff when i wake up",
]

TERMS = ["dizziness", "swelling", "numbness", "fatigue", "nausea", "cramps"]
PARTS = ["knee", "shoulder", "stomach", "neck", "elbow", "ankle"]

SPECIALTY_VOCABULARY = [
    "Neurologist",
    "Cardiologist",
    "Gastroenterologist",
    "Otolaryngologist",
    "Dermatologist",
    "Pulmonologist",
    "Urologist",
    "Endocrinologist",
    "Rheumatologist",
    "Ophthalmologist",
]

# Used when expert agreement is zero: no overlap with the main vocabulary.
ALTERNATE_VOCABULARY = [f"Alt {name}" for name in SPECIALTY_VOCABULARY]


@dataclass(frozen=True)
class FixtureSpec:
    emergency_chats: int = 200
    question_messages: int = 200
    readiness_dialogues: int = 40
    specialty_chats: int = 50
    experts: int = 3
    labels_per_chat: int = 3
    agreement: float = 0.8
    ready_after: int = 4
    max_dialogue_pairs: int = 7
    llm_flag_noise: float = 0.2

    def __post_init__(self) -> None:
        if not 0.0 <= self.agreement <= 1.0:
            raise ValueError("agreement must lie in [0, 1]")
        if self.ready_after < 1:
            raise ValueError("ready_after must be >= 1")


@dataclass(frozen=True)
class CorpusRecord:
    """One annotated chat; unused label fields stay None."""

    transcript: Transcript
    emergency: int | None = None
    llm_flag: bool | None = None
    question: int | None = None
    ready: int | None = None
    remaining_turns: int | None = None
    duration: int | None = None
    algorithm: tuple[str, ...] | None = None
    experts: tuple[tuple[str, ...], ...] | None = None

    def to_dict(self) -> dict:
        doc: dict = {
            "transcript": [[m.role, m.text] for m in self.transcript],
        }
        for key in (
            "emergency",
            "llm_flag",
            "question",
            "ready",
            "remaining_turns",
            "duration",
        ):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        if self.algorithm is not None:
            doc["algorithm"] = list(self.algorithm)
        if self.experts is not None:
            doc["experts"] = [list(e) for e in self.experts]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "CorpusRecord":
        return cls(
            transcript=Transcript.from_pairs(
                [(role, text) for role, text in doc["transcript"]]
            ),
            emergency=doc.get("emergency"),
            llm_flag=doc.get("llm_flag"),
            question=doc.get("question"),
            ready=doc.get("ready"),
            remaining_turns=doc.get("remaining_turns"),
            duration=doc.get("duration"),
            algorithm=tuple(doc["algorithm"]) if "algorithm" in doc else None,
            experts=(
                tuple(tuple(e) for e in doc["experts"]) if "experts" in doc else None
            ),
        )


@dataclass
class AnnotatedCorpus:
    records: list[CorpusRecord] = field(default_factory=list)

    def __iter__(self) -> Iterator[CorpusRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def emergency_records(self) -> list[CorpusRecord]:
        return [r for r in self.records if r.emergency is not None]

    def question_records(self) -> list[CorpusRecord]:
        return [r for r in self.records if r.question is not None]

    def readiness_records(self) -> list[CorpusRecord]:
        return [r for r in self.records if r.ready is not None]

    def specialty_records(self) -> list[CorpusRecord]:
        return [r for r in self.records if r.experts is not None]

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True) + "\n"
            for record in self.records
        )

    @classmethod
    def from_jsonl(cls, text: str) -> "AnnotatedCorpus":
        records = [
            CorpusRecord.from_dict(json.loads(line))
            for line in text.splitlines()
            if line.strip()
        ]
        return cls(records)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "AnnotatedCorpus":
        return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))


def _emergency_chat(rng: random.Random, critical: bool) -> Transcript:
    complaints = CRITICAL_COMPLAINTS if critical else BENIGN_COMPLAINTS
    followups = CRITICAL_FOLLOWUPS if critical else BENIGN_FOLLOWUPS
    pairs = [("system", "What's bothering you?"), ("user", rng.choice(complaints))]
    for _ in range(rng.randint(1, 2)):
        pairs.append(("system", rng.choice(INTAKE_QUESTIONS)))
        pairs.append(("user", rng.choice(followups)))
    return Transcript.from_pairs(pairs)


def _question_message(rng: random.Random, is_question: bool) -> str:
    if is_question:
        template = rng.choice(QUESTION_TEMPLATES)
    else:
        template = rng.choice(STATEMENT_TEMPLATES)
    return template.format(term=rng.choice(TERMS), part=rng.choice(PARTS))


def _readiness_dialogue(rng: random.Random, pairs: int) -> Transcript:
    turns = [("system", "What's bothering you?"), ("user", rng.choice(BENIGN_COMPLAINTS))]
    for i in range(pairs - 1):
        turns.append(("system", INTAKE_QUESTIONS[i % len(INTAKE_QUESTIONS)]))
        turns.append(("user", INTAKE_ANSWERS[i % len(INTAKE_ANSWERS)]))
    return Transcript.from_pairs(turns)


def _specialty_record(rng: random.Random, spec: FixtureSpec) -> CorpusRecord:
    k = spec.labels_per_chat
    system = tuple(rng.sample(SPECIALTY_VOCABULARY, k))
    experts = []
    for _ in range(spec.experts):
        labels = []
        for position in range(k):
            if rng.random() < spec.agreement:
                labels.append(system[position])
            else:
                labels.append(rng.choice(ALTERNATE_VOCABULARY))
        experts.append(tuple(labels))
    transcript = Transcript.from_pairs(
        [
            ("system", "What's bothering you?"),
            ("user", rng.choice(BENIGN_COMPLAINTS)),
        ]
    )
    return CorpusRecord(
        transcript=transcript, algorithm=system, experts=tuple(experts)
    )


def generate_fixtures(seed: int, spec: FixtureSpec | None = None) -> AnnotatedCorpus:
    """Build the full synthetic corpus for one seed."""
    spec = spec or FixtureSpec()
    rng = random.Random(seed)
    records: list[CorpusRecord] = []

    for i in range(spec.emergency_chats):
        critical = i % 2 == 0
        flag = critical if rng.random() >= spec.llm_flag_noise else not critical
        records.append(
            CorpusRecord(
                transcript=_emergency_chat(rng, critical),
                emergency=int(critical),
                llm_flag=flag,
            )
        )

    for i in range(spec.question_messages):
        is_question = i % 2 == 0
        text = _question_message(rng, is_question)
        records.append(
            CorpusRecord(
                transcript=Transcript.from_pairs([("user", text)]),
                question=int(is_question),
            )
        )

    for _ in range(spec.readiness_dialogues):
        total = rng.randint(1, spec.max_dialogue_pairs)
        full = _readiness_dialogue(rng, total)
        # True prefixes of one dialogue, so prefix chains share their content.
        for prefix_pairs in range(1, total + 1):
            prefix = Transcript(full.messages[: 2 * prefix_pairs])
            records.append(
                CorpusRecord(
                    transcript=prefix,
                    ready=int(prefix_pairs >= spec.ready_after),
                    remaining_turns=max(0, spec.ready_after - prefix_pairs),
                    duration=spec.ready_after,
                )
            )

    for _ in range(spec.specialty_chats):
        records.append(_specialty_record(rng, spec))

    return AnnotatedCorpus(records)
