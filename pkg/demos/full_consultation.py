#!/usr/bin/env python3
"""Replay a complete scripted consultation through the gateway, offline.

Wires the shipped six-state graph to deterministic stand-ins for the
four decision services and a rule-based chat stub, then drives the
classic headache work-up: greeting, three follow-up questions, and a
three-way referral with explanations.
"""

from triagekit.adapters.scripted import ScriptedRule, ScriptedStubBackend
from triagekit.fsm.clinical import ClinicalRuntime, DecisionServices, default_clinical_graph
from triagekit.gateway.service import GatewayService
from triagekit.gateway.wire import OuterContext, UserRequest, serialize_response
from triagekit.progress.linear import QuestionVerdict, ReadinessVerdict
from triagekit.safety.emergency import EmergencyVerdict
from triagekit.safety.moderation import ModerationVerdict

FOLLOW_UPS = {
    "i have a headache": "Where exactly is the pain located?",
    "the back of my head": "Are you experiencing any other symptoms, such as nausea or vomiting?",
    "no": "How intense is the pain?",
}

REFERRALS = [
    ("Cervicogenic headache", "General practitioner",
     "Pain in the back of the head may be related to cervical-spine issues."),
    ("Cervical osteochondrosis", "Neurologist",
     "Neck pathology may provoke occipital pain."),
    ("Tension headache", "Neurologist",
     "Sustained muscle tension commonly causes pain at the back of the head."),
]


class ConsultationStub(ScriptedStubBackend):
    def complete(self, request):
        if request.tag == "explain":
            for name, _, description in REFERRALS:
                if name.lower() in request.system_prompt.lower():
                    return description
        return super().complete(request)


rules = [
    ScriptedRule(tag="collector", contains=key, reply=question)
    for key, question in FOLLOW_UPS.items()
]
rules.append(ScriptedRule(tag="hypotheses", reply="\n".join(n for n, _, _ in REFERRALS)))
rules.extend(
    ScriptedRule(tag="specialist", contains=name.lower(), reply=doctor)
    for name, doctor, _ in REFERRALS
)

services = DecisionServices(
    moderation=lambda text: ModerationVerdict(flagged=False),
    emergency=lambda chat: EmergencyVerdict(score=0.02, critical=False),
    readiness=lambda chat: ReadinessVerdict(
        ready=len([m for m in chat.user_messages() if m.strip()]) >= 4,
        score=0.9,
        predicted_remaining_turns=0,
    ),
    question=lambda text: QuestionVerdict(
        is_question=text.strip().endswith("?"), score=0.9
    ),
)

runtime = ClinicalRuntime(services=services, llm=ConsultationStub(rules))
service = GatewayService(default_clinical_graph(runtime))
who = OuterContext(sex=True, age=21, user_id="demo", session_id="one", client_id="cli")

for text in ["", "I have a headache.", "The back of my head.", "No.", "5 out of 10."]:
    response = service.handle_request(UserRequest(text=text, outer_context=who))
    if text:
        print(f"patient: {text}")
    print(f"doctor:  {response.text}")
    for triple in response.results:
        print(f"         {triple.diagnosis} - {triple.doctor}. {triple.description}")
    print()

print("raw wire body of the last turn:")
print(serialize_response(response).decode("utf-8"))
