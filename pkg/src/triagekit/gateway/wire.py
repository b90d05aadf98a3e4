"""Bit-exact request/response JSON codec.

Request body:  {"Text": str, "OuterContext": {"Sex": bool, "Age": int,
"UserId": str, "SessionId": str, "ClientId": str}}. Response body:
{"Text": str, "Results": [{"Diagnosis", "Doctor", "Description"}...]}.

The schema is strict: unknown fields, missing fields, or wrong types
are rejected. Canonical serialization is 2-space-indented UTF-8 JSON
with the field order above, so serializing a parsed document reproduces
it byte for byte. ``Sex`` is carried opaquely; nothing interprets its
encoding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from triagekit.routing.selector import ReferralTriple

SEPARATOR = ""


class WireFormatError(ValueError):
    """Request body violates the strict wire schema."""


@dataclass(frozen=True)
class OuterContext:
    sex: bool
    age: int
    user_id: str
    session_id: str
    client_id: str


@dataclass(frozen=True)
class UserRequest:
    text: str
    outer_context: OuterContext


@dataclass(frozen=True)
class SystemResponse:
    text: str
    results: tuple[ReferralTriple, ...] = ()


def session_key(ctx: OuterContext) -> str:
    """Canonical dialogue identifier: the three ids joined by unit separators."""
    for name, value in (
        ("UserId", ctx.user_id),
        ("SessionId", ctx.session_id),
        ("ClientId", ctx.client_id),
    ):
        if not value:
            raise WireFormatError(f"{name} must be non-empty")
    return SEPARATOR.join((ctx.user_id, ctx.session_id, ctx.client_id))


def _expect_keys(doc: dict, expected: tuple[str, ...], where: str) -> None:
    keys = set(doc)
    wanted = set(expected)
    if keys - wanted:
        raise WireFormatError(f"unknown fields in {where}: {sorted(keys - wanted)}")
    if wanted - keys:
        raise WireFormatError(f"missing fields in {where}: {sorted(wanted - keys)}")


def deserialize_request(raw: bytes | str) -> UserRequest:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", errors="strict")
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise WireFormatError(f"body is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise WireFormatError("body must be a JSON object")
    _expect_keys(doc, ("Text", "OuterContext"), "request")
    if not isinstance(doc["Text"], str):
        raise WireFormatError("Text must be a string")
    outer = doc["OuterContext"]
    if not isinstance(outer, dict):
        raise WireFormatError("OuterContext must be an object")
    _expect_keys(outer, ("Sex", "Age", "UserId", "SessionId", "ClientId"), "OuterContext")
    if not isinstance(outer["Sex"], bool):
        raise WireFormatError("Sex must be a boolean")
    if isinstance(outer["Age"], bool) or not isinstance(outer["Age"], int):
        raise WireFormatError("Age must be an integer")
    if outer["Age"] < 0:
        raise WireFormatError("Age must be >= 0")
    for field_name in ("UserId", "SessionId", "ClientId"):
        if not isinstance(outer[field_name], str):
            raise WireFormatError(f"{field_name} must be a string")
    return UserRequest(
        text=doc["Text"],
        outer_context=OuterContext(
            sex=outer["Sex"],
            age=outer["Age"],
            user_id=outer["UserId"],
            session_id=outer["SessionId"],
            client_id=outer["ClientId"],
        ),
    )


def _canonical(obj: dict) -> bytes:
    return json.dumps(obj, indent=2, ensure_ascii=False).encode("utf-8")


def serialize_request(request: UserRequest) -> bytes:
    ctx = request.outer_context
    return _canonical(
        {
            "Text": request.text,
            "OuterContext": {
                "Sex": ctx.sex,
                "Age": ctx.age,
                "UserId": ctx.user_id,
                "SessionId": ctx.session_id,
                "ClientId": ctx.client_id,
            },
        }
    )


def serialize_response(response: SystemResponse) -> bytes:
    return _canonical(
        {
            "Text": response.text,
            "Results": [
                {
                    "Diagnosis": t.diagnosis,
                    "Doctor": t.doctor,
                    "Description": t.description,
                }
                for t in response.results
            ],
        }
    )


def deserialize_response(raw: bytes | str) -> SystemResponse:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise WireFormatError(f"body is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise WireFormatError("body must be a JSON object")
    _expect_keys(doc, ("Text", "Results"), "response")
    if not isinstance(doc["Text"], str) or not isinstance(doc["Results"], list):
        raise WireFormatError("Text must be a string and Results a list")
    triples = []
    for item in doc["Results"]:
        if not isinstance(item, dict):
            raise WireFormatError("Results entries must be objects")
        _expect_keys(item, ("Diagnosis", "Doctor", "Description"), "Results entry")
        triples.append(
            ReferralTriple(
                diagnosis=item["Diagnosis"],
                doctor=item["Doctor"],
                description=item["Description"],
            )
        )
    return SystemResponse(text=doc["Text"], results=tuple(triples))
