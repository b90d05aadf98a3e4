from __future__ import annotations

import json
from pathlib import Path

import pytest

from triagekit.gateway.wire import (
    OuterContext,
    SystemResponse,
    UserRequest,
    WireFormatError,
    deserialize_request,
    deserialize_response,
    serialize_request,
    serialize_response,
    session_key,
)
from triagekit.routing.selector import ReferralTriple

GOLDENS = Path(__file__).parent / "goldens"


class TestSessionKey:
    def test_definition(self):
        ctx = OuterContext(sex=True, age=1, user_id="u", session_id="s", client_id="c")
        assert session_key(ctx) == "usc"

    def test_separator_prevents_concatenation_collision(self):
        a = OuterContext(sex=True, age=1, user_id="u", session_id="s", client_id="c")
        b = OuterContext(sex=True, age=1, user_id="us", session_id="c", client_id="x")
        c = OuterContext(sex=True, age=1, user_id="us", session_id="", client_id="c")
        assert session_key(a) != session_key(b)
        with pytest.raises(WireFormatError):
            session_key(c)

    def test_stable(self):
        ctx = OuterContext(sex=False, age=30, user_id="u", session_id="s", client_id="c")
        assert session_key(ctx) == session_key(ctx)

    def test_empty_id_rejected(self):
        for field in ("user_id", "session_id", "client_id"):
            kwargs = dict(sex=True, age=1, user_id="u", session_id="s", client_id="c")
            kwargs[field] = ""
            with pytest.raises(WireFormatError):
                session_key(OuterContext(**kwargs))


class TestRequestCodec:
    def test_golden_request_parses(self):
        raw = (GOLDENS / "request.json").read_bytes()
        request = deserialize_request(raw)
        assert request.text == "User message"
        assert request.outer_context.age == 21
        assert request.outer_context.sex is True
        assert request.outer_context.user_id == "UserId"
        assert request.outer_context.session_id == "SessionId"
        assert request.outer_context.client_id == "ClientId"

    def test_golden_request_round_trips_byte_identical(self):
        raw = (GOLDENS / "request.json").read_bytes()
        assert serialize_request(deserialize_request(raw)) == raw

    def test_unknown_top_level_field_rejected(self):
        doc = json.loads((GOLDENS / "request.json").read_text())
        doc["Extra"] = 1
        with pytest.raises(WireFormatError, match="unknown fields"):
            deserialize_request(json.dumps(doc))

    def test_unknown_outer_context_field_rejected(self):
        doc = json.loads((GOLDENS / "request.json").read_text())
        doc["OuterContext"]["Nickname"] = "zed"
        with pytest.raises(WireFormatError, match="unknown fields"):
            deserialize_request(json.dumps(doc))

    def test_missing_client_id_rejected(self):
        doc = json.loads((GOLDENS / "request.json").read_text())
        del doc["OuterContext"]["ClientId"]
        with pytest.raises(WireFormatError, match="missing fields"):
            deserialize_request(json.dumps(doc))

    def test_malformed_json_rejected(self):
        with pytest.raises(WireFormatError, match="JSON"):
            deserialize_request(b"{not json")

    def test_type_violations_rejected(self):
        base = json.loads((GOLDENS / "request.json").read_text())
        bad_sex = dict(base, OuterContext=dict(base["OuterContext"], Sex="male"))
        bad_age = dict(base, OuterContext=dict(base["OuterContext"], Age=True))
        negative_age = dict(base, OuterContext=dict(base["OuterContext"], Age=-1))
        bad_text = dict(base, Text=5)
        for doc in (bad_sex, bad_age, negative_age, bad_text):
            with pytest.raises(WireFormatError):
                deserialize_request(json.dumps(doc))

    def test_non_object_body_rejected(self):
        with pytest.raises(WireFormatError):
            deserialize_request(b"[1, 2]")


ROUTED = SystemResponse(
    text="Is everything clear? Feel free to ask questions!",
    results=(
        ReferralTriple(
            "Cervicogenic headache",
            "General practitioner",
            "Pain in the back of the head may be related to cervical-spine issues.",
        ),
        ReferralTriple(
            "Cervical osteochondrosis",
            "Neurologist",
            "Neck pathology may provoke occipital pain.",
        ),
        ReferralTriple(
            "Tension headache",
            "Neurologist",
            "Sustained muscle tension commonly causes pain at the back of the head.",
        ),
    ),
)


class TestResponseCodec:
    def test_empty_results_golden(self):
        response = SystemResponse(text="What's bothering you?")
        assert serialize_response(response) == (GOLDENS / "response_empty.json").read_bytes()

    def test_routed_golden(self):
        assert serialize_response(ROUTED) == (GOLDENS / "response_routed.json").read_bytes()

    def test_serialization_idempotent(self):
        assert serialize_response(ROUTED) == serialize_response(ROUTED)

    def test_response_round_trip(self):
        raw = serialize_response(ROUTED)
        parsed = deserialize_response(raw)
        assert parsed == ROUTED
        assert serialize_response(parsed) == raw

    def test_response_strict_schema(self):
        with pytest.raises(WireFormatError):
            deserialize_response(b'{"Text": "x"}')
        with pytest.raises(WireFormatError):
            deserialize_response(b'{"Text": "x", "Results": [], "More": 1}')


def test_sex_carried_opaquely():
    for sex in (True, False):
        request = UserRequest(
            text="t",
            outer_context=OuterContext(
                sex=sex, age=0, user_id="u", session_id="s", client_id="c"
            ),
        )
        parsed = deserialize_request(serialize_request(request))
        assert parsed.outer_context.sex is sex
