from __future__ import annotations

import pytest

from triagekit.transcript import Message, SessionContext, Transcript, flatten_chat


def test_flatten_empty_transcript():
    assert flatten_chat(Transcript()) == ""


def test_flatten_single_message():
    assert flatten_chat(Transcript.from_pairs([("user", "a")])) == "user: a"


def test_flatten_join_rule():
    # Derived by applying the stated join rule by hand: role-prefixed
    # messages in order, newline separated.
    chat = Transcript.from_pairs([("user", "a"), ("system", "b")])
    assert flatten_chat(chat) == "user: a\nsystem: b"


def test_flatten_is_deterministic():
    chat = Transcript.from_pairs([("user", "x"), ("system", "y"), ("user", "z")])
    assert flatten_chat(chat) == flatten_chat(chat)


def test_unknown_role_rejected():
    with pytest.raises(ValueError):
        Message("assistant", "hi")


def test_append_is_persistent():
    base = Transcript.from_pairs([("user", "a")])
    extended = base.append("system", "b")
    assert len(base) == 1
    assert len(extended) == 2
    assert extended.system_messages() == ["b"]


def test_message_accessors():
    chat = Transcript.from_pairs(
        [("user", "one"), ("system", "two"), ("user", "three")]
    )
    assert chat.user_messages() == ["one", "three"]
    assert chat.last_user_message() == "three"
    assert Transcript().last_user_message() is None


def test_context_with_fact_does_not_mutate():
    ctx = SessionContext(age=30)
    enriched = ctx.with_fact("allergy", "penicillin")
    assert ctx.facts == {}
    assert enriched.facts == {"allergy": "penicillin"}
    assert enriched.age == 30
