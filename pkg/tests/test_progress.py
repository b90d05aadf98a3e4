from __future__ import annotations

import numpy as np
import pytest

from triagekit.adapters.embedding import EmbedderSpec
from triagekit.evalkit.classification import binary_metrics
from triagekit.progress.linear import (
    KIND_QUESTION,
    KIND_READINESS,
    LinearTextModel,
    constant_relevance_model,
    detect_question,
    estimate_readiness,
    fit_linear,
    load_linear_model,
    logistic_loss_and_grad,
    save_linear_model,
)
from triagekit.safety.features import TfidfVocabulary
from triagekit.transcript import Transcript


def _zero_model(kind: str) -> LinearTextModel:
    embedder = EmbedderSpec(dimension=8)
    vocab = TfidfVocabulary.fit(["one doc", "two docs"])
    extras = 1 if kind == KIND_READINESS else 0
    return LinearTextModel(
        kind=kind,
        vocab=vocab,
        embedder=embedder,
        weights=np.zeros(len(vocab.terms) + 8 + extras),
        bias=0.0,
    )


def test_zero_weight_question_model_scores_half():
    verdict = detect_question("anything at all?", _zero_model(KIND_QUESTION))
    assert verdict.score == pytest.approx(0.5)
    assert verdict.is_question is True  # 0.5 >= threshold 0.5


def test_zero_weight_readiness_scores_half_regardless_of_history():
    model = _zero_model(KIND_READINESS)
    short = Transcript.from_pairs([("user", "hi")])
    long = Transcript.from_pairs([("user", "a"), ("system", "b"), ("user", "c")])
    assert estimate_readiness(short, model).score == pytest.approx(0.5)
    assert estimate_readiness(long, model).score == pytest.approx(0.5)


def test_readiness_requires_user_message():
    model = _zero_model(KIND_READINESS)
    with pytest.raises(ValueError):
        estimate_readiness(Transcript.from_pairs([("system", "hello")]), model)


def test_verdict_flips_exactly_at_threshold():
    model = _zero_model(KIND_QUESTION)  # every score is exactly 0.5
    below = detect_question("x", LinearTextModel(
        kind=model.kind, vocab=model.vocab, embedder=model.embedder,
        weights=model.weights, bias=model.bias, decision_threshold=0.5000001,
    ))
    at = detect_question("x", model)
    assert at.is_question is True      # score == threshold -> positive
    assert below.is_question is False  # score just under threshold


def test_kind_mismatch_rejected():
    with pytest.raises(ValueError):
        detect_question("x", _zero_model(KIND_READINESS))
    with pytest.raises(ValueError):
        estimate_readiness(Transcript.from_pairs([("user", "x")]), _zero_model(KIND_QUESTION))


def test_scores_strictly_inside_unit_interval(question_model, question_split):
    _, held = question_split
    for record in held[:50]:
        score = detect_question(record.transcript.user_messages()[0], question_model).score
        assert 0.0 < score < 1.0


def test_feature_extraction_is_pure(question_model):
    a = question_model.features_for_message("is this a question?")
    b = question_model.features_for_message("is this a question?")
    assert np.array_equal(a, b)


def test_separable_two_point_corpus_reaches_full_accuracy():
    corpus = [("is it serious?", 1), ("my back hurts", 0)]
    model = fit_linear(corpus, KIND_QUESTION)
    assert detect_question("is it serious?", model).is_question is True
    assert detect_question("my back hurts", model).is_question is False


def test_contradictory_labels_settle_at_half():
    corpus = [("ambiguous text", 1), ("ambiguous text", 0)]
    model = fit_linear(corpus, KIND_QUESTION)
    assert detect_question("ambiguous text", model).score == pytest.approx(0.5, abs=1e-3)


def test_single_class_corpus_rejected():
    with pytest.raises(ValueError):
        fit_linear([("a?", 1), ("b?", 1)], KIND_QUESTION)


def test_question_fixture_heldout_f1(question_model, question_split):
    _, held = question_split
    pred = [
        int(detect_question(r.transcript.user_messages()[0], question_model).is_question)
        for r in held
    ]
    gold = [r.question for r in held]
    assert binary_metrics(pred, gold).f1 >= 0.9


def test_question_fixture_examples(question_model):
    assert detect_question("what does that mean?", question_model).is_question is True
    assert detect_question("my head hurts", question_model).is_question is False


def test_readiness_fixture_heldout(readiness_model, readiness_split):
    _, held = readiness_split
    pred = [int(estimate_readiness(r.transcript, readiness_model).ready) for r in held]
    gold = [r.ready for r in held]
    assert binary_metrics(pred, gold).f1 >= 0.9


def test_readiness_staging(readiness_model, readiness_split):
    _, held = readiness_split
    five_pair = [r for r in held if len(r.transcript.user_messages()) == 5]
    one_pair = [r for r in held if len(r.transcript.user_messages()) == 1]
    assert five_pair and one_pair
    for record in five_pair:
        assert estimate_readiness(record.transcript, readiness_model).ready is True
    for record in one_pair:
        assert estimate_readiness(record.transcript, readiness_model).ready is False


def test_remaining_turns_nonnegative(readiness_model, readiness_split):
    _, held = readiness_split
    for record in held:
        verdict = estimate_readiness(record.transcript, readiness_model)
        assert verdict.predicted_remaining_turns >= 0


def test_history_monotone_on_fixture_chains(readiness_model, fixture_corpus):
    """Appending an informative QA pair never lowers the score on the
    fixture's own prefix chains."""
    records = fixture_corpus.readiness_records()
    chains: list[list] = []
    for record in records:
        if len(record.transcript.user_messages()) == 1:
            chains.append([])
        chains[-1].append(record)
    assert chains
    checked = 0
    for chain in chains:
        scores = [
            estimate_readiness(r.transcript, readiness_model).score for r in chain
        ]
        assert scores == sorted(scores), f"scores dipped along a prefix chain: {scores}"
        checked += len(scores)
    assert checked == len(records)


def test_gradient_matches_finite_differences():
    """Analytic gradient vs central differences on a 5-example corpus."""
    texts = ["is it bad?", "my arm hurts", "should i rest?", "i feel fine", "why me?"]
    labels = np.array([1.0, 0.0, 1.0, 0.0, 1.0])
    vocab = TfidfVocabulary.fit(texts)
    embedder = EmbedderSpec(dimension=8)
    from triagekit.adapters.embedding import embed

    x = np.stack(
        [np.concatenate([vocab.transform(t), embed(embedder, t)]) for t in texts]
    )
    rng = np.random.default_rng(0)
    params = rng.normal(scale=0.5, size=x.shape[1] + 1)
    l2 = 1e-3
    _, analytic = logistic_loss_and_grad(params, x, labels, l2)

    eps = 1e-6
    for i in range(len(params)):
        bumped = params.copy()
        bumped[i] += eps
        up, _ = logistic_loss_and_grad(bumped, x, labels, l2)
        bumped[i] -= 2 * eps
        down, _ = logistic_loss_and_grad(bumped, x, labels, l2)
        numeric = (up - down) / (2 * eps)
        denom = max(abs(numeric), abs(analytic[i]), 1e-8)
        assert abs(numeric - analytic[i]) / denom < 1e-4


def test_training_loss_non_increasing():
    from triagekit.progress.linear import _train_logistic

    texts = ["is it bad?", "my arm hurts", "should i rest?", "i feel fine", "why me?"]
    labels = np.array([1.0, 0.0, 1.0, 0.0, 1.0])
    vocab = TfidfVocabulary.fit(texts)
    x = np.stack([vocab.transform(t) for t in texts])
    _, _, losses = _train_logistic(
        x, labels, l2=1e-4, learning_rate=1.0, max_epochs=200, tol=1e-9
    )
    assert all(b <= a + 1e-15 for a, b in zip(losses, losses[1:]))


def test_bundle_round_trip(tmp_path, question_model):
    path = tmp_path / "question.json"
    save_linear_model(question_model, path)
    loaded = load_linear_model(path)
    for text in ("is it serious?", "i slept badly"):
        assert detect_question(text, loaded).score == pytest.approx(
            detect_question(text, question_model).score, abs=1e-12
        )


def test_readiness_bundle_round_trip(tmp_path, readiness_model):
    path = tmp_path / "readiness.json"
    save_linear_model(readiness_model, path)
    loaded = load_linear_model(path)
    chat = Transcript.from_pairs([("user", "my knee hurts"), ("system", "since when?")])
    original = estimate_readiness(chat, readiness_model)
    restored = estimate_readiness(chat, loaded)
    assert original == restored


def test_constant_relevance_model_scores_half():
    model = constant_relevance_model()
    assert model.score(model.features_for_message("anything")) == pytest.approx(0.5)
