from __future__ import annotations

import numpy as np
import pytest

from triagekit.evalkit.classification import binary_metrics
from triagekit.safety.boosting import Stump, StumpEnsemble
from triagekit.safety.emergency import (
    EmergencyModel,
    EmergencyVerdict,
    ModelIntegrityError,
    emergency_score,
    load_emergency_model,
    save_emergency_model,
)
from triagekit.safety.features import TfidfVocabulary
from triagekit.transcript import Transcript


def _tiny_model(scorer: StumpEnsemble, threshold: float = 0.11) -> EmergencyModel:
    vocab = TfidfVocabulary.fit(["chest pain", "mild ache"])
    dim = len(vocab.terms) + 1 + 1  # one critical word + flag
    return EmergencyModel(
        vocab=vocab,
        critical_words=("bleeding",),
        pca_mean=np.zeros(dim),
        pca_basis=np.eye(dim)[:2],
        scorer=scorer,
        threshold=threshold,
    )


CHAT = Transcript.from_pairs([("user", "chest pain")])


def test_empty_ensemble_scores_half():
    model = _tiny_model(StumpEnsemble(), threshold=0.4)
    verdict = emergency_score(CHAT, model, llm_flag=False)
    assert verdict.score == pytest.approx(0.5)
    assert verdict.critical is True  # 0.5 > 0.4
    assert emergency_score(CHAT, _tiny_model(StumpEnsemble(), 0.6), False).critical is False


def test_saturating_stump_forces_critical():
    scorer = StumpEnsemble(
        stumps=[Stump(feature=0, threshold=-np.inf, left_value=10.0, right_value=10.0)]
    )
    verdict = emergency_score(CHAT, _tiny_model(scorer), llm_flag=False)
    assert verdict.score == pytest.approx(1.0, abs=1e-4)
    assert verdict.critical is True


def test_threshold_is_strict():
    model = _tiny_model(StumpEnsemble(), threshold=0.5)
    verdict = emergency_score(CHAT, model, llm_flag=False)
    assert verdict.score == pytest.approx(0.5)
    assert verdict.critical is False  # score > t, strict


def test_determinism(emergency_model, emergency_split):
    _, held = emergency_split
    chat = held[0].transcript
    a = emergency_score(chat, emergency_model, llm_flag=True)
    b = emergency_score(chat, emergency_model, llm_flag=True)
    assert a == b


def test_heldout_ranking_separation(emergency_model, emergency_split):
    """Every held-out positive must outscore every held-out negative."""
    _, held = emergency_split
    positives = [
        emergency_score(r.transcript, emergency_model, r.llm_flag).score
        for r in held
        if r.emergency
    ]
    negatives = [
        emergency_score(r.transcript, emergency_model, r.llm_flag).score
        for r in held
        if not r.emergency
    ]
    assert positives and negatives
    assert min(positives) > max(negatives)


def test_heldout_f1(emergency_model, emergency_split):
    _, held = emergency_split
    pred = [
        int(emergency_score(r.transcript, emergency_model, r.llm_flag).critical)
        for r in held
    ]
    gold = [r.emergency for r in held]
    assert binary_metrics(pred, gold).f1 >= 0.90


def test_threshold_monotonicity(emergency_model, emergency_split):
    """Raising the threshold never increases FP count or recall."""
    _, held = emergency_split
    scores = [
        emergency_score(r.transcript, emergency_model, r.llm_flag).score for r in held
    ]
    gold = [r.emergency for r in held]
    previous_fp = None
    previous_recall = None
    for t in np.linspace(0.01, 0.99, 50):
        pred = [int(s > t) for s in scores]
        m = binary_metrics(pred, gold)
        if previous_fp is not None:
            assert m.fp <= previous_fp
            assert m.recall <= previous_recall
        previous_fp, previous_recall = m.fp, m.recall


def test_pca_stage_well_formed(emergency_model):
    basis = emergency_model.pca_basis
    assert np.allclose(basis @ basis.T, np.eye(basis.shape[0]), atol=1e-8)
    assert np.allclose(emergency_model.pca_mean.shape[0], basis.shape[1])


def test_bundle_round_trip(tmp_path, emergency_model, emergency_split):
    path = tmp_path / "emergency.json"
    save_emergency_model(emergency_model, path)
    loaded = load_emergency_model(path)
    _, held = emergency_split
    for record in held[:10]:
        original = emergency_score(record.transcript, emergency_model, record.llm_flag)
        restored = emergency_score(record.transcript, loaded, record.llm_flag)
        assert original.score == pytest.approx(restored.score, abs=1e-12)
        assert original.critical == restored.critical


def test_dimension_mismatch_rejected():
    vocab = TfidfVocabulary.fit(["chest pain", "mild ache"])
    with pytest.raises(ModelIntegrityError):
        EmergencyModel(
            vocab=vocab,
            critical_words=("bleeding",),
            pca_mean=np.zeros(3),  # wrong: features have |terms| + 2
            pca_basis=np.eye(3)[:1],
            scorer=StumpEnsemble(),
        )


def test_non_orthonormal_basis_rejected():
    vocab = TfidfVocabulary.fit(["chest pain", "mild ache"])
    dim = len(vocab.terms) + 2
    basis = np.ones((2, dim))
    with pytest.raises(ModelIntegrityError):
        EmergencyModel(
            vocab=vocab,
            critical_words=("bleeding",),
            pca_mean=np.zeros(dim),
            pca_basis=basis,
            scorer=StumpEnsemble(),
        )


def test_threshold_bounds():
    with pytest.raises(ValueError):
        _tiny_model(StumpEnsemble(), threshold=0.0)
    with pytest.raises(ValueError):
        EmergencyVerdict(score=1.5, critical=True)
