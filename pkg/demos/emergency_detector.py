#!/usr/bin/env python3
"""Train the emergency detector on a synthetic corpus and sweep its
decision threshold.

The corpus is seeded and separable: critical chats draw from one
symptom pool, benign chats from another. Half the records train the
tf-idf -> critical-word flags -> PCA -> boosted-stumps pipeline, the
other half report held-out quality at a range of operating points.
"""

import numpy as np

from triagekit.evalkit.classification import binary_metrics
from triagekit.evalkit.fixtures import FixtureSpec, generate_fixtures
from triagekit.safety.emergency import emergency_score, train_emergency

corpus = generate_fixtures(seed=7, spec=FixtureSpec(emergency_chats=200))
records = corpus.emergency_records()
train, held = records[: len(records) // 2], records[len(records) // 2 :]

model = train_emergency(
    chats=[r.transcript for r in train],
    labels=[r.emergency for r in train],
    llm_flags=[r.llm_flag for r in train],
    critical_words=["chest pain", "cannot breathe", "bleeding", "consciousness"],
    rounds=60,
)
print(
    f"trained: vocab {len(model.vocab.terms)} terms, "
    f"{model.n_components} components, {len(model.scorer.stumps)} stumps"
)

scores = [emergency_score(r.transcript, model, r.llm_flag).score for r in held]
gold = [r.emergency for r in held]

print("\nthreshold  precision  recall   F1     FPR")
for threshold in np.linspace(0.05, 0.95, 10):
    pred = [int(s > threshold) for s in scores]
    m = binary_metrics(pred, gold)
    print(
        f"  {threshold:4.2f}     {m.precision:6.3f}   {m.recall:6.3f}  "
        f"{m.f1:6.3f}  {m.fpr:6.3f}"
    )

verdict = emergency_score(held[0].transcript, model, held[0].llm_flag)
print(f"\nexample chat scored {verdict.score:.3f} -> critical={verdict.critical}")
