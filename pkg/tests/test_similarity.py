from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triagekit.collector.similarity import cosine_similarity


def test_identical_vectors():
    v = np.array([2.0, 3.0, -1.0])
    assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-12)


def test_orthogonal_vectors():
    assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_hand_evaluated_pair():
    # dot((1,0),(1,1)) / (1 * sqrt(2)) = 1/sqrt(2), computed by hand.
    expected = 1.0 / math.sqrt(2.0)
    got = cosine_similarity(np.array([1.0, 0.0]), np.array([1.0, 1.0]))
    assert got == pytest.approx(expected, abs=1e-9)
    assert got == pytest.approx(0.70710678118654752, abs=1e-9)


def test_zero_vector_convention():
    assert cosine_similarity(np.zeros(3), np.array([1.0, 2.0, 3.0])) == 0.0
    assert cosine_similarity(np.zeros(2), np.zeros(2)) == 0.0


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        cosine_similarity(np.ones(2), np.ones(3))


finite_vectors = st.lists(
    st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=2, max_size=6
)


@settings(max_examples=200, deadline=None)
@given(finite_vectors, finite_vectors)
def test_symmetry(a, b):
    size = min(len(a), len(b))
    va, vb = np.array(a[:size]), np.array(b[:size])
    assert cosine_similarity(va, vb) == pytest.approx(
        cosine_similarity(vb, va), abs=1e-12
    )


@settings(max_examples=200, deadline=None)
@given(finite_vectors, st.floats(min_value=0.01, max_value=50))
def test_scale_invariance(a, c):
    v = np.array(a)
    w = np.arange(1.0, len(a) + 1.0)
    assert cosine_similarity(c * v, w) == pytest.approx(
        cosine_similarity(v, w), abs=1e-9
    )


@settings(max_examples=200, deadline=None)
@given(finite_vectors, finite_vectors)
def test_bounded(a, b):
    size = min(len(a), len(b))
    sim = cosine_similarity(np.array(a[:size]), np.array(b[:size]))
    assert -1.0 - 1e-9 <= sim <= 1.0 + 1e-9
