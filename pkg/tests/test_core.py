import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentlearn.core import (
    Halfspace, HalfspaceFunction, Polynomial, enumerate_multi_indices, eval_function,
    eval_halfspace, eval_polynomial, margins, num_multi_indices, polynomial_from_text,
    polynomial_to_text, regularity, sign,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_halfspace_positive_margin():
    assert eval_halfspace(Halfspace([1, 0], 0), np.array([2.0, 5.0])) == 1


def test_boundary_is_positive():
    assert eval_halfspace(Halfspace([1, 0], 0), np.array([0.0, 3.0])) == 1
    assert sign(0.0) == 1


def test_constructor_normalises():
    h = Halfspace([3, 4], 5)
    assert np.allclose(h.w, [0.6, 0.8]) and h.theta == pytest.approx(1.0)
    X = np.random.default_rng(0).normal(size=(200, 2)) * 3
    assert np.array_equal(h(X), sign(X @ np.array([3, 4]) - 5))


def test_zero_normal_rejected():
    with pytest.raises(ValueError):
        Halfspace([0, 0], 1)


def test_and_of_quadrants():
    F = HalfspaceFunction.intersection([Halfspace([1, 0]), Halfspace([0, 1])])
    assert eval_function(F, np.array([1.0, 1.0])) == 1
    assert eval_function(F, np.array([1.0, -1.0])) == -1


def test_identity_function_matches_halfspace():
    h = Halfspace([0.3, -1.2, 2.0], 0.4)
    F = HalfspaceFunction.from_callable([h], lambda s: s)
    X = np.random.default_rng(1).normal(size=(500, 3))
    assert np.array_equal(eval_function(F, X), eval_halfspace(h, X))


def test_xor_table_on_quadrant_representatives():
    F = HalfspaceFunction.from_callable([Halfspace([1, 0]), Halfspace([0, 1])],
                                        lambda a, b: a * b)
    for s1, s2 in itertools.product((-1, 1), repeat=2):
        assert eval_function(F, np.array([s1 * 0.5, s2 * 2.0])) == s1 * s2


def test_margins():
    F = HalfspaceFunction.intersection([Halfspace([1, 0]), Halfspace([0, 1])])
    assert np.allclose(margins(F, np.array([2.0, 3.0])), [2, 3])
    assert np.allclose(margins(F, np.zeros(2)), 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 3), st.integers(1, 4))
def test_margins_agree_with_halfspaces(seed, m, n):
    rng = np.random.default_rng(seed)
    hs = [Halfspace(rng.normal(size=n) + 1e-3, rng.normal()) for _ in range(m)]
    F = HalfspaceFunction.from_callable(hs, lambda *s: s[0])
    X = rng.normal(size=(20, n))
    M = margins(F, X)
    for r, h in enumerate(hs):
        assert np.array_equal(sign(M[:, r] - h.theta), eval_halfspace(h, X))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 3))
def test_label_depends_only_on_pattern(seed, m):
    rng = np.random.default_rng(seed)
    n = 3
    hs = [Halfspace(rng.normal(size=n) + 1e-3, rng.normal()) for _ in range(m)]
    table = rng.choice([-1, 1], size=2 ** m)
    F = HalfspaceFunction(tuple(hs), table)
    X = rng.normal(size=(300, n)) * 2
    pats = np.stack([eval_halfspace(h, X) for h in hs], axis=1)
    labels = eval_function(F, X)
    for p in np.unique(pats, axis=0):
        assert len(set(labels[np.all(pats == p, axis=1)])) == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=3, max_size=3), finite, st.floats(0.01, 100))
def test_positive_scaling_invariance(w, theta, c):
    if np.linalg.norm(w) < 1e-3:
        return
    X = np.random.default_rng(2).normal(size=(50, 3)) * 5
    a, b = Halfspace(w, theta), Halfspace(np.asarray(w) * c, theta * c)
    assert np.array_equal(a(X), b(X))


def test_multi_indices_small_cases():
    assert set(enumerate_multi_indices(2, 2)) == {(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}
    assert enumerate_multi_indices(0, 5) == [(0,) * 5]
    assert len(enumerate_multi_indices(3, 1)) == 4


def test_multi_indices_counts_exhaustive():
    for k in range(7):
        for n in range(1, 7):
            idx = enumerate_multi_indices(k, n)
            assert len(idx) == comb(n + k, k) == num_multi_indices(k, n)
            assert len(set(idx)) == len(idx)
            degrees = [sum(I) for I in idx]
            assert degrees == sorted(degrees)


def test_polynomial_evaluation():
    p = Polynomial({(2, 1): 1.0})
    assert eval_polynomial(p, np.array([2.0, 3.0])) == 12.0
    assert eval_polynomial(Polynomial({}, 3), np.ones(3)) == 0.0


def _naive(terms, x):
    total = 0.0
    for I, a in terms.items():
        v = a
        for xi, e in zip(x, I):
            for _ in range(e):
                v *= xi
        total += v
    return total


def test_polynomial_matches_naive_evaluator():
    rng = np.random.default_rng(3)
    for _ in range(20):
        terms = {tuple(rng.integers(0, 4, size=3)): rng.normal() for _ in range(5)}
        p = Polynomial(terms, 3)
        x = rng.normal(size=3)
        assert eval_polynomial(p, x) == pytest.approx(_naive(p.coefficients, x), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_evaluation_is_linear(seed):
    rng = np.random.default_rng(seed)
    idx = enumerate_multi_indices(3, 2)
    p = Polynomial.from_vector(idx, rng.normal(size=len(idx)))
    q = Polynomial.from_vector(idx, rng.normal(size=len(idx)))
    X = rng.normal(size=(10, 2))
    assert np.allclose(eval_polynomial(p + q, X), eval_polynomial(p, X) + eval_polynomial(q, X),
                       rtol=1e-12, atol=1e-12)


def test_regularity_examples():
    assert regularity(Polynomial({(1, 0): 1.0})) == pytest.approx(1.0)
    half = Polynomial({tuple(int(i == j) for i in range(4)): 0.5 for j in range(4)})
    assert regularity(half) == pytest.approx(0.5)
    assert regularity(Polynomial({(1, 1): 1.0})) == pytest.approx(np.sqrt(2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3))
def test_regularity_scaling_and_permutation(seed, c):
    rng = np.random.default_rng(seed)
    n = 4
    idx = [I for I in enumerate_multi_indices(2, n) if max(I) <= 1 and sum(I)]
    p = Polynomial({I: rng.normal() for I in idx}, n)
    perm = rng.permutation(n)
    permuted = Polynomial({tuple(I[j] for j in perm): a for I, a in p.coefficients.items()}, n)
    assert regularity(p * c) == pytest.approx(regularity(p), rel=1e-10)
    assert regularity(permuted) == pytest.approx(regularity(p), rel=1e-10)


def test_polynomial_text_round_trip():
    p = Polynomial({(0, 0): 0.1, (1, 2): -3.25, (0, 1): 1 / 3})
    assert polynomial_from_text(polynomial_to_text(p)) == p
