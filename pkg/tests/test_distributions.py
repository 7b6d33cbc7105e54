import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentlearn.distributions import (
    FiniteDistribution, FiniteSupport, LaplaceProduct, RademacherCube, StandardGaussian,
    UniformBall, UniformCube, covariance, cube_points, finite_distribution_from_text,
    finite_distribution_to_text, isotropize, kwise_construct, max_parity_residual, rng_for,
    sample, smooth,
)


def test_gaussian_mean_near_zero():
    X = sample(StandardGaussian(2), 0, 100_000)
    assert np.all(np.abs(X.mean(axis=0)) < 0.02)


def test_rademacher_values():
    assert np.all(np.isin(sample(RademacherCube(3), 1, 1000), (-1.0, 1.0)))


@pytest.mark.parametrize("spec", [StandardGaussian(3), UniformBall(3), UniformCube(2),
                                  LaplaceProduct(2), RademacherCube(4)])
def test_same_seed_same_bytes(spec):
    assert sample(spec, 42, 500).tobytes() == sample(spec, 42, 500).tobytes()
    assert sample(spec, 42, 500).tobytes() != sample(spec, 43, 500).tobytes()


def test_ball_points_inside():
    X = sample(UniformBall(3), 3, 20_000)
    r = np.linalg.norm(X, axis=1)
    assert r.max() <= 1.0
    # radius law: Pr[r <= 1/2] = 1/8
    assert abs(np.mean(r <= 0.5) - 0.125) < 0.01


def test_default_smoothing_covariance():
    S = smooth(StandardGaussian(3), 0.5)
    assert np.allclose(S.cov, 0.5 * np.eye(3))
    C = covariance(UniformCube(2))
    assert np.allclose(covariance(smooth(UniformCube(2), 0.3)), 1.3 * C)


def test_smoothed_empirical_covariance():
    X = sample(smooth(RademacherCube(2), 0.5), 5, 200_000)
    assert np.allclose(np.cov(X, rowvar=False), 1.5 * np.eye(2), atol=0.02)


def test_point_mass_needs_explicit_noise():
    mass = FiniteSupport(FiniteDistribution([[0.0]], [1.0]))
    with pytest.raises(ValueError):
        smooth(mass, 0.5)
    S = smooth(mass, 0.5, cov=np.array([[0.25]]))
    assert abs(sample(S, 0, 50_000).std() - 0.5) < 0.01


def test_sigma_range():
    with pytest.raises(ValueError):
        smooth(StandardGaussian(1), 1.5)


def test_isotropize_near_identity_on_gaussian():
    X = sample(StandardGaussian(3), 7, 200_000)
    T, Z = isotropize(X)
    assert np.allclose(T.A, np.eye(3), atol=0.02)
    assert np.allclose(T.b, 0, atol=0.02)
    assert np.allclose(Z.mean(axis=0), 0, atol=1e-10)
    assert np.allclose(np.cov(Z, rowvar=False, bias=True), np.eye(3), atol=1e-10)


def test_isotropize_undoes_scaling():
    X = 3 * sample(StandardGaussian(2), 8, 200_000)
    T, _ = isotropize(X)
    assert np.allclose(T.A, np.eye(2) / 3, atol=0.01)


def test_isotropize_rejects_line():
    t = np.linspace(-1, 1, 100)
    with pytest.raises(ValueError):
        isotropize(np.stack([t, 2 * t], axis=1))


def test_kwise_example_is_pairwise_independent():
    D = FiniteDistribution([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], [0.25] * 4)
    for size in (1, 2):
        for S in itertools.combinations(range(3), size):
            assert np.prod(D.support[:, list(S)], axis=1) @ D.probs == 0.0
    assert max_parity_residual(D, 2) == 0.0
    assert max_parity_residual(D, 3) == 1.0


def test_kwise_k0_total_mass():
    D = kwise_construct(4, 0)
    assert D.probs.sum() == pytest.approx(1.0)


def test_kwise_full_independence_is_uniform():
    D = kwise_construct(3, 3)
    assert len(D) == 8 and np.allclose(D.probs, 1 / 8)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 7), st.data())
def test_kwise_moments_exact(n, data):
    k = data.draw(st.integers(0, n))
    seed = data.draw(st.integers(0, 1000))
    D = kwise_construct(n, k, seed)
    assert max_parity_residual(D, k) <= 1e-12
    assert D.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert set(map(tuple, D.support)) <= set(map(tuple, cube_points(n)))


def test_finite_distribution_round_trip():
    D = FiniteDistribution([[0.5, -1.0], [2.0, 3.0]], [0.3, 0.7])
    E = finite_distribution_from_text(finite_distribution_to_text(D))
    assert np.array_equal(D.support, E.support) and np.array_equal(D.probs, E.probs)


# Tail probes: with alpha fixed per family, C is fitted at t = 1 so that
# C * exp(-alpha * s(1)) equals the empirical tail there; larger t must then
# stay under the curve up to 3-sigma sampling slack.
_TAIL_CASES = [
    (RademacherCube(4), lambda t: t * t, 0.5),
    (UniformCube(4), lambda t: t * t, 0.5),
    (LaplaceProduct(4), lambda t: t, 0.5),
    (smooth(LaplaceProduct(4), 0.5), lambda t: t, 0.5),
]


@pytest.mark.parametrize("spec,shape,alpha", _TAIL_CASES)
def test_tail_decay(spec, shape, alpha):
    N = 100_000
    X = sample(spec, 11, N)
    W = rng_for(11, 99).standard_normal((10, spec.n))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    for w in W:
        z = np.abs(X @ w)
        p1 = np.mean(z > 1)
        C = p1 * np.exp(alpha * shape(1.0))
        for t in (2.0, 3.0, 4.0):
            bound = C * np.exp(-alpha * shape(t))
            slack = 3 * np.sqrt(max(bound * (1 - bound), 1 / N) / N)
            assert np.mean(z > t) <= bound + slack
