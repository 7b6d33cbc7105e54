import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentlearn.core import enumerate_multi_indices, monomial_matrix
from momentlearn.distributions import (
    FiniteDistribution, FiniteSupport, LaplaceProduct, RademacherCube, StandardGaussian,
    UniformBall, UniformCube, sample, smooth,
)
from momentlearn.moments import (
    beta_profile, directional_moment, empirical_moments, exact_directional_moment,
    exact_moments, moment_vector_from_text, moment_vector_to_text,
)


def test_single_point_moments():
    mv = empirical_moments(np.array([[2.0, 3.0]]), 1)
    assert mv[(0, 0)] == 1 and mv[(1, 0)] == 2 and mv[(0, 1)] == 3


def test_rademacher_square_is_one():
    mv = empirical_moments(sample(RademacherCube(2), 0, 1000), 2)
    assert mv[(2, 0)] == 1.0


def test_gaussian_fourth_moment_empirical():
    mv = empirical_moments(sample(StandardGaussian(1), 1, 1_000_000), 4)
    assert abs(mv[(4,)] - 3.0) < 0.1


def test_rademacher_exact_parity_rule():
    mv = exact_moments(RademacherCube(3), 4)
    for I, v in mv.as_dict().items():
        assert v == (1.0 if all(e % 2 == 0 for e in I) else 0.0)


def test_cube_second_moment_by_quadrature():
    from scipy.integrate import quad

    oracle = quad(lambda x: x * x / 2, -1, 1)[0]
    assert exact_moments(UniformCube(2), 2)[(2, 0)] == pytest.approx(oracle, rel=1e-12)


def test_gaussian_fourth_moment_by_quadrature():
    from scipy.integrate import quad

    oracle = quad(lambda x: x ** 4 * math.exp(-x * x / 2) / math.sqrt(2 * math.pi),
                  -np.inf, np.inf)[0]
    assert exact_moments(StandardGaussian(2), 4)[(4, 0)] == pytest.approx(oracle, rel=1e-9)


def test_ball_moments_against_monte_carlo():
    X = sample(UniformBall(3), 2, 400_000)
    ex = exact_moments(UniformBall(3), 4)
    em = empirical_moments(X, 4)
    assert np.allclose(ex.values, em.values, atol=0.005)
    assert ex[(2, 0, 0)] == pytest.approx(1 / 5)


def test_directional_gaussian():
    w = np.array([0.6, 0.8])
    X = sample(StandardGaussian(2), 3, 100_000)
    assert abs(directional_moment(X, w, 2) - 1) < 0.02
    assert abs(directional_moment(X, w, 4) - 3) < 0.1


def test_exact_directional_matches_expansion():
    w = np.array([0.3, -0.5, 0.81])
    for spec in (StandardGaussian(3), UniformCube(3), LaplaceProduct(3), UniformBall(3)):
        via_moments = 0.0
        mv = exact_moments(spec, 4)
        for I, v in mv.as_dict().items():
            if sum(I) == 4:
                coef = math.factorial(4) / math.prod(math.factorial(e) for e in I)
                via_moments += coef * np.prod(w ** np.array(I)) * v
        assert exact_directional_moment(spec, w, 4) == pytest.approx(via_moments, rel=1e-12)


def test_ball_r4_margin():
    X = sample(UniformBall(3), 4, 100_000)
    w = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    m2 = directional_moment(X, w, 2)
    assert 4 ** 4 * m2 ** 2 >= 10 * directional_moment(X, w, 4)


@pytest.mark.parametrize("spec", [UniformBall(3), StandardGaussian(3)])
@pytest.mark.parametrize("seed", range(3))
def test_power_moment_probe(spec, seed):
    X = sample(spec, seed, 50_000)
    w = np.random.default_rng(seed).normal(size=3)
    w /= np.linalg.norm(w)
    m2 = directional_moment(X, w, 2)
    for r in (2, 4, 6, 8):
        assert directional_moment(X, w, r) <= r ** r * m2 ** (r / 2)


def test_beta_profiles():
    g = beta_profile(StandardGaussian(1), [[1.0]], 16)
    assert g.beta(16) >= 4
    lap = beta_profile(LaplaceProduct(1), [[1.0]], 16)
    assert lap.beta(16) / lap.beta(4) <= 2.5


def test_beta_uses_double_factorial():
    prof = beta_profile(StandardGaussian(1), [[1.0]], 5)
    oracle = [math.prod(range(2 * j - 1, 0, -2)) for j in range(1, 6)]
    assert [v for _, v in prof.mu] == pytest.approx(oracle)


@pytest.mark.parametrize("spec", [StandardGaussian(2), LaplaceProduct(2), UniformBall(2),
                                  UniformCube(2), RademacherCube(2)])
def test_beta_nondecreasing(spec):
    b = beta_profile(spec, np.eye(2), 10).betas
    assert np.all(np.diff(b) > 0)


def test_finite_support_exact_equals_weighted():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(7, 2))
    probs = rng.dirichlet(np.ones(7))
    ex = exact_moments(FiniteSupport(FiniteDistribution(pts, probs)), 3)
    idx = enumerate_multi_indices(3, 2)
    assert np.allclose(ex.values, probs @ monomial_matrix(pts, idx), atol=1e-12)


def test_smoothed_second_moment_diagonal():
    for inner in (UniformCube(2), LaplaceProduct(2), RademacherCube(2)):
        base = exact_moments(inner, 2)
        sm = exact_moments(smooth(inner, 0.4), 2)
        assert sm[(2, 0)] == pytest.approx(1.4 * base[(2, 0)])
        assert sm[(0, 2)] == pytest.approx(1.4 * base[(0, 2)])


@pytest.mark.parametrize("spec", [StandardGaussian(2), UniformCube(2), LaplaceProduct(2),
                                  RademacherCube(2), UniformBall(2)])
def test_empirical_converges(spec):
    k, N = 4, 20_000
    ex = exact_moments(spec, k).values
    idx = enumerate_multi_indices(k, 2)
    for seed in range(10):
        X = sample(spec, seed, N)
        M = monomial_matrix(X, idx)
        sd = M.std(axis=0)
        em = empirical_moments(X, k).values
        assert np.all(np.abs(em - ex) <= 5 * sd / np.sqrt(N) + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 3), st.integers(0, 4))
def test_text_round_trip(seed, n, k):
    X = np.random.default_rng(seed).normal(size=(5, n))
    mv = empirical_moments(X, k)
    back = moment_vector_from_text(moment_vector_to_text(mv))
    assert back.k == k and np.array_equal(back.values, mv.values)
