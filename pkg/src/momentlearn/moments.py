"""Moment vectors over I(k, n), directional moments and the beta growth profile."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import enumerate_multi_indices, monomial_matrix
from .distributions import (
    FiniteSupport, KWise, LaplaceProduct, RademacherCube, Smoothed,
    StandardGaussian, UniformBall, UniformCube,
)

__all__ = [
    "MomentVector", "BetaProfile",
    "empirical_moments", "exact_moments", "directional_moment",
    "exact_directional_moment", "beta_profile", "univariate_moments",
    "moment_vector_to_text", "moment_vector_from_text", "default_directions",
]

_PRODUCT = (StandardGaussian, UniformCube, LaplaceProduct, RademacherCube)


@dataclass(frozen=True, eq=False)
class MomentVector:
    """``sigma_I = E[x(I)]`` for every ``I`` in ``I(k, n)``, graded lex order."""

    k: int
    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (math.comb(self.n + self.k, self.k),):
            raise ValueError("moment vector length does not match I(k, n)")
        if not np.all(np.isfinite(vals)):
            raise ValueError("moments must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def indices(self) -> list:
        return enumerate_multi_indices(self.k, self.n)

    def __getitem__(self, I) -> float:
        return float(self.values[_position(self.k, self.n)[tuple(I)]])

    def as_dict(self) -> dict:
        return dict(zip(self.indices, self.values))

    def restrict(self, indices) -> np.ndarray:
        pos = _position(self.k, self.n)
        return self.values[[pos[tuple(I)] for I in indices]]


@lru_cache(maxsize=None)
def _position(k, n):
    return {I: j for j, I in enumerate(enumerate_multi_indices(k, n))}


def moment_vector_to_text(mv: MomentVector) -> str:
    """One line per index: exponents, then the value with 17 significant digits."""
    lines = [" ".join(str(e) for e in I) + " " + format(v, ".17g")
             for I, v in zip(mv.indices, mv.values)]
    return "\n".join(lines) + "\n"


def moment_vector_from_text(text: str) -> MomentVector:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    n = len(rows[0]) - 1
    k = max(sum(int(e) for e in r[:n]) for r in rows)
    got = {tuple(int(e) for e in r[:n]): float(r[n]) for r in rows}
    return MomentVector(k, n, np.array([got[I] for I in enumerate_multi_indices(k, n)]))


# ---------------------------------------------------------------------------
# empirical moments

def _compensated_mean(M: np.ndarray) -> np.ndarray:
    # pairwise block sums, combined exactly with fsum
    N = M.shape[0]
    block = 4096
    partial = np.add.reduceat(M, np.arange(0, N, block), axis=0)
    return np.array([math.fsum(col) for col in partial.T]) / N


def empirical_moments(points, k: int) -> MomentVector:
    X = np.atleast_2d(np.asarray(points, dtype=float))
    if X.shape[0] == 0:
        raise ValueError("empty sample")
    if k < 0:
        raise ValueError("order must be nonnegative")
    idx = enumerate_multi_indices(k, X.shape[1])
    vals = _compensated_mean(monomial_matrix(X, idx))
    vals[0] = 1.0
    return MomentVector(k, X.shape[1], vals)


def directional_moment(points, w, r: float) -> float:
    """Empirical ``E|<w, X>|^r``.

    Even ``r`` keeps the quantity polynomial; other positive ``r`` are
    accepted for empirical probes only.
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    w = np.asarray(w, dtype=float).ravel()
    if X.shape[1] != w.size:
        raise ValueError("direction and points differ in dimension")
    if r <= 0:
        raise ValueError("r must be positive")
    return float(np.mean(np.abs(X @ w) ** r))


# ---------------------------------------------------------------------------
# exact moments

def univariate_moments(spec, order: int) -> np.ndarray:
    """``E[X_1^e]`` for ``e = 0..order`` of one coordinate of a product family."""
    e = np.arange(order + 1)
    even = e % 2 == 0
    out = np.zeros(order + 1)
    if isinstance(spec, RademacherCube):
        out[even] = 1.0
    elif isinstance(spec, UniformCube):
        out[even] = 1.0 / (e[even] + 1)
    elif isinstance(spec, StandardGaussian):
        for j in e[even]:
            out[j] = _double_factorial(j - 1)
    elif isinstance(spec, LaplaceProduct):
        for j in e[even]:
            out[j] = math.factorial(int(j)) * spec.scale ** int(j)
    else:
        raise TypeError(f"{type(spec).__name__} is not a product family")
    return out


def _double_factorial(m: int) -> float:
    return float(math.prod(range(m, 0, -2))) if m > 0 else 1.0


def _ball_moment(I, n):
    if any(e % 2 for e in I):
        return 0.0
    s = sum(I)
    log_sphere = (math.lgamma(n / 2) - math.lgamma((s + n) / 2)
                  + sum(math.lgamma((e + 1) / 2) - math.lgamma(0.5) for e in I))
    return n / (n + s) * math.exp(log_sphere)


def _gaussian_moments(cov: np.ndarray, indices) -> dict:
    """Moments of ``N(0, cov)`` by the recursion
    ``E[z^I] = sum_b cov[a, b] (I - e_a)_b E[z^(I - e_a - e_b)]``."""
    memo = {}

    def mom(I):
        if I in memo:
            return memo[I]
        s = sum(I)
        if s == 0:
            val = 1.0
        elif s % 2:
            val = 0.0
        else:
            a = next(i for i, e in enumerate(I) if e)
            J = I[:a] + (I[a] - 1,) + I[a + 1:]
            val = 0.0
            for b, eb in enumerate(J):
                if eb and cov[a, b] != 0.0:
                    K = J[:b] + (J[b] - 1,) + J[b + 1:]
                    val += cov[a, b] * eb * mom(K)
        memo[I] = val
        return val

    return {tuple(I): mom(tuple(I)) for I in indices}


def exact_moments(spec, k: int) -> MomentVector:
    """Closed-form moments of a supported family up to total degree ``k``."""
    n = spec.n
    idx = enumerate_multi_indices(k, n)
    if isinstance(spec, _PRODUCT):
        m1 = univariate_moments(spec, k)
        vals = np.array([math.prod(m1[e] for e in I) for I in idx])
    elif isinstance(spec, UniformBall):
        vals = np.array([_ball_moment(I, n) for I in idx])
    elif isinstance(spec, (FiniteSupport, KWise)):
        D = spec.dist
        vals = D.probs @ monomial_matrix(D.support, idx)
    elif isinstance(spec, Smoothed):
        inner = exact_moments(spec.inner, k).as_dict()
        gauss = _gaussian_moments(spec.cov, idx)
        vals = np.array([_convolve_moment(I, inner, gauss) for I in idx])
    else:
        raise TypeError(f"no closed-form moments for {type(spec).__name__}")
    vals[0] = 1.0
    return MomentVector(k, n, vals)


def _convolve_moment(I, inner, gauss):
    # E[(X+Z)^I] = sum_{J <= I} prod_j C(i_j, j_j) E[X^J] E[Z^(I-J)]
    total = 0.0
    for J in np.ndindex(*(e + 1 for e in I)):
        rest = tuple(i - j for i, j in zip(I, J))
        g = gauss[rest] if rest in gauss else 0.0
        if g == 0.0:
            continue
        coef = math.prod(math.comb(i, j) for i, j in zip(I, J))
        total += coef * inner[tuple(J)] * g
    return total


def exact_directional_moment(spec, w, r: int) -> float:
    """Exact ``E[<w, X>^r]`` for an integer ``r``.

    Product families use the binomial convolution of the per-coordinate
    moment sequences; other families expand ``<w, x>^r`` by the multinomial
    theorem against :func:`exact_moments`.
    """
    w = np.asarray(w, dtype=float).ravel()
    if w.size != spec.n:
        raise ValueError("direction has the wrong dimension")
    r = int(r)
    if isinstance(spec, _PRODUCT):
        m1 = univariate_moments(spec, r)
        acc = np.zeros(r + 1)
        acc[0] = 1.0
        for wi in w:
            seq = m1 * wi ** np.arange(r + 1)
            new = np.zeros(r + 1)
            for a in range(r + 1):
                for b in range(r + 1 - a):
                    new[a + b] += math.comb(a + b, a) * acc[a] * seq[b]
            acc = new
        return float(acc[r])
    if isinstance(spec, UniformBall):
        return float(np.linalg.norm(w) ** r * _ball_moment((r,) + (0,) * (spec.n - 1), spec.n))
    mv = exact_moments(spec, r)
    total = 0.0
    for I, v in zip(mv.indices, mv.values):
        if sum(I) != r or v == 0.0:
            continue
        coef = math.factorial(r) / math.prod(math.factorial(e) for e in I)
        total += coef * float(np.prod(w ** np.asarray(I))) * v
    return total


# ---------------------------------------------------------------------------
# beta profile

@dataclass(frozen=True)
class BetaProfile:
    """``mu`` holds ``(j, mu_2j)`` pairs; ``betas[j-1] = sum_{i<=j} mu_2i^(-1/(2i))``."""

    mu: tuple
    betas: np.ndarray

    @property
    def k(self) -> int:
        return len(self.mu)

    def beta(self, j: int) -> float:
        return float(self.betas[j - 1])

    @property
    def mu2_sqrt(self) -> float:
        return math.sqrt(self.mu[0][1])


def beta_profile(source, directions, k: int) -> BetaProfile:
    """Moment growth profile along a finite set of directions.

    ``source`` is either a distribution spec (exact closed-form moments) or
    an ``(N, n)`` array of points (empirical moments, ``k <= 20``).  Each
    ``mu_2j`` is the maximum of the directional moment over the normalised
    directions, which lower-bounds the supremum over the unit ball.
    """
    D = np.atleast_2d(np.asarray(directions, dtype=float))
    if D.size == 0:
        raise ValueError("need at least one direction")
    norms = np.linalg.norm(D, axis=1)
    if np.any(norms == 0):
        raise ValueError("directions must be nonzero")
    D = D / norms[:, None]
    if k < 1:
        raise ValueError("k must be >= 1")
    empirical = isinstance(source, np.ndarray) or isinstance(source, (list, tuple))
    if empirical:
        if k > 20:
            raise ValueError("empirical profile supports k <= 20")
        X = np.atleast_2d(np.asarray(source, dtype=float))
        mom = lambda w, r: directional_moment(X, w, r)  # noqa: E731
    else:
        mom = lambda w, r: exact_directional_moment(source, w, r)  # noqa: E731
    mu = []
    for j in range(1, k + 1):
        mu.append((j, max(mom(w, 2 * j) for w in D)))
    if any(v <= 0 for _, v in mu):
        raise ValueError("degenerate direction set: a directional moment vanishes")
    terms = np.array([v ** (-1.0 / (2 * j)) for j, v in mu])
    return BetaProfile(tuple(mu), np.cumsum(terms))


def default_directions(F, seed: int = 0, extra: int = 32) -> np.ndarray:
    """Halfspace normals of ``F`` followed by ``extra`` seeded random unit vectors."""
    from .distributions import rng_for

    R = rng_for(seed, 11).standard_normal((extra, F.n))
    R /= np.linalg.norm(R, axis=1, keepdims=True)
    return np.vstack([F.W, R])
