"""Distribution descriptions, reproducible samplers and k-wise independent laws.

Every sampler draws from numpy's Philox counter-based generator keyed by a
``numpy.random.SeedSequence`` built from ``(seed, stream)``.  The stream tag
separates the independent parts of one draw (e.g. the data and the Gaussian
noise of a smoothed law) so that adding noise never shifts the data stream.
Per-trial seeds are ``seed ^ trial`` (see :func:`trial_seed`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import multilinear_indices

__all__ = [
    "StandardGaussian", "UniformBall", "UniformCube", "LaplaceProduct",
    "RademacherCube", "FiniteSupport", "KWise", "Smoothed",
    "FiniteDistribution", "AffineMap",
    "sample", "smooth", "mean", "covariance", "isotropize", "kwise_construct",
    "cube_points", "walsh_moments", "max_parity_residual", "trial_seed", "rng_for",
    "finite_distribution_to_text", "finite_distribution_from_text",
]

COND_LIMIT = 1e12


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed) & (2 ** 64 - 1), int(stream)])
    return np.random.Generator(np.random.Philox(ss))


def trial_seed(seed: int, trial: int) -> int:
    return (int(seed) ^ int(trial)) & (2 ** 64 - 1)


# ---------------------------------------------------------------------------
# finite distributions

class FiniteDistribution:
    """Probability vector over an explicit list of distinct support points."""

    def __init__(self, support, probs):
        support = np.atleast_2d(np.asarray(support, dtype=float))
        probs = np.asarray(probs, dtype=float).ravel()
        if support.shape[0] != probs.size or probs.size == 0:
            raise ValueError("support and probabilities must have the same nonzero length")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        if np.unique(support, axis=0).shape[0] != support.shape[0]:
            raise ValueError("support points must be distinct")
        self.support = support
        self.probs = probs

    @property
    def n(self) -> int:
        return self.support.shape[1]

    def __len__(self):
        return self.probs.size

    def expect(self, values) -> float:
        return float(np.asarray(values, dtype=float) @ self.probs)

    def pruned(self, tol: float = 0.0) -> "FiniteDistribution":
        keep = self.probs > tol
        p = self.probs[keep]
        return FiniteDistribution(self.support[keep], p / p.sum())


def finite_distribution_to_text(D: FiniteDistribution) -> str:
    lines = [f"n={D.n} size={len(D)}"]
    for x, p in zip(D.support, D.probs):
        lines.append(" ".join(format(v, ".17g") for v in x) + " " + format(p, ".17g"))
    return "\n".join(lines) + "\n"


def finite_distribution_from_text(text: str) -> FiniteDistribution:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = dict(tok.split("=") for tok in lines[0].split())
    n, size = int(head["n"]), int(head["size"])
    rows = np.array([[float(v) for v in ln.split()] for ln in lines[1:1 + size]])
    if rows.shape != (size, n + 1):
        raise ValueError("atom lines do not match the header")
    probs = rows[:, n]
    # tolerate the rounding of 17-digit output
    return FiniteDistribution(rows[:, :n], probs / probs.sum())


# ---------------------------------------------------------------------------
# distribution specs

@dataclass(frozen=True)
class StandardGaussian:
    n: int


@dataclass(frozen=True)
class UniformBall:
    n: int


@dataclass(frozen=True)
class UniformCube:
    """Uniform on the solid cube ``[-1, 1]^n``."""
    n: int


@dataclass(frozen=True)
class LaplaceProduct:
    n: int
    scale: float = 2 ** -0.5  # unit variance per coordinate


@dataclass(frozen=True)
class RademacherCube:
    """Uniform on the vertices ``{-1, +1}^n``."""
    n: int


@dataclass(frozen=True, eq=False)
class FiniteSupport:
    dist: FiniteDistribution

    @property
    def n(self) -> int:
        return self.dist.n


@dataclass(frozen=True)
class KWise:
    """The k-wise independent law on ``{-1,+1}^n`` returned by :func:`kwise_construct`."""
    n: int
    k: int
    seed: int = 0

    @property
    def dist(self) -> FiniteDistribution:
        return kwise_construct(self.n, self.k, self.seed)


@dataclass(frozen=True, eq=False)
class Smoothed:
    """``X + Z`` with ``X`` from ``inner`` and independent ``Z ~ N(0, cov)``."""

    inner: object
    sigma: float
    cov: np.ndarray

    @property
    def n(self) -> int:
        return self.inner.n


def _check_n(spec):
    if getattr(spec, "n", 0) < 1:
        raise ValueError("dimension must be >= 1")


def mean(spec) -> np.ndarray:
    if isinstance(spec, (FiniteSupport, KWise)):
        D = spec.dist
        return D.probs @ D.support
    if isinstance(spec, Smoothed):
        return mean(spec.inner)
    _check_n(spec)
    return np.zeros(spec.n)


def covariance(spec) -> np.ndarray:
    """Exact covariance matrix of the law described by ``spec``."""
    if isinstance(spec, Smoothed):
        return covariance(spec.inner) + spec.cov
    if isinstance(spec, (FiniteSupport, KWise)):
        D = spec.dist
        c = D.support - D.probs @ D.support
        return (c * D.probs[:, None]).T @ c
    _check_n(spec)
    eye = np.eye(spec.n)
    if isinstance(spec, (StandardGaussian, RademacherCube)):
        return eye
    if isinstance(spec, UniformBall):
        return eye / (spec.n + 2)
    if isinstance(spec, UniformCube):
        return eye / 3.0
    if isinstance(spec, LaplaceProduct):
        return eye * 2.0 * spec.scale ** 2
    raise TypeError(f"unsupported distribution spec {spec!r}")


def smooth(spec, sigma: float, cov=None) -> Smoothed:
    """Perturb ``spec`` by independent Gaussian noise ``N(0, cov)``.

    ``cov`` defaults to ``sigma * covariance(spec)``, which needs a
    nonsingular inner covariance.  A caller-supplied ``cov`` must satisfy
    ``cov >= sigma * covariance(spec)`` in the PSD order.
    """
    sigma = float(sigma)
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    inner_cov = covariance(spec)
    if cov is None:
        eig = np.linalg.eigvalsh(inner_cov)
        if eig.min() <= 1e-12 * max(1.0, eig.max()):
            raise ValueError("inner covariance is singular; pass an explicit noise covariance")
        cov = sigma * inner_cov
    else:
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        if cov.shape != inner_cov.shape or not np.allclose(cov, cov.T, atol=1e-12):
            raise ValueError("noise covariance must be a symmetric n x n matrix")
        slack = np.linalg.eigvalsh(cov - sigma * inner_cov).min()
        if slack < -1e-10 * max(1.0, np.abs(cov).max()):
            raise ValueError("noise covariance must dominate sigma * cov(inner)")
    return Smoothed(spec, sigma, cov)


def sample(spec, seed: int, count: int) -> np.ndarray:
    """Draw ``count`` points as a ``(count, n)`` array; deterministic in ``(spec, seed)``."""
    if count < 1:
        raise ValueError("count must be positive")
    return _sample(spec, seed, int(count), stream=0)


def _sample(spec, seed, count, stream):
    if isinstance(spec, Smoothed):
        X = _sample(spec.inner, seed, count, 2 * stream + 1)
        rng = rng_for(seed, 2 * stream + 2)
        # eigh-based square root tolerates PSD (singular) noise covariances
        vals, vecs = np.linalg.eigh(spec.cov)
        root = vecs * np.sqrt(np.clip(vals, 0.0, None))
        Z = rng.standard_normal((count, spec.n)) @ root.T
        return X + Z
    rng = rng_for(seed, stream)
    if isinstance(spec, (FiniteSupport, KWise)):
        D = spec.dist
        idx = rng.choice(len(D), size=count, p=D.probs)
        return D.support[idx].copy()
    _check_n(spec)
    n = spec.n
    if isinstance(spec, StandardGaussian):
        return rng.standard_normal((count, n))
    if isinstance(spec, UniformCube):
        return rng.uniform(-1.0, 1.0, (count, n))
    if isinstance(spec, RademacherCube):
        return (2 * rng.integers(0, 2, (count, n)) - 1).astype(float)
    if isinstance(spec, LaplaceProduct):
        return rng.laplace(0.0, spec.scale, (count, n))
    if isinstance(spec, UniformBall):
        g = rng.standard_normal((count, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = rng.uniform(0.0, 1.0, count) ** (1.0 / n)
        return g * r[:, None]
    raise TypeError(f"unsupported distribution spec {spec!r}")


# ---------------------------------------------------------------------------
# isotropic position

@dataclass(frozen=True, eq=False)
class AffineMap:
    """``x -> A @ x + b``."""

    A: np.ndarray
    b: np.ndarray

    def __call__(self, X):
        return np.asarray(X, dtype=float) @ self.A.T + self.b


def isotropize(points):
    """Whitening map taking the sample to mean 0 and covariance I.

    Returns ``(AffineMap, transformed points)``.  Raises ``ValueError`` when
    the empirical covariance has condition number above 1e12.
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    N, n = X.shape
    if N < n + 1:
        raise ValueError(f"need at least {n + 1} points to isotropize in dimension {n}")
    mu = X.mean(axis=0)
    C = np.cov(X, rowvar=False, bias=True).reshape(n, n)
    vals, vecs = np.linalg.eigh(C)
    if vals.max() <= 0 or vals.min() <= vals.max() / COND_LIMIT:
        raise ValueError("empirical covariance is rank deficient")
    A = (vecs / np.sqrt(vals)) @ vecs.T
    T = AffineMap(A, -A @ mu)
    return T, T(X)


# ---------------------------------------------------------------------------
# k-wise independence on the hypercube

def cube_points(n: int) -> np.ndarray:
    """All of ``{-1,+1}^n``; row ``t`` has ``-1`` exactly where bit ``i`` of ``t`` is set."""
    t = np.arange(2 ** n)[:, None]
    return 1.0 - 2.0 * ((t >> np.arange(n)) & 1)


def walsh_moments(probs) -> np.ndarray:
    """Parities ``E[prod_{i in S} x_i]`` for every subset mask ``S``.

    ``probs`` is indexed like :func:`cube_points`; the result is indexed by
    the subset bitmask.  Computed with the fast Walsh-Hadamard transform.
    """
    h = np.array(probs, dtype=float)
    size = h.size
    step = 1
    while step < size:
        h = h.reshape(-1, 2, step)
        a, b = h[:, 0, :].copy(), h[:, 1, :].copy()
        h[:, 0, :], h[:, 1, :] = a + b, a - b
        h = h.reshape(size)
        step *= 2
    return h


@lru_cache(maxsize=64)
def kwise_construct(n: int, k: int, seed: int = 0) -> FiniteDistribution:
    """A k-wise independent distribution on ``{-1,+1}^n``.

    Solves the feasibility LP over the ``2^n`` atom weights with all parities
    of order ``1..k`` forced to zero, minimising a seeded random cost so that
    a sparse vertex is returned.  ``k = n`` pins the uniform law, which is
    returned directly.  The result is checked by an exact parity transform.
    """
    from .lp import LinearProgram, solve

    if not 1 <= n <= 16 or not 0 <= k <= n:
        raise ValueError("need 1 <= n <= 16 and 0 <= k <= n")
    pts = cube_points(n)
    size = 2 ** n
    if k == n:
        probs = np.full(size, 1.0 / size)
    else:
        rows = [I for I in multilinear_indices(k, n) if sum(I)]
        if (len(rows) + 1) * size > 4e7:
            raise ValueError("instance too large for the dense LP route")
        A = np.ones((len(rows) + 1, size))
        for r, I in enumerate(rows, start=1):
            cols = np.flatnonzero(I)
            A[r] = np.prod(pts[:, cols], axis=1)
        rhs = np.zeros(len(rows) + 1)
        rhs[0] = 1.0
        cost = rng_for(seed, 7).uniform(0.0, 1.0, size)
        sol = solve(LinearProgram(cost, A, ("=",) * len(rhs), rhs),
                    feasible=np.full(size, 1.0 / size))
        if not sol.optimal:
            raise RuntimeError(f"k-wise LP failed with status {sol.status} (uniform is feasible)")
        probs = np.clip(sol.x, 0.0, None)
        probs[probs < 1e-13] = 0.0
        probs /= probs.sum()
    par = walsh_moments(probs)
    order = np.array([bin(S).count("1") for S in range(size)])
    bad = np.abs(par[(order >= 1) & (order <= k)])
    if bad.size and bad.max() > 1e-12:
        raise RuntimeError(f"k-wise verification failed: parity residual {bad.max():.3g}")
    keep = probs > 0
    return FiniteDistribution(pts[keep], probs[keep])


def max_parity_residual(D: FiniteDistribution, k: int) -> float:
    """Largest |E[prod_{i in S} x_i]| over 1 <= |S| <= k for a law on the cube."""
    n = D.n
    if not np.all(np.isin(D.support, (-1.0, 1.0))):
        raise ValueError("support must lie in {-1,+1}^n")
    bits = (D.support < 0).astype(np.int64) @ (1 << np.arange(n, dtype=np.int64))
    probs = np.zeros(2 ** n)
    np.add.at(probs, bits, D.probs)
    par = walsh_moments(probs)
    order = np.array([bin(S).count("1") for S in range(2 ** n)])
    sel = (order >= 1) & (order <= k)
    return float(np.abs(par[sel]).max()) if sel.any() else 0.0
