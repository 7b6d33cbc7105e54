"""Distances between empirical laws of projected samples, and window probes.

Conventions follow the definitions the distances come from: ``d_cdf`` uses
upper orthant tails ``Pr[X >= t]`` while the Levy distance uses strict lower
tails ``Pr[X < t]``.  Inputs are ``(N,)`` or ``(N, m)`` arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .core import sign
from .distributions import rng_for

__all__ = [
    "d_cdf", "d_cdf_to_law", "d_levy", "d_levy_to_law", "d_lambda",
    "sign_pattern_tv", "signed_projection_cdf", "anticoncentration_probe",
    "pattern_probabilities", "metric_rows_to_csv", "GRID_LIMIT",
]

# product grids above this many cells fall back to the pooled points
GRID_LIMIT = 4_000_000


def _as_vectors(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("need a nonempty (N,) or (N, m) sample")
    if not np.all(np.isfinite(X)):
        raise ValueError("samples must be finite")
    return X


def _pair(X, Y):
    X, Y = _as_vectors(X), _as_vectors(Y)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    return X, Y


def _tail_1d(sorted_vals, t):
    """``Pr[Z >= t]`` for each ``t`` under the empirical law of ``sorted_vals``."""
    return 1.0 - np.searchsorted(sorted_vals, t, side="left") / sorted_vals.size


def d_cdf(X, Y) -> float:
    """``sup_t |Pr[X >= t] - Pr[Y >= t]|`` between two empirical laws.

    In one dimension this is the two-sample Kolmogorov-Smirnov statistic.
    For ``m > 1`` the orthant tails only change when some coordinate of
    ``t`` crosses a sample coordinate, so the sup over the product grid of
    pooled coordinate values is exact; that grid is scanned with a
    cumulative histogram when it has at most :data:`GRID_LIMIT` cells, and
    the pooled sample points themselves are used otherwise.
    """
    X, Y = _pair(X, Y)
    m = X.shape[1]
    if m == 1:
        xs, ys = np.sort(X[:, 0]), np.sort(Y[:, 0])
        t = np.concatenate([xs, ys])
        return float(np.max(np.abs(_tail_1d(xs, t) - _tail_1d(ys, t))))
    grids = [np.unique(np.concatenate([X[:, r], Y[:, r]])) for r in range(m)]
    if math.prod(g.size for g in grids) <= GRID_LIMIT:
        return float(np.max(np.abs(_orthant_tails(X, grids) - _orthant_tails(Y, grids))))
    pooled = np.vstack([X, Y])
    return float(np.max(np.abs(_point_tails(X, pooled) - _point_tails(Y, pooled))))


def _orthant_tails(X, grids):
    """``Pr[X >= g]`` at every point ``g`` of the product grid."""
    pos = tuple(np.searchsorted(g, X[:, r]) for r, g in enumerate(grids))
    H = np.zeros(tuple(g.size for g in grids))
    np.add.at(H, pos, 1.0)
    for axis in range(H.ndim):
        H = np.flip(np.cumsum(np.flip(H, axis), axis=axis), axis)
    return H / X.shape[0]


def _point_tails(X, T, chunk=2048):
    out = np.empty(T.shape[0])
    for s in range(0, T.shape[0], chunk):
        t = T[s:s + chunk]
        out[s:s + chunk] = np.mean(np.all(X[None, :, :] >= t[:, None, :], axis=2), axis=1)
    return out


def d_cdf_to_law(cdf, Y) -> float:
    """``sup_t |Pr[X >= t] - Pr[Y >= t]|`` for a continuous 1-d law given by
    its cdf and an empirical sample ``Y``; the sup sits at an atom of ``Y``
    (approached from either side)."""
    ys = np.sort(_as_vectors(Y)[:, 0])
    u = np.unique(ys)
    F = np.asarray([cdf(v) for v in u])
    below = np.searchsorted(ys, u, side="left") / ys.size   # Pr[Y < u]
    upto = np.searchsorted(ys, u, side="right") / ys.size   # Pr[Y <= u]
    # Pr[X >= u] = 1 - F(u); Pr[Y >= u] = 1 - below, and just above u: 1 - upto
    return float(max(np.max(np.abs(F - below)), np.max(np.abs(F - upto))))


# ---------------------------------------------------------------------------
# Levy distance

def _strict_cdf(sorted_vals):
    """``t -> Pr[Z < t]``; points within roundoff above an atom count as the atom."""
    tol = 1e-12 * (1.0 + np.abs(sorted_vals).max())
    return lambda t: np.searchsorted(sorted_vals, np.asarray(t) - tol, side="left") / sorted_vals.size


def _bisect(ok, hi, tol=1e-6):
    if ok(0.0):
        return 0.0
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def d_levy(X, Y) -> float:
    """Levy distance between two 1-d empirical laws, to within 1e-6 (from above).

    With ``F`` and ``G`` the strict cdfs ``Pr[X < t]`` and ``Pr[Y < t]`` the
    defining inequalities are ``F(t - eps) - eps <= G(t) <= F(t + eps) + eps``.
    Both sides are left-continuous steps, constant between consecutive jump
    points, so checking every jump point of either side covers all ``t``.
    The search starts from ``d_cdf``, which always satisfies them.
    """
    X, Y = _pair(X, Y)
    if X.shape[1] != 1:
        raise ValueError("the Levy distance is only implemented for m = 1")
    xs, ys = np.sort(X[:, 0]), np.sort(Y[:, 0])
    F, G = _strict_cdf(xs), _strict_cdf(ys)
    ux, uy = np.unique(xs), np.unique(ys)

    def ok(eps):
        tol = 1e-12
        lower = np.concatenate([F(uy - eps) - G(uy), F(ux) - G(ux + eps)])
        upper = np.concatenate([G(uy) - F(uy + eps), G(ux - eps) - F(ux)])
        return bool(lower.max() <= eps + tol and upper.max() <= eps + tol)

    return _bisect(ok, d_cdf(X, Y))


def d_levy_to_law(cdf, Y) -> float:
    """Levy distance between a continuous 1-d law (by its cdf) and a sample."""
    ys = np.sort(_as_vectors(Y)[:, 0])
    F = np.vectorize(cdf, otypes=[float])
    G = _strict_cdf(ys)
    u = np.unique(ys)
    # G is constant between atoms and F is monotone: atoms and the points
    # just above them are the only places the inequalities can fail
    upto = lambda t: np.searchsorted(ys, t, side="right") / ys.size  # noqa: E731

    def ok(eps):
        lhs = np.all(F(u - eps) - eps <= G(u) + 1e-12)
        rhs = np.all(upto(u) <= F(u + eps) + eps + 1e-12)
        return bool(lhs and rhs)

    return _bisect(ok, 1.0)


# ---------------------------------------------------------------------------
# lambda metric

def d_lambda(X, Y, T_max: float = 100.0, radii: int = 512, directions: int = 64,
             seed: int = 0) -> float:
    """Upper estimate of ``min_T max(max_{|t|<=T} |phi_X(t) - phi_Y(t)|, 1/T)``.

    Frequencies sit on ``radii`` log-spaced radii up to ``T_max`` (both
    signs are unnecessary since ``phi(-t)`` is the conjugate of ``phi(t)``).
    In ``m > 1`` dimensions each radius is taken along the coordinate axes
    and ``directions`` seeded random unit vectors.  Every grid radius is a
    candidate ``T``; restricting the inner max to the grid and ``T`` to the
    radii makes the result an estimate, not the exact metric.
    """
    X, Y = _pair(X, Y)
    if radii < 1 or T_max <= 0:
        raise ValueError("need a nonempty frequency grid")
    m = X.shape[1]
    r = np.geomspace(min(1e-2, T_max), T_max, radii)
    if m == 1:
        U = np.ones((1, 1))
    else:
        R = rng_for(seed, 13).standard_normal((directions, m))
        U = np.vstack([np.eye(m), R / np.linalg.norm(R, axis=1, keepdims=True)])
    pX, pY = X @ U.T, Y @ U.T  # projections, (N, dirs)
    diff = np.zeros(radii)
    for j in range(U.shape[0]):
        for s in range(0, radii, 64):
            rr = r[s:s + 64]
            cx = np.exp(-1j * np.outer(pX[:, j], rr)).mean(axis=0)
            cy = np.exp(-1j * np.outer(pY[:, j], rr)).mean(axis=0)
            diff[s:s + 64] = np.maximum(diff[s:s + 64], np.abs(cx - cy))
    running = np.maximum.accumulate(diff)
    return float(np.min(np.maximum(running, 1.0 / r)))


# ---------------------------------------------------------------------------
# sign patterns

def _patterns(Z, theta):
    S = sign(Z - theta)
    bits = (S > 0).astype(np.int64) @ (1 << np.arange(Z.shape[1], dtype=np.int64))
    return np.bincount(bits, minlength=2 ** Z.shape[1]) / Z.shape[0]


def sign_pattern_tv(X, Y, thresholds) -> float:
    """Total variation between the laws of ``(sign(X_r - theta_r))_r`` and the
    same for ``Y``, over the ``2^m`` sign patterns."""
    X, Y = _pair(X, Y)
    theta = np.asarray(thresholds, dtype=float).ravel()
    if theta.size != X.shape[1]:
        raise ValueError("need one threshold per coordinate")
    if X.shape[1] > 20:
        raise ValueError("too many coordinates for an explicit pattern table")
    return 0.5 * float(np.sum(np.abs(_patterns(X, theta) - _patterns(Y, theta))))


def pattern_probabilities(X, thresholds) -> np.ndarray:
    """Empirical probability of every sign pattern, indexed by the bitmask
    with bit ``r`` set when coordinate ``r`` is on the ``+1`` side."""
    X = _as_vectors(X)
    return _patterns(X, np.asarray(thresholds, dtype=float).ravel())


def signed_projection_cdf(X, Y) -> float:
    """``max_a d_cdf(a * X, a * Y)`` over all sign vectors ``a``."""
    X, Y = _pair(X, Y)
    m = X.shape[1]
    best = 0.0
    for mask in range(2 ** m):
        a = np.where((mask >> np.arange(m)) & 1, -1.0, 1.0)
        best = max(best, d_cdf(X * a, Y * a))
    return best



# ---------------------------------------------------------------------------
# anti-concentration

def anticoncentration_probe(samples, widths) -> dict:
    """``sup_t Pr[Z in [t, t + alpha]]`` for each width ``alpha``.

    Window starts run from the sample minimum in steps of ``alpha / 10``
    until they pass the maximum.
    """
    z = np.sort(_as_vectors(samples)[:, 0])
    out = {}
    for alpha in widths:
        alpha = float(alpha)
        if alpha <= 0:
            raise ValueError("window widths must be positive")
        step = alpha / 10.0
        count = int(np.floor((z[-1] - z[0]) / step)) + 1
        starts = z[0] + step * np.arange(count)
        hits = np.searchsorted(z, starts + alpha, side="right") - np.searchsorted(z, starts, side="left")
        out[alpha] = float(hits.max() / z.size)
    return out


def metric_rows_to_csv(rows) -> str:
    """``metric,parameter,value`` lines, sorted."""
    lines = ["metric,parameter,value"]
    for metric, param, value in sorted(rows, key=lambda r: (r[0], str(r[1]))):
        lines.append(f"{metric},{param},{value:.12g}")
    return "\n".join(lines) + "\n"
