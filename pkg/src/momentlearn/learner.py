"""L1 polynomial regression and threshold selection for agnostic learning.

The learner fits the degree-``d`` polynomial minimising the empirical L1
distance to the +/-1 labels, then picks the cut ``t`` for which
``sign(p(x) - t)`` has the fewest training mistakes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Polynomial, enumerate_multi_indices, eval_polynomial, monomial_matrix,
    num_multi_indices, polynomial_from_text, polynomial_to_text, sign,
)
from .distributions import AffineMap, isotropize
from .lp import LinearProgram, LPFailure, solve

__all__ = [
    "Hypothesis", "DegreeSchedule", "fit_l1", "l1_loss", "select_threshold",
    "agnostic_learn", "evaluate", "degree_formula", "degree_schedule",
    "hypothesis_to_text", "hypothesis_from_text", "MAX_BASIS",
]

MAX_BASIS = 2000
# relative gap below which two scores are treated as equal
TIE_TOL = 1e-9


def _check_samples(X, y):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] == 0 or X.shape[0] != y.size:
        raise ValueError("need a nonempty sample with one label per point")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    return X, y


def fit_l1(X, y, degree: int, max_basis: int = MAX_BASIS) -> Polynomial:
    """Degree-``degree`` polynomial minimising ``sum_i |p(x_i) - y_i|``.

    The LP solved is the dual of the textbook program
    ``min sum u_i, u_i >= +-(p(x_i) - y_i)``::

        max  y @ lam   s.t.  Phi.T @ lam = 0,  -1 <= lam_i <= 1

    which has one row per monomial instead of two per sample.  The row
    multipliers at the optimum are the polynomial's coefficients.  Columns of
    the monomial matrix are scaled to unit RMS before solving.
    """
    X, y = _check_samples(X, y)
    n = X.shape[1]
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    size = num_multi_indices(degree, n)
    if size > max_basis:
        raise ValueError(f"degree {degree} in dimension {n} needs {size} monomials "
                         f"(cap {max_basis})")
    idx = enumerate_multi_indices(degree, n)
    Phi = monomial_matrix(X, idx)
    scale = np.sqrt(np.mean(Phi ** 2, axis=0))
    scale[scale == 0] = 1.0
    F = Phi / scale
    # crash start: each sign variable on the side of its least-squares residual
    beta_ls = np.linalg.lstsq(F, y, rcond=None)[0]
    resid = y - F @ beta_ls
    start = np.where(resid >= 0, 1.0, -1.0)
    lp = LinearProgram(y, F.T, ("=",) * size, np.zeros(size), -1.0, 1.0, sense="max")
    sol = solve(lp, start=start, method="dual", basis=np.argsort(np.abs(resid), kind="stable"))
    if not sol.optimal:
        raise LPFailure(sol)
    return Polynomial.from_vector(idx, sol.duals / scale, n)


def l1_loss(p: Polynomial, X, y) -> float:
    X, y = _check_samples(X, y)
    return math.fsum(np.abs(eval_polynomial(p, X) - y))


def select_threshold(p: Polynomial, X, y):
    """Cut ``t`` minimising training mistakes of ``sign(p(x) - t)``.

    Candidates are the midpoints between consecutive distinct values of
    ``p(x_i)`` plus ``min - 1`` and ``max + 1``; values within
    ``TIE_TOL * (1 + max|p|)`` of each other count as one value.  Ties in the
    error go to the smallest ``t``.  Returns ``(t, error_fraction)``.
    """
    X, y = _check_samples(X, y)
    vals = eval_polynomial(p, X)
    return _best_cut(vals, y)


def _best_cut(vals, y):
    order = np.argsort(vals, kind="stable")
    sv, sy = vals[order], y[order]
    # values closer than the roundoff scale count as one value, so a cut
    # never splits points an exact fit would have sent to the same score
    tol = TIE_TOL * (1.0 + np.abs(sv).max())
    gap = np.diff(sv) > tol
    lo_end = np.concatenate([[sv[0]], sv[1:][gap]])    # first value of each group
    hi_end = np.concatenate([sv[:-1][gap], [sv[-1]]])  # last value of each group
    cands = np.concatenate([[lo_end[0] - 1.0], (hi_end[:-1] + lo_end[1:]) / 2.0,
                            [hi_end[-1] + 1.0]])
    # number of points strictly below each candidate
    below = np.searchsorted(sv, cands, side="left")
    pos_below = np.concatenate([[0], np.cumsum(sy > 0)])[below]
    neg_total = np.sum(sy < 0)
    neg_below = np.concatenate([[0], np.cumsum(sy < 0)])[below]
    errors = pos_below + (neg_total - neg_below)
    best = int(np.argmin(errors))
    return float(cands[best]), float(errors[best]) / y.size


@dataclass(frozen=True, eq=False)
class Hypothesis:
    """``x -> sign(p(T(x)) - t)`` where ``T`` is an optional whitening map."""

    polynomial: Polynomial
    threshold: float
    transform: AffineMap | None = field(default=None)

    def scores(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.transform is not None:
            X = self.transform(X)
        return eval_polynomial(self.polynomial, X)

    def predict(self, X):
        return sign(self.scores(X) - self.threshold)


def agnostic_learn(X, y, degree: int, isotropic: bool = False,
                   max_basis: int = MAX_BASIS) -> Hypothesis:
    """L1 regression followed by threshold selection.

    With ``isotropic=True`` the training points are first whitened and the
    map is stored in the hypothesis.
    """
    X, y = _check_samples(X, y)
    T = None
    if isotropic:
        T, X = isotropize(X)
    p = fit_l1(X, y, degree, max_basis=max_basis)
    t, _ = _best_cut(eval_polynomial(p, X), y)
    return Hypothesis(p, t, T)


def evaluate(h: Hypothesis, X, y) -> float:
    """Fraction of points with ``h(x) != y``."""
    X, y = _check_samples(X, y)
    return float(np.mean(h.predict(X) != y))


def hypothesis_to_text(h: Hypothesis) -> str:
    if h.transform is not None:
        raise ValueError("hypotheses with a whitening map have no text form")
    return polynomial_to_text(h.polynomial) + f"threshold,{h.threshold:.17g}\n"


def hypothesis_from_text(text: str) -> Hypothesis:
    p = polynomial_from_text(text)
    line = [ln for ln in text.splitlines() if ln.startswith("threshold")][0]
    return Hypothesis(p, float(line.split(",")[1]))


# ---------------------------------------------------------------------------
# degree schedules

_FAMILIES = ("logconcave", "subexponential", "subgaussian", "kwise")


@dataclass(frozen=True)
class DegreeSchedule:
    """Degree formulas with the unknown constants made explicit.

    ``c1`` multiplies the leading power, ``c2`` sits inside the inner
    logarithm and ``c3 * m`` replaces the ``O(m)`` exponent.
    """

    family: str
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    k_max: int = 10

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"family must be one of {_FAMILIES}")
        if min(self.c1, self.c2, self.c3) <= 0 or self.k_max < 1:
            raise ValueError("constants must be positive and k_max >= 1")


def degree_formula(s: DegreeSchedule, m: int, eps: float, sigma: float | None = None) -> float:
    """Unrounded degree bound.

    With ``L = log(max(m, 2))`` and ``a = eps`` (log-concave) or
    ``a = sigma * eps`` (other families), the power term is
    ``P = c1 * max(log(c2 * L / a), 0) ** (c3 * m) / a**4``.  Sub-Gaussian and
    k-wise families use ``P``; log-concave and sub-exponential use ``exp(P)``.
    The floor at zero keeps the bound monotone when ``c2 * L < a``.
    """
    if m < 1 or not 0 < eps < 1:
        raise ValueError("need m >= 1 and 0 < eps < 1")
    if s.family == "logconcave":
        a = eps
    else:
        if sigma is None or not 0 < sigma < 1:
            raise ValueError("need 0 < sigma < 1")
        a = sigma * eps
    L = math.log(max(m, 2))
    power = s.c1 * max(math.log(s.c2 * L / a), 0.0) ** (s.c3 * m) / a ** 4
    if s.family in ("logconcave", "subexponential"):
        return math.exp(power) if power < 700 else math.inf
    return power


def degree_schedule(s: DegreeSchedule, m: int, eps: float, sigma: float | None = None) -> int:
    """:func:`degree_formula` rounded up and clamped to ``[1, k_max]``."""
    raw = degree_formula(s, m, eps, sigma)
    if not math.isfinite(raw):
        return s.k_max
    return int(min(max(math.ceil(raw), 1), s.k_max))
