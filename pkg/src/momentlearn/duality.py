"""Finite-support moment-matching LPs and the sandwiching certificates they yield.

For a finite support ``Omega`` and target moments ``sigma`` the primal
program looks for a distribution ``mu`` on ``Omega`` with the prescribed
moments and extremal ``E_mu[f]``.  Its LP dual is a polynomial ``P`` of the
same degree with ``P >= f`` on ``Omega`` (max side) or ``P <= f`` (min side)
and expectation ``sum_I c_I sigma_I``; the solver's row multipliers are
exactly those coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    Polynomial, enumerate_multi_indices, eval_polynomial, monomial_matrix,
    multilinear_indices,
)
from .distributions import FiniteDistribution, cube_points
from .lp import LinearProgram, LPFailure, solve
from .moments import MomentVector

__all__ = [
    "MomentLPInstance", "SandwichPair", "InfeasibleMoments", "HypercontractivityResult",
    "primal_worst_case", "dual_sandwich", "instance_from_distribution",
    "fool_ptf", "fool_ptf_rows", "fool_csv",
    "hypercontractivity_check", "hypercontractivity_exhaustive", "sandwich_slack",
]


class InfeasibleMoments(ValueError):
    """The target moments cannot be realised by any distribution on the support."""


@dataclass(frozen=True, eq=False)
class MomentLPInstance:
    """Support points, the moments to match, and ``f`` on the support.

    ``f`` is stored in {0, 1}; pass +/-1 labels through :meth:`with_pm1`.
    ``indices`` restricts the matched moments to a subset of ``I(k, n)``
    (it must contain the empty index).  ``source`` optionally holds the
    probabilities of a distribution on the support that realises ``sigma``.
    """

    support: np.ndarray
    sigma: MomentVector
    f: np.ndarray
    indices: tuple | None = None
    source: np.ndarray | None = None

    def __post_init__(self):
        S = np.atleast_2d(np.asarray(self.support, dtype=float))
        f = np.asarray(self.f, dtype=float).ravel()
        if S.shape[0] < 1 or S.shape[0] != f.size:
            raise ValueError("need one f value per support point and at least one point")
        if S.shape[1] != self.sigma.n:
            raise ValueError("support and moments differ in dimension")
        if not np.all(np.isin(f, (0.0, 1.0))):
            raise ValueError("f must take values in {0, 1}")
        if abs(self.sigma.values[0] - 1.0) > 1e-12:
            raise ValueError("the empty moment must equal 1")
        idx = tuple(self.sigma.indices) if self.indices is None else tuple(map(tuple, self.indices))
        if idx[0] != (0,) * S.shape[1]:
            raise ValueError("matched indices must start with the empty index")
        object.__setattr__(self, "support", S)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "indices", idx)
        if self.source is not None:
            src = np.asarray(self.source, dtype=float).ravel()
            if src.size != f.size:
                raise ValueError("source probabilities must match the support")
            object.__setattr__(self, "source", src)

    @classmethod
    def with_pm1(cls, support, sigma, labels, **kw):
        labels = np.asarray(labels, dtype=float)
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        return cls(support, sigma, (labels + 1.0) / 2.0, **kw)

    @property
    def n(self) -> int:
        return self.support.shape[1]

    def reference(self) -> float:
        """``E[f]`` under the source distribution."""
        if self.source is None:
            raise ValueError("instance has no source distribution")
        return float(self.source @ self.f)


def instance_from_distribution(D: FiniteDistribution, k: int, f) -> MomentLPInstance:
    """Instance whose moments come from ``D`` itself (always realisable)."""
    idx = enumerate_multi_indices(k, D.n)
    vals = D.probs @ monomial_matrix(D.support, idx)
    vals[0] = 1.0
    return MomentLPInstance(D.support, MomentVector(k, D.n, vals), f, source=D.probs)


def _moment_lp(inst: MomentLPInstance, sense: str):
    M = monomial_matrix(inst.support, list(inst.indices))
    rhs = inst.sigma.restrict(inst.indices)
    return LinearProgram(inst.f, M.T, ("=",) * len(rhs), rhs, sense=sense), M


def _solve(inst, sense, feasible=None):
    lp, M = _moment_lp(inst, sense)
    if feasible is None:
        feasible = inst.source
    sol = solve(lp, feasible=feasible)
    if sol.status == "infeasible":
        raise InfeasibleMoments("the target moments are not realisable on this support")
    if not sol.optimal:
        raise LPFailure(sol)
    return sol, M


def primal_worst_case(inst: MomentLPInstance, sense: str = "max"):
    """Extremal ``E_mu[f]`` over distributions ``mu`` on the support matching
    the moments.  Returns ``(FiniteDistribution, value)``; the distribution
    keeps only atoms of positive mass."""
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    sol, _ = _solve(inst, sense)
    return _as_distribution(inst.support, sol.x), sol.objective


def _as_distribution(support, x):
    p = np.clip(x, 0.0, None)
    keep = p > 0
    p = p[keep]
    return FiniteDistribution(support[keep], p / p.sum())


@dataclass(frozen=True, eq=False)
class SandwichPair:
    """``lower <= f <= upper`` on the support.

    ``upper_value`` and ``lower_value`` are the expectations of the two
    polynomials under the matched moments; ``max_value`` and ``min_value``
    are the primal optima they certify.
    """

    lower: Polynomial
    upper: Polynomial
    upper_value: float
    lower_value: float
    max_value: float
    min_value: float
    reference: float | None

    @property
    def gaps(self):
        """``(E[P_u] - E[f], E[f] - E[P_l])`` with ``E[f]`` under the source."""
        if self.reference is None:
            raise ValueError("gaps need a reference distribution")
        return self.upper_value - self.reference, self.reference - self.lower_value


def dual_sandwich(inst: MomentLPInstance) -> SandwichPair:
    """Sandwiching polynomials read off the row multipliers of both primals."""
    idx = list(inst.indices)
    sig = inst.sigma.restrict(idx)
    polys, values, optima = [], [], []
    for sense in ("max", "min"):
        sol, _ = _solve(inst, sense)
        polys.append(Polynomial.from_vector(idx, sol.duals, inst.n))
        values.append(math.fsum(sol.duals * sig))
        optima.append(sol.objective)
    ref = inst.reference() if inst.source is not None else None
    return SandwichPair(polys[1], polys[0], values[0], values[1], optima[0], optima[1], ref)


def sandwich_slack(pair: SandwichPair, inst: MomentLPInstance):
    """Pointwise ``min(P_u - f)`` and ``min(f - P_l)`` over the support."""
    up = eval_polynomial(pair.upper, inst.support) - inst.f
    lo = inst.f - eval_polynomial(pair.lower, inst.support)
    return float(up.min()), float(lo.min())



# ---------------------------------------------------------------------------
# fooling degree-2 threshold functions with bounded independence

MAX_FOOL_N = 12


def fool_ptf_rows(p: Polynomial, n: int, k: int):
    """``(k, t, gap)`` for every distinct value ``t`` of ``p`` on the cube.

    ``gap`` is the larger of ``max_mu Pr_mu[p >= t] - Pr_U[p >= t]`` and
    ``Pr_U[p >= t] - min_mu Pr_mu[p >= t]`` over distributions ``mu`` on
    ``{-1,+1}^n`` whose multilinear moments up to order ``k`` are those of
    the uniform law ``U``.
    """
    if not 1 <= n <= MAX_FOOL_N:
        raise ValueError(f"need 1 <= n <= {MAX_FOOL_N} for exact enumeration")
    if p.n != n or not p.is_multilinear() or p.degree > 2:
        raise ValueError("need a multilinear polynomial of degree <= 2 in n variables")
    if k < 0:
        raise ValueError("k must be nonnegative")
    pts = cube_points(n)
    vals = np.round(eval_polynomial(p, pts), 12)
    thresholds = np.unique(vals)
    idx = multilinear_indices(min(k, n), n)
    M = monomial_matrix(pts, idx)
    rhs = np.zeros(len(idx))
    rhs[0] = 1.0
    uniform = np.full(pts.shape[0], 1.0 / pts.shape[0])
    rows = []
    for t in thresholds:
        f = (vals >= t).astype(float)
        gamma = float(f.mean())
        gap = 0.0
        for sense in ("max", "min"):
            lp = LinearProgram(f, M.T, ("=",) * len(rhs), rhs, sense=sense)
            # uniform is feasible and interior; previous optima are degenerate
            # vertices and make far slower starting points
            sol = solve(lp, feasible=uniform)
            if not sol.optimal:
                raise LPFailure(sol)
            gap = max(gap, sol.objective - gamma if sense == "max" else gamma - sol.objective)
        rows.append((k, float(t), max(gap, 0.0)))
    return rows


def fool_ptf(p: Polynomial, n: int, k: int) -> float:
    """Worst cdf distance between ``p(U)`` and ``p(mu)`` over ``k``-wise
    independent ``mu`` on the cube (exact on the value set of ``p``)."""
    return max(g for _, _, g in fool_ptf_rows(p, n, k))


def fool_csv(rows) -> str:
    lines = ["k,threshold,gap"]
    for k, t, g in sorted(rows):
        lines.append(f"{k},{t:.12g},{g:.12g}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# hypercontractivity on the cube

@dataclass(frozen=True)
class HypercontractivityResult:
    """``lhs = ||P||_q`` and ``rhs = ((q-1)/(p-1))^(d/2) ||P||_p`` under the
    uniform cube; ``holds`` is decided in exact rational arithmetic."""

    lhs: float
    rhs: float
    holds: bool
    moment_p: Fraction
    moment_q: Fraction
    degree: int


def hypercontractivity_check(P: Polynomial, n: int, pair=(2, 4)) -> HypercontractivityResult:
    lo, hi = pair
    if not (lo % 2 == 0 and hi % 2 == 0 and 0 < lo < hi):
        raise ValueError("only even integer norms p < q are supported")
    if not 1 <= n <= 14 or P.n != n:
        raise ValueError("need 1 <= n <= 14 matching the polynomial")
    if not P.is_multilinear():
        raise ValueError("polynomial must be multilinear")
    if P.is_zero():
        raise ValueError("the zero polynomial has no meaningful ratio")
    terms = [(I, Fraction(a)) for I, a in P.coefficients.items()]
    denom = math.lcm(*(c.denominator for _, c in terms))
    ints = [(np.asarray(I, dtype=bool), int(c * denom)) for I, c in terms]
    pts = cube_points(n) < 0
    vals = [0] * pts.shape[0]
    for mask, c in ints:
        neg = np.logical_and(pts, mask).sum(axis=1) % 2
        for t in range(pts.shape[0]):
            vals[t] += -c if neg[t] else c
    size = pts.shape[0]
    mp = Fraction(sum(v ** lo for v in vals), size * denom ** lo)
    mq = Fraction(sum(v ** hi for v in vals), size * denom ** hi)
    d = P.degree
    base = Fraction(hi - 1, lo - 1)
    # ||P||_q <= base^(d/2) ||P||_p  <=>  mq^lo <= base^(d*lo*hi/2) * mp^hi
    holds = mq ** lo <= base ** (d * lo * hi // 2) * mp ** hi
    lhs = float(mq) ** (1.0 / hi)
    rhs = float(base) ** (d / 2) * float(mp) ** (1.0 / lo)
    return HypercontractivityResult(lhs, rhs, bool(holds), mp, mq, d)


def hypercontractivity_exhaustive(n: int, coefficients=(-1, 0, 1), degree: int = 2):
    """Check the (2, 4) inequality for every multilinear polynomial of
    degree <= ``degree`` with coefficients from ``coefficients``.

    Works in exact integer arithmetic on the value table.  Returns
    ``(checked, failures, worst)`` where ``worst`` is the largest
    ``E[P^4] / (9^d E[P^2]^2)`` seen.
    """
    idx = multilinear_indices(degree, n)
    M = monomial_matrix(cube_points(n), idx).astype(np.int64)
    sizes = np.array([sum(I) for I in idx])
    coeffs = np.array(list(itertools.product(coefficients, repeat=len(idx))), dtype=np.int64)
    coeffs = coeffs[np.any(coeffs != 0, axis=1)]
    V = coeffs @ M.T
    s2 = np.sum(V ** 2, axis=1)
    s4 = np.sum(V ** 4, axis=1)
    deg = np.max(np.where(coeffs != 0, sizes[None, :], 0), axis=1)
    # 2^n sum P^4 <= 9^d (sum P^2)^2, all integers
    lhs = (2 ** n) * s4
    rhs = (9 ** deg) * s2 ** 2
    failures = int(np.sum(lhs > rhs))
    worst = float(np.max(lhs / rhs))
    return int(coeffs.shape[0]), failures, worst
