"""Halfspaces, Boolean functions of halfspaces, multi-indices and polynomials.

Points are plain numpy arrays: a single point has shape ``(n,)`` and a batch
of points has shape ``(N, n)``.  Labels live in ``{-1, +1}`` and
``sign(0)`` is taken to be ``+1`` everywhere in the package.

Truth tables of functions of ``m`` halfspaces are indexed by sign pattern:
bit ``r`` of the index is 1 exactly when halfspace ``r`` evaluates to ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

MultiIndex = tuple  # tuple of n nonnegative ints


def sign(v):
    """Elementwise sign with ``sign(0) = +1``; returns ints in {-1, +1}."""
    v = np.asarray(v)
    out = np.where(v >= 0, 1, -1)
    return int(out) if out.ndim == 0 else out


def _as_points(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != n or x.ndim not in (1, 2):
        raise ValueError(f"expected points of dimension {n}, got array of shape {x.shape}")
    return x


# ---------------------------------------------------------------------------
# halfspaces

@dataclass(frozen=True, eq=False)
class Halfspace:
    """The classifier ``x -> sign(<w, x> - theta)``, stored with ``||w|| = 1``."""

    w: np.ndarray
    theta: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float).ravel()
        if w.size == 0 or not np.all(np.isfinite(w)):
            raise ValueError("halfspace normal must be a finite nonempty vector")
        norm = np.linalg.norm(w)
        if norm == 0:
            raise ValueError("halfspace normal must be nonzero")
        theta = float(self.theta)
        if not np.isfinite(theta):
            raise ValueError("threshold must be finite")
        object.__setattr__(self, "w", w / norm)
        object.__setattr__(self, "theta", theta / norm)

    @property
    def n(self) -> int:
        return self.w.size

    def __call__(self, x):
        return eval_halfspace(self, x)


def eval_halfspace(h: Halfspace, x):
    x = _as_points(x, h.n)
    return sign(x @ h.w - h.theta)


@dataclass(frozen=True, eq=False)
class HalfspaceFunction:
    """``f(x) = g(h_1(x), ..., h_m(x))`` with ``g`` given as a truth table."""

    halfspaces: tuple
    truth_table: np.ndarray

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        if not hs:
            raise ValueError("need at least one halfspace")
        n = hs[0].n
        if any(h.n != n for h in hs):
            raise ValueError("halfspaces must share a dimension")
        table = np.asarray(self.truth_table).astype(int).ravel()
        if table.size != 2 ** len(hs):
            raise ValueError(f"truth table needs {2 ** len(hs)} entries, got {table.size}")
        if not np.all(np.isin(table, (-1, 1))):
            raise ValueError("truth table entries must be -1 or +1")
        object.__setattr__(self, "halfspaces", hs)
        object.__setattr__(self, "truth_table", table)

    @property
    def m(self) -> int:
        return len(self.halfspaces)

    @property
    def n(self) -> int:
        return self.halfspaces[0].n

    @property
    def W(self) -> np.ndarray:
        return np.stack([h.w for h in self.halfspaces])

    @property
    def thetas(self) -> np.ndarray:
        return np.array([h.theta for h in self.halfspaces])

    def __call__(self, x):
        return eval_function(self, x)

    @classmethod
    def from_callable(cls, halfspaces, g):
        """Tabulate ``g(s_1, ..., s_m)`` over all sign patterns."""
        m = len(halfspaces)
        table = [g(*pattern_of_index(i, m)) for i in range(2 ** m)]
        return cls(tuple(halfspaces), np.array(table))

    @classmethod
    def intersection(cls, halfspaces):
        m = len(halfspaces)
        table = -np.ones(2 ** m, dtype=int)
        table[-1] = 1
        return cls(tuple(halfspaces), table)


def pattern_of_index(index: int, m: int) -> tuple:
    return tuple(1 if (index >> r) & 1 else -1 for r in range(m))


def pattern_index(signs) -> np.ndarray:
    """Truth-table index of each row of a ``(..., m)`` array of signs."""
    signs = np.asarray(signs)
    bits = (signs > 0).astype(np.int64)
    return bits @ (1 << np.arange(signs.shape[-1], dtype=np.int64))


def margins(F: HalfspaceFunction, x):
    """Projections ``<w_r, x>`` for every halfspace (thresholds not subtracted)."""
    x = _as_points(x, F.n)
    return x @ F.W.T


def eval_function(F: HalfspaceFunction, x):
    signs = sign(margins(F, x) - F.thetas)
    out = F.truth_table[pattern_index(signs)]
    return int(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# multi-indices

@lru_cache(maxsize=None)
def _multi_indices(k: int, n: int) -> tuple:
    out = []
    for deg in range(k + 1):
        out.extend(_compositions(deg, n))
    return tuple(out)


def _compositions(total, n):
    # reverse-lexicographic: (2,0), (1,1), (0,2)
    if n == 1:
        return [(total,)]
    res = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, n - 1):
            res.append((first,) + rest)
    return res


def enumerate_multi_indices(k: int, n: int) -> list:
    """All exponent tuples of total degree at most ``k`` in graded lexicographic order.

    Within one degree, tuples are ordered with the first coordinate's exponent
    descending, so ``k=2, n=2`` gives ``(0,0), (1,0), (0,1), (2,0), (1,1), (0,2)``.
    """
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    return list(_multi_indices(k, n))


def num_multi_indices(k: int, n: int) -> int:
    return comb(n + k, k)


def multilinear_indices(k: int, n: int) -> list:
    """Multilinear exponent tuples (entries 0/1) of degree <= k, graded lex order."""
    return [I for I in _multi_indices(min(k, n), n) if max(I, default=0) <= 1]


def monomial_matrix(X, indices) -> np.ndarray:
    """Matrix ``M[i, j] = X[i] ** indices[j]`` (product over coordinates).

    Each monomial is built from a lower-degree one times a single coordinate,
    so the cost is one multiply per entry.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    N = X.shape[0]
    M = np.empty((N, len(indices)))
    pos = {}
    for j, I in enumerate(indices):
        pos[I] = j
        deg = sum(I)
        if deg == 0:
            M[:, j] = 1.0
            continue
        # peel off the last nonzero exponent
        v = max(i for i, e in enumerate(I) if e)
        parent = I[:v] + (I[v] - 1,) + I[v + 1:]
        pj = pos.get(parent)
        if pj is None:
            M[:, j] = np.prod(X ** np.asarray(I), axis=1)
        else:
            M[:, j] = M[:, pj] * X[:, v]
    return M


# ---------------------------------------------------------------------------
# polynomials

class Polynomial:
    """Real polynomial in ``n`` variables with coefficients keyed by exponent tuple.

    Zero coefficients are never stored.  Terms are kept in graded lexicographic
    order so that evaluation and serialization are reproducible.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, coefficients=None, n: int | None = None):
        coefficients = dict(coefficients or {})
        if n is None:
            if not coefficients:
                raise ValueError("dimension required for the zero polynomial")
            n = len(next(iter(coefficients)))
        self.n = int(n)
        terms = {}
        for I, a in coefficients.items():
            I = tuple(int(e) for e in I)
            if len(I) != self.n or min(I, default=0) < 0:
                raise ValueError(f"bad exponent tuple {I} for n={self.n}")
            a = float(a)
            if not np.isfinite(a):
                raise ValueError("coefficients must be finite")
            if a != 0.0:
                terms[I] = terms.get(I, 0.0) + a
        self._terms = dict(sorted(((I, a) for I, a in terms.items() if a != 0.0),
                                  key=lambda t: _grlex_key(t[0])))

    @classmethod
    def from_vector(cls, indices, coeffs, n: int | None = None):
        if n is None:
            n = len(indices[0])
        return cls({I: a for I, a in zip(indices, np.asarray(coeffs, dtype=float))}, n)

    @classmethod
    def monomial(cls, I, coeff=1.0):
        return cls({tuple(I): coeff}, len(I))

    @property
    def coefficients(self) -> dict:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((sum(I) for I in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_multilinear(self) -> bool:
        return all(max(I, default=0) <= 1 for I in self._terms)

    def to_vector(self, indices) -> np.ndarray:
        return np.array([self._terms.get(tuple(I), 0.0) for I in indices])

    def __call__(self, x):
        return eval_polynomial(self, x)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial({(0,) * self.n: float(other)}, self.n)
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        terms = dict(self._terms)
        for I, a in other._terms.items():
            terms[I] = terms.get(I, 0.0) + a
        return Polynomial(terms, self.n)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({I: -a for I, a in self._terms.items()}, self.n)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return Polynomial({I: c * a for I, a in self._terms.items()}, self.n)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.n == other.n and self._terms == other._terms

    def __repr__(self):
        body = " + ".join(f"{a:g}*x^{I}" for I, a in self._terms.items()) or "0"
        return f"Polynomial(n={self.n}: {body})"


def _grlex_key(I):
    return (sum(I), tuple(-e for e in I))


def eval_polynomial(p: Polynomial, x):
    """Evaluate ``sum_I a_I x(I)`` at one point or at each row of a batch."""
    x = _as_points(x, p.n)
    single = x.ndim == 1
    if p.is_zero():
        return 0.0 if single else np.zeros(x.shape[0])
    indices = list(p._terms)
    vals = monomial_matrix(x, indices) @ np.array(list(p._terms.values()))
    return float(vals[0]) if single else vals


def regularity(p: Polynomial) -> float:
    """Smallest ``delta`` with ``sum_i Inf_i^2 <= delta^2 ||p||^4``.

    ``Inf_i`` is the squared coefficient mass of the terms containing
    variable ``i``; the norm runs over the non-constant terms.  The value can
    exceed 1 (``x1*x2`` gives ``sqrt(2)``).
    """
    if not p.is_multilinear():
        raise ValueError("regularity is defined for multilinear polynomials only")
    if p.degree > 2:
        raise ValueError("regularity is only supported up to degree 2")
    terms = {I: a for I, a in p.coefficients.items() if sum(I)}
    if not terms:
        raise ValueError("regularity of a constant polynomial is undefined")
    infl = np.zeros(p.n)
    for I, a in terms.items():
        infl[np.asarray(I, dtype=bool)] += a * a
    norm2 = sum(a * a for a in terms.values())
    return float(np.sqrt(np.sum(infl ** 2)) / norm2)


# ---------------------------------------------------------------------------
# text formats

def _fmt(v) -> str:
    return format(float(v), ".17g")


def polynomial_to_text(p: Polynomial) -> str:
    """``polynomial,<n>`` header, then ``e_1,...,e_n,coefficient`` per term."""
    lines = [f"polynomial,{p.n}"]
    for I, a in p.coefficients.items():
        lines.append(",".join(str(e) for e in I) + "," + _fmt(a))
    return "\n".join(lines) + "\n"


def polynomial_from_text(text: str) -> Polynomial:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split(",")
    if head[0] != "polynomial":
        raise ValueError("not a polynomial record")
    n = int(head[1])
    coeffs = {}
    for ln in lines[1:]:
        if ln.startswith("threshold"):
            break
        fields = ln.split(",")
        coeffs[tuple(int(e) for e in fields[:n])] = float(fields[n])
    return Polynomial(coeffs, n)


def halfspace_function_to_text(F: HalfspaceFunction) -> str:
    """``halfspace_function,<n>,<m>``, one ``halfspace,w_1,...,w_n,theta`` per
    halfspace, then ``truth_table,v_0,...,v_{2^m-1}``."""
    lines = [f"halfspace_function,{F.n},{F.m}"]
    for h in F.halfspaces:
        lines.append("halfspace," + ",".join(_fmt(v) for v in h.w) + "," + _fmt(h.theta))
    lines.append("truth_table," + ",".join(str(int(v)) for v in F.truth_table))
    return "\n".join(lines) + "\n"


def halfspace_function_from_text(text: str) -> HalfspaceFunction:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split(",")
    if head[0] != "halfspace_function":
        raise ValueError("not a halfspace_function record")
    n, m = int(head[1]), int(head[2])
    hs = []
    for ln in lines[1:1 + m]:
        fields = ln.split(",")
        vals = [float(v) for v in fields[1:]]
        hs.append(Halfspace(np.array(vals[:n]), vals[n]))
    table = [int(v) for v in lines[1 + m].split(",")[1:]]
    return HalfspaceFunction(tuple(hs), np.array(table))
