import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from momentlearn.lp import LinearProgram, solve


def test_simple_min():
    sol = solve(LinearProgram([1.0], [[1.0]], (">=",), [3.0]))
    assert sol.optimal and sol.x[0] == pytest.approx(3.0)


def test_infeasible():
    sol = solve(LinearProgram([1.0], [[1.0], [1.0]], (">=", "<="), [1.0, 0.0]))
    assert sol.status == "infeasible"


def test_unbounded():
    sol = solve(LinearProgram([1.0], [[1.0]], (">=",), [0.0], sense="max"))
    assert sol.status == "unbounded"


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        LinearProgram([1.0, 2.0], [[1.0]], ("<=",), [1.0])
    with pytest.raises(ValueError):
        LinearProgram([1.0], [[1.0]], ("<",), [1.0])


def _vertex_oracle(c, A, b):
    """min c@x, A@x <= b, x >= 0 by enumerating every basic solution."""
    m, n = A.shape
    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    best = np.inf
    for rows in itertools.combinations(range(m + n), n):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + 1e-9):
            best = min(best, c @ x)
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 4), st.integers(1, 8))
def test_matches_vertex_enumeration(seed, n, m):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n))
    b = rng.uniform(0.5, 2.0, m)          # x = 0 is feasible
    A = np.vstack([A, np.ones((1, n))])   # and the region is bounded
    b = np.concatenate([b, [5.0]])
    c = rng.normal(size=n)
    sol = solve(LinearProgram(c, A, ("<=",) * (m + 1), b))
    assert sol.optimal
    assert sol.objective == pytest.approx(_vertex_oracle(c, A, b), abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(2, 50), st.integers(1, 50),
       st.sampled_from(["primal", "dual"]))
def test_matches_highs_box_lps(seed, n, m, method):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(-1, 1, n)
    b = A @ x0
    rel = tuple(rng.choice(["<=", "=", ">="], size=m))
    c = rng.normal(size=n)
    lp = LinearProgram(c, A, rel, b, -1.0, 1.0)
    sol = solve(lp, method=method)
    ub = [A[i] if r == "<=" else -A[i] for i, r in enumerate(rel) if r != "="]
    bu = [b[i] if r == "<=" else -b[i] for i, r in enumerate(rel) if r != "="]
    eq = [i for i, r in enumerate(rel) if r == "="]
    ref = linprog(c, A_ub=np.array(ub) if ub else None, b_ub=bu if ub else None,
                  A_eq=A[eq] if eq else None, b_eq=b[eq] if eq else None,
                  bounds=(-1, 1), method="highs")
    assert ref.status == 0 and sol.optimal
    assert sol.objective == pytest.approx(ref.fun, abs=1e-7 * (1 + abs(ref.fun)))
    assert abs(sol.objective - sol.dual_objective) <= 1e-6 * (1 + abs(sol.objective))
    # primal feasibility
    assert np.all(sol.x >= -1 - 1e-9) and np.all(sol.x <= 1 + 1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_strong_duality_standard_form(seed):
    rng = np.random.default_rng(seed)
    m, n = 6, 10
    A = rng.normal(size=(m, n))
    b = A @ rng.uniform(0, 1, n)
    c = rng.uniform(0.1, 1, n)
    sol = solve(LinearProgram(c, A, ("=",) * m, b))
    assert sol.optimal
    assert abs(sol.objective - b @ sol.duals) <= 1e-6 * (1 + abs(sol.objective))
    assert np.all(c - A.T @ sol.duals >= -1e-8)


def test_deterministic():
    rng = np.random.default_rng(9)
    A = rng.normal(size=(15, 30))
    lp = LinearProgram(rng.normal(size=30), A, ("<=",) * 15, np.abs(rng.normal(size=15)),
                       -2.0, 2.0)
    a, b = solve(lp), solve(lp)
    assert a.x.tobytes() == b.x.tobytes() and a.iterations == b.iterations


def test_bland_rule_agrees():
    rng = np.random.default_rng(10)
    A = rng.normal(size=(8, 12))
    lp = LinearProgram(rng.normal(size=12), A, ("<=",) * 8, np.ones(8), 0.0, 3.0)
    assert solve(lp, rule="bland").objective == pytest.approx(solve(lp).objective, abs=1e-9)


def test_degenerate_cycling_example():
    # Beale's classic cycling instance
    c = np.array([-0.75, 150, -0.02, 6])
    A = np.array([[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]])
    b = np.array([0.0, 0.0, 1.0])
    sol = solve(LinearProgram(c, A, ("<=",) * 3, b), rule="bland")
    assert sol.optimal and sol.objective == pytest.approx(-0.05)


def test_feasible_start():
    rng = np.random.default_rng(11)
    A = rng.uniform(size=(4, 20))
    x = rng.dirichlet(np.ones(20))
    lp = LinearProgram(rng.normal(size=20), A, ("=",) * 4, A @ x)
    assert solve(lp, feasible=x).objective == pytest.approx(solve(lp).objective, abs=1e-9)
