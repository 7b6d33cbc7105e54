"""The acceptance criteria, each run from its checked-in config at the stated tolerance."""

import math
import os
import time
from math import comb

from conftest import ACCEPTANCE
from momentlearn.cli import load_config, run

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def _run(name):
    start = time.perf_counter()
    report = run(load_config(os.path.join(CONFIGS, name)))
    return report, time.perf_counter() - start


def _record(num, ok, detail):
    ACCEPTANCE[num] = (bool(ok), detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _best_errors(report):
    best = {}
    for seed, _, metric, value in report.rows:
        if metric == "test_error":
            best[seed] = min(best.get(seed, 1.0), value)
    return best


def _l1_monotone(report, slack=1e-6):
    by_seed = {}
    for seed, d, metric, value in report.rows:
        if metric == "train_l1":
            by_seed.setdefault(seed, []).append((d, value))
    ok = True
    for rows in by_seed.values():
        vals = [v for _, v in sorted(rows)]
        ok &= all(b <= a + slack for a, b in zip(vals, vals[1:]))
    return ok


def test_criterion_01_pac_halfspace():
    report, secs = _run("criterion_01_pac_halfspace.cfg")
    best = _best_errors(report)
    hits = sum(v <= 0.03 for v in best.values())
    per_seed = secs / len(best)
    _record(1, len(best) == 10 and hits >= 9 and per_seed < 60,
            f"{hits}/10 seeds with test error <= 0.03 (max {max(best.values()):.4f}); "
            f"{per_seed:.2f}s per seed")


def test_criterion_02_ball_intersection():
    report, _ = _run("criterion_02_ball_intersection.cfg")
    best = _best_errors(report)
    hits = sum(v <= 0.05 for v in best.values())
    mono = _l1_monotone(report)
    _record(2, len(best) == 10 and hits >= 8 and mono,
            f"{hits}/10 seeds with best test error <= 0.05; L1 nonincreasing in d: {mono}")


def test_criterion_03_agnostic_noise():
    report, _ = _run("criterion_03_agnostic_noise.cfg")
    best = _best_errors(report)
    hits = sum(v <= 0.15 for v in best.values())
    _record(3, len(best) == 10 and hits >= 9,
            f"{hits}/10 seeds with test error <= 0.15 (max {max(best.values()):.4f})")


def test_criterion_04_smoothed_cube():
    report, _ = _run("criterion_04_smoothed_cube.cfg")
    best = _best_errors(report)
    hits = sum(v <= 0.07 for v in best.values())
    _record(4, len(best) == 10 and hits >= 8,
            f"{hits}/10 seeds with best test error <= 0.07 "
            f"(errors {', '.join(f'{v:.4f}' for v in sorted(best.values()))})")


def test_criterion_05_duality():
    report, _ = _run("criterion_05_duality.cfg")
    pick = lambda m: [v for _, _, name, v in report.rows if name == m]  # noqa: E731
    gap, slack, excess = pick("duality_gap_rel"), pick("upper_slack") + pick("lower_slack"), \
        pick("excess_mismatch")
    sizes, ns = pick("support_size"), pick("n")
    ks = [k for _, k, name, _ in report.rows if name == "n"]
    ok = (len(gap) == 50 and max(gap) <= 1e-6 and min(slack) >= -1e-8 and max(excess) <= 1e-6
          and max(sizes) <= 64 and max(ns) <= 3 and max(ks) <= 3)
    _record(5, ok, f"50 instances: max relative duality gap {max(gap):.2e}, "
                   f"min slack {min(slack):.2e}, max excess mismatch {max(excess):.2e}")


def test_criterion_06_fooling():
    a, _ = _run("criterion_06a_fool_x1x2.cfg")
    b, _ = _run("criterion_06b_fool_random.cfg")
    g1, g2 = a.summary["gap.poly_0.k_1"], a.summary["gap.poly_0.k_2"]
    ok_a = abs(g1 - 0.5) <= 1e-9 and g2 <= 1e-9
    cfg = b.config
    regular = all(b.summary[f"regularity.poly_{i}"] <= 0.5 for i in range(cfg.polynomials))
    mono = all(
        all(b.summary[f"gap.poly_{i}.k_{k2}"] <= b.summary[f"gap.poly_{i}.k_{k1}"] + 1e-9
            for k1, k2 in zip((1, 2, 3), (2, 3, 4)))
        for i in range(cfg.polynomials))
    closed = max(b.summary[f"gap.poly_{i}.k_{cfg.n}"] for i in range(cfg.polynomials))
    ok = ok_a and cfg.polynomials == 20 and regular and mono and closed <= 1e-9
    _record(6, ok, f"x1x2 n=8: k=1 gap {g1:.12g}, k=2 gap {g2:.3g}; 20 random (n={cfg.n}): "
                   f"regularity <= 0.5 {regular}, nonincreasing {mono}, max gap at k=n {closed:.2e}")


def test_criterion_07_anticoncentration():
    a, _ = _run("criterion_07a_point_mass.cfg")
    b, _ = _run("criterion_07b_gaussian_window.cfg")
    probe = {p: v for m, p, v in a.rows if m == "window_mass"}
    bound = {p: v for m, p, v in a.rows if m == "bound"}
    sigma = a.config.sigma
    ratios_ok = sorted(round(p / sigma, 12) for p in probe) == [0.1, 0.5]
    ok_a = ratios_ok and all(probe[p] <= bound[p] for p in probe)
    gauss = [v for m, p, v in b.rows if m == "window_mass" and p == 0.1][0]
    ok_b = abs(gauss - 0.0399) <= 0.005
    detail = "; ".join(f"alpha/sigma={p / sigma:.1f}: {probe[p]:.5f} <= {bound[p]:.5f}"
                       for p in sorted(probe))
    _record(7, ok_a and ok_b, f"{detail}; Gaussian alpha=0.1: {gauss:.5f}")


def test_criterion_08_hypercontractivity():
    report, _ = _run("criterion_08_hypercontractivity.cfg")
    expected = sum(3 ** (1 + n + comb(n, 2)) - 1 for n in range(1, 5))
    checked, failures = report.summary["polynomials_checked"], report.summary["failures"]
    _record(8, checked == expected and failures == 0,
            f"{checked} polynomials (expected {expected}), {failures} failures")


def test_criterion_09_beta_profiles():
    g, t1 = _run("criterion_09a_beta_gaussian.cfg")
    lap, t2 = _run("criterion_09b_beta_laplace.cfg")
    beta = lambda r, j: [v for m, p, v in r.rows if m == "beta" and p == j][0]  # noqa: E731
    b16 = beta(g, 16)
    ratio = beta(lap, 16) / beta(lap, 4)
    _record(9, b16 >= 4 and ratio <= 2.5 and t1 + t2 < 1.0,
            f"Gaussian beta_16 = {b16:.4f}; Laplace beta_16/beta_4 = {ratio:.4f}; "
            f"{t1 + t2:.3f}s")


def test_criterion_10_moment_bounds():
    report, _ = _run("criterion_10_ball_moment_bounds.cfg")
    margins = {}
    for m, p, v in report.rows:
        if m == "moment_margin":
            r = int(p.split("_")[0][1:])
            margins[r] = min(margins.get(r, math.inf), v)
    ok = sorted(margins) == [2, 4, 6, 8] and report.config.directions == 10 and \
        all(v >= 10 for v in margins.values())
    _record(10, ok, "min margin per r: " + ", ".join(f"r={r}: {v:.3f}" for r, v in sorted(margins.items())))


def test_criterion_11_sign_patterns():
    report, _ = _run("criterion_11_sign_patterns.cfg")
    inst, viol = report.summary["instances"], report.summary["violations"]
    _record(11, inst == 200 and viol == 0, f"{inst} instances, {viol} violations, "
                                            f"worst ratio {report.summary['worst_ratio']:.3f}")
