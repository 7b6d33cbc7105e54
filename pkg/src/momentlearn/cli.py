"""Experiment harness: ``momentlearn <suite> --config FILE --seed S --out DIR``.

A config is a flat text file with one ``key = value`` per line and ``#``
comments.  Every suite writes ``report.csv`` (rows sorted before writing)
and ``summary.txt`` (``key = value`` lines) into the output directory.  Both
files are pure functions of the config, so reruns are byte-identical; the
elapsed time goes to stderr only.

Exit codes: 0 success, 1 failure inside a module, 2 invalid config.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import itertools
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .core import (
    Halfspace, HalfspaceFunction, Polynomial, eval_function, multilinear_indices, regularity,
)
from .distributions import (
    FiniteDistribution, FiniteSupport, LaplaceProduct, RademacherCube, StandardGaussian,
    UniformBall, UniformCube, rng_for, sample, smooth, trial_seed,
)
from .duality import (
    InfeasibleMoments, dual_sandwich, fool_ptf_rows, hypercontractivity_exhaustive,
    instance_from_distribution, sandwich_slack,
)
from .learner import agnostic_learn, evaluate, l1_loss
from .lp import LPFailure
from .metrics import anticoncentration_probe, pattern_probabilities, signed_projection_cdf
from .moments import beta_profile, directional_moment

__all__ = ["ConfigError", "ExperimentConfig", "Report", "load_config", "parse_config",
           "run", "write_report", "main"]

KINDS = ("learn", "sandwich", "fool", "probe", "moments")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# ---------------------------------------------------------------------------
# config parsing

def _int(v):
    return int(v)


def _float(v):
    return float(v)


def _bool(v):
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _int_list(v):
    out = []
    for part in v.split(","):
        part = part.strip()
        if re.fullmatch(r"-?\d+\s*-\s*-?\d+", part) and not part.startswith("-"):
            a, b = (int(x) for x in part.split("-"))
            out.extend(range(a, b + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def _float_list(v):
    return tuple(float(x) for x in v.split(",") if x.strip())


def _str(v):
    return v.strip()


# key -> (parser, default); None default means required where the suite needs it
SCHEMA = {
    "experiment": (_str, None),
    "seed": (_int, 0),
    "trials": (_int, 1),
    "out": (_str, "out"),
    "workers": (_int, 1),
    # learn
    "distribution": (_str, "gaussian"),
    "n": (_int, None),
    "halfspaces": (_int, 1),
    "combine": (_str, "and"),
    "theta": (_float, 0.0),
    "degrees": (_int_list, (1,)),
    "train_size": (_int, 1000),
    "test_size": (_int, 1000),
    "noise_rate": (_float, 0.0),
    "sigma": (_float, 0.0),
    "isotropic": (_bool, False),
    "max_basis": (_int, 2000),
    # sandwich
    "support_size": (_int, 16),
    "k": (_int, 2),
    # fool
    "mode": (_str, ""),
    "polynomial": (_str, "random"),
    "polynomials": (_int, 1),
    "ks": (_int_list, (1, 2)),
    "max_regularity": (_float, 0.5),
    "quadratic_scale": (_float, 0.3),
    "coefficients": (_int_list, (-1, 0, 1)),
    # probe
    "widths": (_float_list, (0.1,)),
    "draws": (_int, 100000),
    "atoms": (_int, 4),
    # moments
    "route": (_str, "exact"),
    "bound_orders": (_int_list, ()),
    "directions": (_int, 10),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated flat configuration; ``values`` holds every schema key."""

    values: dict = field(default_factory=dict)

    def __getattr__(self, key):
        if key == "values":
            raise AttributeError(key)
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def echo(self) -> list:
        # where and how wide a run executes never changes its results
        return [f"{k} = {_fmt_value(self.values[k])}" for k in sorted(self.values)
                if k not in ("out", "workers")]


def _fmt_value(v):
    if isinstance(v, tuple):
        return ",".join(_fmt_value(x) for x in v)
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def parse_config(text: str, overrides: dict | None = None) -> ExperimentConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", "expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(key, "unknown key")
        raw[key] = val
    values = {}
    for key, (parse, default) in SCHEMA.items():
        if key in raw:
            try:
                values[key] = parse(raw[key])
            except ValueError as exc:
                raise ConfigError(key, f"cannot parse {raw[key]!r} ({exc})") from None
        else:
            values[key] = default
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    cfg = ExperimentConfig(values)
    _validate(cfg)
    return cfg


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)


_DISTRIBUTIONS = {
    "gaussian": StandardGaussian, "ball": UniformBall, "cube": UniformCube,
    "laplace": LaplaceProduct, "rademacher": RademacherCube,
}


def _require(cond, key, message):
    if not cond:
        raise ConfigError(key, message)


def _validate(c: ExperimentConfig):
    _require(c.experiment in KINDS, "experiment", f"must be one of {', '.join(KINDS)}")
    _require(0 <= c.seed < 2 ** 64, "seed", "must be an unsigned 64-bit integer")
    _require(c.trials >= 1, "trials", "must be >= 1")
    _require(c.workers >= 1, "workers", "must be >= 1")
    kind = c.experiment
    if kind == "learn":
        _require(c.distribution in _DISTRIBUTIONS, "distribution",
                 f"must be one of {', '.join(_DISTRIBUTIONS)}")
        _require(c.n is not None and c.n >= 1, "n", "must be >= 1")
        _require(c.halfspaces >= 1, "halfspaces", "must be >= 1")
        _require(c.combine in ("and", "or", "xor"), "combine", "must be and, or or xor")
        _require(len(c.degrees) > 0 and min(c.degrees) >= 0, "degrees", "need degrees >= 0")
        _require(c.train_size >= 1, "train_size", "must be >= 1")
        _require(c.test_size >= 1, "test_size", "must be >= 1")
        _require(0.0 <= c.noise_rate < 0.5, "noise_rate", "must lie in [0, 0.5)")
        _require(c.sigma == 0.0 or 0.0 < c.sigma < 1.0, "sigma", "must be 0 (off) or in (0, 1)")
        _require(c.max_basis >= 1, "max_basis", "must be >= 1")
    elif kind == "sandwich":
        _require(c.n is not None and 1 <= c.n <= 6, "n", "must lie in 1..6")
        _require(1 <= c.support_size <= 256, "support_size", "must lie in 1..256")
        _require(0 <= c.k <= 6, "k", "must lie in 0..6")
    elif kind == "fool":
        _require(c.mode in ("ptf", "hypercontractivity"), "mode", "must be ptf or hypercontractivity")
        if c.mode == "ptf":
            _require(c.n is not None and 1 <= c.n <= 12, "n", "must lie in 1..12")
            _require(len(c.ks) > 0 and min(c.ks) >= 0, "ks", "need orders >= 0")
            _require(c.polynomials >= 1, "polynomials", "must be >= 1")
            _require(c.max_regularity > 0, "max_regularity", "must be positive")
            if c.polynomial != "random":
                try:
                    parse_polynomial(c.polynomial, c.n)
                except ValueError as exc:
                    raise ConfigError("polynomial", str(exc)) from None
        else:
            _require(c.n is not None and 1 <= c.n <= 4, "n", "must lie in 1..4 for the exhaustive check")
            _require(len(c.coefficients) > 0, "coefficients", "need at least one value")
    elif kind == "probe":
        _require(c.mode in ("anticoncentration", "sign_patterns"), "mode",
                 "must be anticoncentration or sign_patterns")
        if c.mode == "anticoncentration":
            _require(c.distribution in ("gaussian", "point_mass", "rademacher"), "distribution",
                     "must be gaussian, point_mass or rademacher")
            _require(len(c.widths) > 0 and min(c.widths) > 0, "widths", "need positive widths")
            _require(c.draws >= 1, "draws", "must be >= 1")
            _require(c.distribution != "point_mass" or 0.0 < c.sigma < 1.0, "sigma",
                     "point_mass needs 0 < sigma < 1")
        else:
            _require(1 <= c.atoms <= 8, "atoms", "must lie in 1..8")
    elif kind == "moments":
        _require(c.distribution in _DISTRIBUTIONS, "distribution",
                 f"must be one of {', '.join(_DISTRIBUTIONS)}")
        _require(c.n is not None and c.n >= 1, "n", "must be >= 1")
        _require(c.route in ("exact", "empirical"), "route", "must be exact or empirical")
        _require(c.k >= 1, "k", "must be >= 1")
        _require(all(r > 0 for r in c.bound_orders), "bound_orders", "orders must be positive")
        _require(c.directions >= 1, "directions", "must be >= 1")
        _require(c.draws >= 1, "draws", "must be >= 1")


_TERM = re.compile(r"^([+-]?\s*[0-9.eE+-]*)\s*\*?\s*((?:x\d+\s*\*?\s*)*)$")


def parse_polynomial(text: str, n: int) -> Polynomial:
    """Parse ``0.5 + x1*x2 - 2*x3`` style multilinear expressions."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", s.replace("e-", "e~").replace("E-", "E~"))
    coeffs = {}
    for term in terms:
        term = term.replace("~", "-")
        sgn = -1.0 if term.startswith("-") else 1.0
        term = term.lstrip("+-")
        factors = term.split("*")
        coef = sgn
        exps = [0] * n
        for f in factors:
            if re.fullmatch(r"x\d+", f):
                i = int(f[1:]) - 1
                if not 0 <= i < n:
                    raise ValueError(f"variable {f} outside x1..x{n}")
                exps[i] += 1
            else:
                try:
                    coef *= float(f)
                except ValueError:
                    raise ValueError(f"cannot read factor {f!r}") from None
        I = tuple(exps)
        coeffs[I] = coeffs.get(I, 0.0) + coef
    return Polynomial(coeffs, n)


# ---------------------------------------------------------------------------
# reports

@dataclass
class Report:
    """Rows under ``columns`` plus ``key = value`` summary entries."""

    kind: str
    columns: tuple
    rows: list
    summary: dict
    config: ExperimentConfig

    def csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in sorted(self.rows, key=_row_key):
            lines.append(",".join(_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        lines = [f"version = {__version__}", f"suite = {self.kind}", "# config"]
        lines += self.config.echo()
        lines.append("# results")
        lines += [f"{k} = {_fmt_value(v)}" for k, v in sorted(self.summary.items())]
        return "\n".join(lines) + "\n"

    def column(self, name):
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def select(self, **match):
        idx = {k: self.columns.index(k) for k in match}
        return [r for r in self.rows if all(r[idx[k]] == v for k, v in match.items())]


def _row_key(row):
    return tuple((0, v, "") if isinstance(v, (int, float)) else (1, 0, str(v)) for v in row)


def _cell(v):
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def write_report(report: Report, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.csv())
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.summary_text())


# ---------------------------------------------------------------------------
# suites

def _trial_seeds(c):
    return [trial_seed(c.seed, t) for t in range(c.trials)]


def _distribution(c):
    spec = _DISTRIBUTIONS[c.distribution](c.n)
    if c.experiment == "learn" and c.sigma > 0:
        spec = smooth(spec, c.sigma)
    return spec


def _target(c, seed):
    W = rng_for(seed, 5).standard_normal((c.halfspaces, c.n))
    hs = [Halfspace(w, c.theta) for w in W]
    if c.halfspaces == 1 or c.combine == "and":
        return HalfspaceFunction.intersection(hs)
    if c.combine == "or":
        return HalfspaceFunction.from_callable(hs, lambda *s: 1 if max(s) > 0 else -1)
    return HalfspaceFunction.from_callable(hs, lambda *s: int(np.prod(s)))


def _fan_out(c, fn):
    """``fn(c, seed)`` for every trial seed, in trial order."""
    seeds = _trial_seeds(c)
    if c.workers == 1 or len(seeds) == 1:
        return [fn(c, s) for s in seeds]
    with concurrent.futures.ProcessPoolExecutor(max_workers=c.workers) as pool:
        return list(pool.map(fn, [c] * len(seeds), seeds))


def _learn_trial(c, seed):
    spec = _distribution(c)
    F = _target(c, seed)
    X = sample(spec, seed, c.train_size + c.test_size)
    y = eval_function(F, X).astype(float)
    if c.noise_rate > 0:
        flip = rng_for(seed, 9).random(y.size) < c.noise_rate
        y[flip] = -y[flip]
    Xtr, ytr = X[:c.train_size], y[:c.train_size]
    Xte, yte = X[c.train_size:], y[c.train_size:]
    rows = []
    for d in c.degrees:
        h = agnostic_learn(Xtr, ytr, d, isotropic=c.isotropic, max_basis=c.max_basis)
        Xfit = h.transform(Xtr) if h.transform is not None else Xtr
        rows += [(seed, d, "test_error", evaluate(h, Xte, yte)),
                 (seed, d, "train_error", evaluate(h, Xtr, ytr)),
                 (seed, d, "train_l1", l1_loss(h.polynomial, Xfit, ytr) / c.train_size),
                 (seed, d, "threshold", h.threshold)]
    return rows


def _run_learn(c):
    rows, summary, best = [], {}, []
    for part in _fan_out(c, _learn_trial):
        rows += part
        seed = part[0][0]
        errs = [v for _, _, name, v in part if name == "test_error"]
        l1s = [v for _, v in sorted((d, v) for _, d, name, v in part if name == "train_l1")]
        best.append(min(errs))
        summary[f"best_test_error.seed_{seed}"] = min(errs)
        summary[f"l1_nonincreasing.seed_{seed}"] = all(
            l1s[i + 1] <= l1s[i] + 1e-6 for i in range(len(l1s) - 1))
    summary["best_test_error.mean"] = float(np.mean(best))
    summary["best_test_error.max"] = float(np.max(best))
    return Report("learn", ("seed", "degree", "metric", "value"), rows, summary, c)


def _random_instance(seed, n_max, size_max, k_max):
    rng = rng_for(seed, 21)
    n = int(rng.integers(1, n_max + 1))
    size = int(rng.integers(1, size_max + 1))
    k = int(rng.integers(1, k_max + 1)) if k_max >= 1 else 0
    pts = np.unique(np.round(rng.uniform(-1.0, 1.0, (size, n)), 6), axis=0)
    probs = rng.dirichlet(np.ones(pts.shape[0]))
    f = (rng.random(pts.shape[0]) < 0.5).astype(float)
    D = FiniteDistribution(pts, probs / probs.sum())
    return instance_from_distribution(D, k, f), k


def _sandwich_trial(c, seed):
    inst, k = _random_instance(seed, c.n, c.support_size, c.k)
    pair = dual_sandwich(inst)
    up_slack, lo_slack = sandwich_slack(pair, inst)
    ref = inst.reference()
    dual_gap = max(abs(pair.max_value - pair.upper_value) / (1 + abs(pair.max_value)),
                   abs(pair.min_value - pair.lower_value) / (1 + abs(pair.min_value)))
    # E[P_u] - E[f] against the excess of the max primal over E[f]
    excess = abs((pair.upper_value - ref) - (pair.max_value - ref))
    vals = {"primal_max": pair.max_value, "primal_min": pair.min_value,
            "dual_upper": pair.upper_value, "dual_lower": pair.lower_value,
            "reference": ref, "upper_gap": pair.gaps[0], "lower_gap": pair.gaps[1],
            "upper_slack": up_slack, "lower_slack": lo_slack,
            "duality_gap_rel": dual_gap, "excess_mismatch": excess,
            "support_size": float(inst.support.shape[0]), "n": float(inst.n)}
    return [(seed, k, name, v) for name, v in vals.items()]


def _run_sandwich(c):
    rows = [r for part in _fan_out(c, _sandwich_trial) for r in part]
    pick = lambda name: [v for _, _, m, v in rows if m == name]  # noqa: E731
    summary = {"instances": c.trials,
               "max_duality_gap_rel": max(pick("duality_gap_rel")),
               "min_sandwich_slack": min(pick("upper_slack") + pick("lower_slack")),
               "max_excess_mismatch": max(pick("excess_mismatch"))}
    return Report("sandwich", ("seed", "k", "metric", "value"), rows, summary, c)


def _random_regular_polynomial(seed, n, max_delta, quad_scale):
    rng = rng_for(seed, 31)
    idx = [I for I in multilinear_indices(2, n) if sum(I)]
    for _ in range(10_000):
        coeffs = {I: rng.standard_normal() * (1.0 if sum(I) == 1 else quad_scale) for I in idx}
        P = Polynomial(coeffs, n)
        if regularity(P) <= max_delta:
            return P
    raise ValueError("no polynomial met the regularity bound in 10000 draws")


def _run_fool(c):
    if c.mode == "hypercontractivity":
        rows, total, fails = [], 0, 0
        for n in range(1, c.n + 1):
            checked, failures, worst = hypercontractivity_exhaustive(n, c.coefficients)
            rows.append((n, checked, failures, worst))
            total += checked
            fails += failures
        summary = {"polynomials_checked": total, "failures": fails}
        return Report("fool", ("n", "polynomials", "failures", "worst_ratio"), rows, summary, c)
    rows, summary = [], {}
    if c.polynomial == "random":
        polys = [_random_regular_polynomial(trial_seed(c.seed, i), c.n, c.max_regularity,
                                            c.quadratic_scale) for i in range(c.polynomials)]
    else:
        polys = [parse_polynomial(c.polynomial, c.n)]
    monotone = True
    for i, P in enumerate(polys):
        gaps = []
        for k in c.ks:
            part = fool_ptf_rows(P, c.n, k)
            rows += [(i, kk, t, g) for kk, t, g in part]
            gaps.append(max(g for _, _, g in part))
            summary[f"gap.poly_{i}.k_{k}"] = gaps[-1]
        summary[f"regularity.poly_{i}"] = regularity(P) if not P.degree == 0 else 0.0
        order = np.argsort(c.ks, kind="stable")
        g_sorted = [gaps[j] for j in order]
        ok = all(g_sorted[j + 1] <= g_sorted[j] + 1e-9 for j in range(len(g_sorted) - 1))
        summary[f"nonincreasing.poly_{i}"] = ok
        monotone &= ok
    summary["all_nonincreasing"] = monotone
    return Report("fool", ("polynomial", "k", "threshold", "gap"), rows, summary, c)


def _run_probe(c):
    rows, summary = [], {}
    if c.mode == "anticoncentration":
        seed = c.seed
        if c.distribution == "gaussian":
            z = sample(StandardGaussian(1), seed, c.draws)
        elif c.distribution == "rademacher":
            z = sample(RademacherCube(1), seed, c.draws)
        else:
            mass = FiniteSupport(FiniteDistribution([[0.0]], [1.0]))
            # noise with standard deviation sigma
            z = sample(smooth(mass, c.sigma, cov=np.array([[c.sigma ** 2]])), seed, c.draws)
        probe = anticoncentration_probe(z, c.widths)
        for a, v in probe.items():
            rows.append(("window_mass", a, v))
            if c.distribution == "point_mass":
                b = 0.40 * a / c.sigma
                rows.append(("bound", a, b + 3.0 * math.sqrt(b * (1 - b) / c.draws)))
        return Report("probe", ("metric", "parameter", "value"), rows, summary, c)
    violations, worst = 0, 0.0
    for seed in _trial_seeds(c):
        rng = rng_for(seed, 41)
        X = rng.integers(-3, 4, (int(rng.integers(1, c.atoms + 1)), 2)) / 2.0
        Y = rng.integers(-3, 4, (int(rng.integers(1, c.atoms + 1)), 2)) / 2.0
        eps = signed_projection_cdf(X, Y)
        grid = [np.unique(np.concatenate([X[:, r], Y[:, r], X[:, r] + 0.25, Y[:, r] + 0.25,
                                          [-10.0]])) for r in range(2)]
        for theta in itertools.product(*grid):
            diff = pattern_probabilities(X, theta) - pattern_probabilities(Y, theta)
            for g in itertools.product((-1.0, 1.0), repeat=4):
                gap = abs(float(np.dot(g, diff)))
                if gap > 4.0 * eps + 1e-12:
                    violations += 1
                if eps > 0:
                    worst = max(worst, gap / (4.0 * eps))
        rows.append(("signed_projection_cdf", seed, eps))
    summary.update({"instances": c.trials, "violations": violations, "worst_ratio": worst})
    rows.append(("violations", "all", float(violations)))
    return Report("probe", ("metric", "parameter", "value"), rows, summary, c)


def _run_moments(c):
    spec = _DISTRIBUTIONS[c.distribution](c.n)
    rows, summary = [], {}
    dirs = np.eye(c.n)
    source = spec if c.route == "exact" else sample(spec, c.seed, c.draws)
    prof = beta_profile(source, dirs, c.k)
    for j, mu in prof.mu:
        rows.append(("mu", j, mu))
        rows.append(("beta", j, prof.beta(j)))
    summary[f"beta_{c.k}"] = prof.beta(c.k)
    if c.bound_orders:
        X = sample(spec, c.seed, c.draws)
        W = rng_for(c.seed, 51).standard_normal((c.directions, c.n))
        W /= np.linalg.norm(W, axis=1, keepdims=True)
        worst = math.inf
        for i, w in enumerate(W):
            m2 = directional_moment(X, w, 2)
            for r in c.bound_orders:
                margin = r ** r * m2 ** (r / 2) / directional_moment(X, w, r)
                rows.append(("moment_margin", f"r{r}_w{i}", margin))
                worst = min(worst, margin)
        summary["min_moment_margin"] = worst
    return Report("moments", ("metric", "parameter", "value"), rows, summary, c)


_RUNNERS = {"learn": _run_learn, "sandwich": _run_sandwich, "fool": _run_fool,
            "probe": _run_probe, "moments": _run_moments}


def run(config: ExperimentConfig) -> Report:
    """Execute the suite named by ``config.experiment``."""
    return _RUNNERS[config.experiment](config)


# ---------------------------------------------------------------------------
# entry point

def _parser():
    ap = argparse.ArgumentParser(prog="momentlearn", description=__doc__.splitlines()[0])
    ap.add_argument("suite", choices=KINDS)
    ap.add_argument("--config", required=True, help="key = value config file")
    ap.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    ap.add_argument("--out", default=None, help="output directory (overrides the config)")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = load_config(args.config, {"seed": args.seed, "out": args.out})
        if cfg.experiment != args.suite:
            raise ConfigError("experiment", f"config is for {cfg.experiment!r}, not {args.suite!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(cfg)
        write_report(report, cfg.out)
    except (LPFailure, InfeasibleMoments, ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {cfg.out} in {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
