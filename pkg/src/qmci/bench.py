"""Convergence experiments: MSE versus oracle calls, per method.

Every trial's generator is derived from (seed, method, q, trial) by a
stable hash, so runs are reproducible regardless of execution order or
thread count.  The reported q of each quantum row is cross-checked
against the P-invocation tally of the estimation layer.
"""

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dist import discretize, synthesize_state_prep
from .errors import ConfigError
from .estimate import (CallCounter, EstimationProblem, Schedule,
                       canonical_qae, mle_estimate, noise_aware_mle,
                       run_schedule)
from .fourier import allocate_budget, cosine_series, estimate_fourier
from .oracle import INTEGRANDS, build_table_oracle, tabulate_integrand
from .pipeline import (FittedModel, brute_force_expectation, classical_mc,
                       fit_model, load_csv, model_to_distribution)
from .sim import NoiseSpec

METHODS = ("classical", "qmci-mle", "qmci-canonical", "qmci-fourier",
           "qmci-noise-aware")


def derive_seed(*parts):
    """Stable 64-bit seed from heterogeneous parts."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(),
                          "big")


def derive_rng(*parts):
    return np.random.default_rng(derive_seed(*parts))


@dataclass
class ConvergenceRow:
    method: str
    q: int
    trials: int
    mse: float
    truth: float


@dataclass
class Setup:
    """Everything a run needs: model, grid distribution, integrand, truth."""

    model: FittedModel
    dist: object
    fn: object                 # raw integrand callable on physical x
    f: object                  # BoundedFunction on the grid
    truth_normalized: float
    truth: float


def make_integrand(spec):
    spec = dict(spec)
    name = spec.pop("name")
    if name not in INTEGRANDS:
        raise ConfigError(f"unknown integrand {name!r}")
    try:
        return INTEGRANDS[name](**spec)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for integrand {name!r}: {exc}") from None


def make_model(dist_spec):
    spec = dict(dist_spec)
    if "csv" in spec:
        data = load_csv(spec["csv"])
        return fit_model(data, spec["family"])
    family = spec.pop("family")
    spec.pop("x_lo", None)
    spec.pop("x_hi", None)
    if family == "uniform":
        params = {"lo": spec.pop("lo", 0.0), "hi": spec.pop("hi", 1.0)}
    else:
        params = {"mu": spec.pop("mu"), "sigma": spec.pop("sigma")}
    if spec:
        raise ConfigError(f"unknown distribution keys {sorted(spec)}")
    return FittedModel(family, params, 0.0, 0)


def build_setup(dist_spec, integrand_spec, n_qubits):
    model = make_model(dist_spec)
    dist = model_to_distribution(model, n_qubits,
                                 dist_spec.get("x_lo"), dist_spec.get("x_hi"))
    fn = make_integrand(integrand_spec)
    f = tabulate_integrand(fn, dist,
                           integrand_spec.get("f_min"), integrand_spec.get("f_max"))
    truth_norm, truth = brute_force_expectation(dist, f)
    return Setup(model, dist, fn, f, truth_norm, truth)


def _table_problem(setup):
    state_prep = synthesize_state_prep(setup.dist)
    oracle = build_table_oracle(setup.f, setup.dist.n_qubits)
    return EstimationProblem(state_prep, oracle)


def _run_trials(n_trials, threads, trial_fn):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(trial_fn, range(n_trials)))
    return [trial_fn(i) for i in range(n_trials)]


def run_convergence(setup, methods_cfg, trials, seed, noise_p=0.0, threads=1):
    """Seeded MSE-vs-q table; returns (rows, p_use_tally)."""
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    noise = NoiseSpec(noise_p) if noise_p > 0 else None
    counter = CallCounter()
    rows = []
    expected_p_uses = 0

    for method, cfg in methods_cfg.items():
        if method not in METHODS:
            raise ConfigError(f"unknown method {method!r}")
        if method == "classical":
            for q in cfg["q"]:
                def trial(i, q=q):
                    rng = derive_rng(seed, "classical", q, i)
                    return classical_mc(setup.model, setup.fn, q, rng)
                ests = _run_trials(trials, threads, trial)
                rows.append(_row("classical", q, ests, setup.truth, trials))
            continue

        if method in ("qmci-mle", "qmci-noise-aware"):
            problem = _table_problem(setup)
            growth = cfg.get("growth", 2.0)
            shots = cfg["shots"]
            for depth in cfg["depths"]:
                schedule = Schedule.exponential(depth, shots, growth)
                q = schedule.total_oracle_calls
                if noise is None:
                    # warm the exact-probability cache before threading
                    for m, _ in schedule.entries:
                        problem.exact_hit_probability(m)

                def trial(i, schedule=schedule):
                    rng = derive_rng(seed, method, schedule.total_oracle_calls, i)
                    results = run_schedule(problem, schedule, noise, rng, counter)
                    est = (mle_estimate(results) if method == "qmci-mle"
                           else noise_aware_mle(results))
                    return setup.f.denormalize(est.a_hat)

                ests = _run_trials(trials, threads, trial)
                rows.append(_row(method, q, ests, setup.truth, trials))
                expected_p_uses += q * trials
            continue

        if method == "qmci-canonical":
            problem = _table_problem(setup)
            for t in cfg["t"]:
                q = 2 * ((1 << t) - 1) + 1

                def trial(i, t=t, q=q):
                    rng = derive_rng(seed, "qmci-canonical", q, i)
                    est = canonical_qae(problem, t, rng)
                    counter.add(est.q)
                    return setup.f.denormalize(est.a_hat)

                ests = _run_trials(trials, threads, trial)
                rows.append(_row("qmci-canonical", q, ests, setup.truth, trials))
                expected_p_uses += q * trials
            continue

        # qmci-fourier
        series = cosine_series(setup.f, cfg["K"])
        for total_q in cfg["total_q"]:
            plan = allocate_budget(series, total_q, cfg.get("base_shots", 32))
            q = sum(s.total_oracle_calls for s in plan.schedules.values())

            def trial(i, plan=plan, q=q):
                rng = derive_rng(seed, "qmci-fourier", q, i)
                result = estimate_fourier(setup.dist, setup.f, series,
                                          "mle", plan, rng, noise=noise)
                counter.add(result.q)
                return result.value

            ests = _run_trials(trials, threads, trial)
            rows.append(_row("qmci-fourier", max(q, 1), ests, setup.truth, trials))
            expected_p_uses += q * trials

    if counter.p_uses != expected_p_uses:
        raise AssertionError(
            f"P-use tally {counter.p_uses} != reported {expected_p_uses}")
    return rows, counter


def _row(method, q, estimates, truth, trials):
    mse = float(np.mean([(e - truth) ** 2 for e in estimates]))
    return ConvergenceRow(method, int(q), trials, mse, truth)


CSV_HEADER = "method,q,trials,mse,truth"


def rows_to_csv(rows):
    lines = [CSV_HEADER]
    for r in rows:
        lines.append("%s,%d,%d,%.17g,%.17g"
                     % (r.method, r.q, r.trials, r.mse, r.truth))
    return "\n".join(lines) + "\n"


def rows_from_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    rows = []
    for ln in lines[1:]:
        method, q, trials, mse, truth = ln.split(",")
        rows.append(ConvergenceRow(method, int(q), int(trials),
                                   float(mse), float(truth)))
    return rows


def fit_slopes(rows, min_points=5):
    """Per-method OLS of log(mse) on log(q): slope and its standard error."""
    out = {}
    methods = sorted({r.method for r in rows})
    for method in methods:
        pts = [(r.q, r.mse) for r in rows if r.method == method]
        if len(pts) < min_points:
            raise ValueError(
                f"method {method!r} has {len(pts)} rows; need >= {min_points}")
        x = np.log([p[0] for p in pts])
        y = np.log([p[1] for p in pts])
        xc = x - x.mean()
        slope = float(np.dot(xc, y) / np.dot(xc, xc))
        intercept = float(y.mean() - slope * x.mean())
        resid = y - (intercept + slope * x)
        dof = max(len(pts) - 2, 1)
        stderr = float(math.sqrt(np.dot(resid, resid) / dof / np.dot(xc, xc)))
        out[method] = {"slope": slope, "stderr": stderr, "points": len(pts)}
    return out
