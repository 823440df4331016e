"""Cosine-series decomposition of the integrand and harmonic-wise estimation.

The normalized integrand is extended evenly about both grid endpoints
(period 2(2^n - 1) in index units) and analyzed as a type-I discrete
cosine series with fundamental omega0 = pi / (2^n - 1).  The even
extension keeps the periodic function continuous, so piecewise-linear
integrands have O(1/k^2) coefficients.  Each harmonic's expectation
E[cos(k omega0 x)] = 1 - 2 a_k-amplitude is then estimated with the
shallow n+1-rotation oracle, and the expectation is reassembled as
a0/2 + sum_k a_k E[cos(k omega0 x)].
"""

import math
from dataclasses import dataclass

import numpy as np

from .dist import synthesize_state_prep
from .errors import PlanError
from .estimate import (EstimationProblem, Schedule, canonical_qae,
                       mle_estimate, noise_aware_mle, run_schedule)
from .oracle import HarmonicSpec, build_harmonic_oracle

ACTIVE_COEFF = 1e-12


@dataclass
class FourierSeries:
    """Truncated cosine coefficients of the normalized integrand."""

    coeffs: np.ndarray        # coeffs[k] = a_k, k = 0..K_stored
    fundamental: float        # omega0 in radians per grid index
    order: int                # requested truncation order K
    tail_bound: float         # max grid residual of the truncation

    @property
    def a0(self):
        return float(self.coeffs[0])

    def active_harmonics(self):
        return [k for k in range(1, self.coeffs.size)
                if abs(self.coeffs[k]) > ACTIVE_COEFF]

    def reconstruct(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.a0 / 2.0)
        for k in range(1, self.coeffs.size):
            out += self.coeffs[k] * np.cos(k * self.fundamental * x)
        return out


def cosine_series(f, order):
    """Type-I discrete cosine analysis of the normalized values.

    The top (k = M) coefficient carries the conventional half weight so
    reconstruction is uniformly a0/2 + sum a_k cos(k omega0 x); with
    order >= M the reconstruction is exact on the grid.
    """
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    g = f.normalized
    m_top = g.size - 1
    k = np.arange(m_top + 1)
    basis = np.cos(np.pi * np.outer(k, k) / m_top) if m_top > 0 else np.ones((1, 1))
    weights = np.ones(m_top + 1)
    weights[0] = 0.5
    weights[-1] = 0.5
    coeffs = (2.0 / max(m_top, 1)) * (basis * weights) @ g
    coeffs[-1] /= 2.0
    kept = min(order, m_top)
    series = FourierSeries(coeffs[:kept + 1].copy(),
                           math.pi / max(m_top, 1), order, 0.0)
    series.tail_bound = float(np.max(np.abs(g - series.reconstruct(np.arange(g.size)))))
    return series


@dataclass
class BudgetPlan:
    """Per-harmonic schedules under a total oracle-call budget."""

    schedules: dict           # harmonic index -> Schedule
    total_q: int

    def __post_init__(self):
        spent = sum(s.total_oracle_calls for s in self.schedules.values())
        if spent > self.total_q:
            raise PlanError(
                f"plan spends {spent} oracle calls, budget is {self.total_q}")


def allocate_budget(series, total_q, base_shots):
    """Exponential schedules with shots scaled by |a_k|^(2/3).

    The 2/3 exponent minimizes the combined variance of the
    coefficient-weighted sum for q^-2 estimators under a fixed total q.
    """
    active = series.active_harmonics()
    if not active:
        return BudgetPlan({}, total_q)
    weights = np.array([abs(series.coeffs[k]) ** (2.0 / 3.0) for k in active])
    weights /= weights.max()
    shots = {k: max(1, int(round(base_shots * w)))
             for k, w in zip(active, weights)}
    if sum(shots.values()) > total_q:
        if len(active) > total_q:
            raise PlanError(
                f"budget {total_q} cannot cover {len(active)} harmonics; "
                f"minimum feasible q is {len(active)}")
        shots = {k: 1 for k in active}
    depth = 1
    while True:
        trial = {k: Schedule.exponential(depth + 1, n) for k, n in shots.items()}
        if sum(s.total_oracle_calls for s in trial.values()) > total_q:
            break
        depth += 1
    schedules = {k: Schedule.exponential(depth, n) for k, n in shots.items()}
    return BudgetPlan(schedules, total_q)


@dataclass
class HarmonicEstimate:
    harmonic: int
    coefficient: float
    amplitude: float          # estimated P(appended=1) for this harmonic
    cos_expectation: float
    q: int


@dataclass
class FourierResult:
    value: float              # denormalized expectation estimate
    normalized_value: float
    q: int
    breakdown: list
    series: FourierSeries


_ESTIMATORS = ("mle", "canonical", "noise_aware")


def estimate_fourier(dist, f, series, estimator="mle", plan=None, rng=None,
                     exact=False, noise=None):
    """Estimate E[f] as coefficient-weighted harmonic amplitude estimates.

    With exact=True (zero-shot-noise mode) each harmonic amplitude is read
    from the simulated state directly, isolating truncation error; q = 0.
    """
    if estimator not in _ESTIMATORS:
        raise ValueError(f"estimator must be one of {_ESTIMATORS}")
    active = series.active_harmonics()
    if not exact:
        if plan is None:
            raise PlanError("sampling estimation needs a budget plan")
        missing = [k for k in active if k not in plan.schedules]
        if missing:
            raise PlanError(f"budget plan misses harmonics {missing}")
    state_prep = synthesize_state_prep(dist)
    breakdown = []
    total = series.a0 / 2.0
    q_total = 0
    for k in active:
        oracle = build_harmonic_oracle(
            HarmonicSpec(omega=k * series.fundamental, phase=0.0),
            dist.n_qubits)
        problem = EstimationProblem(state_prep, oracle)
        if exact:
            amp, q_k = problem.exact_amplitude(), 0
        elif estimator == "canonical":
            q_share = plan.schedules[k].total_oracle_calls
            t = max(1, int(math.log2(max(2, (q_share + 1) // 2))))
            t = min(t, 10, 26 - dist.n_qubits - 1)
            est = canonical_qae(problem, t, rng)
            amp, q_k = est.a_hat, est.q
        else:
            results = run_schedule(problem, plan.schedules[k], noise, rng)
            est = mle_estimate(results) if estimator == "mle" \
                else noise_aware_mle(results)
            amp, q_k = est.a_hat, est.q
        cos_k = 1.0 - 2.0 * amp
        total += series.coeffs[k] * cos_k
        q_total += q_k
        breakdown.append(HarmonicEstimate(k, float(series.coeffs[k]),
                                          amp, cos_k, q_k))
    normalized = min(1.0, max(0.0, total))
    return FourierResult(f.denormalize(normalized), normalized,
                         q_total, breakdown, series)
