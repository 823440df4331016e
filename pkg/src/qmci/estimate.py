"""Amplitude estimation of a = sum_x p(x) f(x).

Builds the Grover operator Q = A S0 A^dag S_good for A = oracle composed
with state preparation, runs measurement schedules against exact
simulation, and recovers the amplitude three ways: canonical QPE-based
estimation, schedule + maximum-likelihood post-processing, and a
noise-aware maximum-likelihood fit that absorbs depolarizing damping
into the estimator.  Oracle calls are counted as P-invocations,
q = sum_k N_k (2 m_k + 1).
"""

import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .circuit import Circuit
from .errors import CapacityError
from .gates import Gate
from .qft import qft_circuit
from .sim import MAX_QUBITS, new_state, run_circuit

_TINY = 1e-300


@dataclass(frozen=True)
class Schedule:
    """Grover-iterate counts with shot counts; m strictly increasing."""

    entries: tuple

    def __post_init__(self):
        last = -1
        for m, shots in self.entries:
            if m <= last:
                raise ValueError("schedule m values must be strictly increasing")
            if shots < 1:
                raise ValueError("schedule shot counts must be >= 1")
            last = m

    @property
    def total_oracle_calls(self):
        return sum(shots * (2 * m + 1) for m, shots in self.entries)

    @classmethod
    def exponential(cls, depth, shots, growth=2.0):
        """m = 0, 1, round(growth), round(growth^2), ... (deduplicated)."""
        if depth < 1:
            raise ValueError("schedule depth must be >= 1")
        if growth <= 1.0:
            raise ValueError("schedule growth must exceed 1")
        ms = [0]
        v = 1.0
        while len(ms) < depth:
            m = int(round(v))
            if m > ms[-1]:
                ms.append(m)
            v *= growth
        return cls(tuple((m, shots) for m in ms))


@dataclass
class AmplitudeEstimate:
    a_hat: float
    ci_low: float
    ci_high: float
    q: int
    lambda_hat: float = None
    degenerate: bool = False


class CallCounter:
    """Tally of P-invocations represented by the simulations run."""

    def __init__(self):
        self.p_uses = 0
        self._lock = threading.Lock()

    def add(self, k):
        with self._lock:
            self.p_uses += k


@dataclass
class EstimationProblem:
    """State preparation P plus function oracle R on n input qubits + 1."""

    state_prep: object
    oracle: Circuit
    _p1: dict = field(default_factory=dict, init=False, repr=False)
    _walk: object = field(default=None, init=False, repr=False)
    _walk_m: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        n = self.state_prep.circuit.n_qubits
        if self.oracle.n_qubits != n + 1:
            raise ValueError("oracle must act on n_input + 1 qubits")

    @property
    def n_qubits(self):
        """Input qubit count n; circuits act on n + 1."""
        return self.state_prep.circuit.n_qubits

    def a_circuit(self):
        c = Circuit(self.n_qubits + 1)
        c.extend(self.state_prep.circuit.gates)
        c.extend(self.oracle.gates)
        return c

    def exact_amplitude(self):
        """Exact P(appended=1) of A|0>, the true amplitude a."""
        return self.exact_hit_probability(0)

    def exact_hit_probability(self, m):
        """Exact P(appended=1) after Q^m A |0>, cached incrementally.

        Not thread-safe; warm the cache before sharing across threads.
        """
        if m not in self._p1:
            if self._walk is None or self._walk_m > m:
                self._walk = run_circuit(new_state(self.n_qubits + 1),
                                         self.a_circuit())
                self._walk_m = 0
                self._p1.setdefault(0, _appended_one_probability(self._walk))
            grover = grover_operator(self)
            while self._walk_m < m:
                run_circuit(self._walk, grover)
                self._walk_m += 1
                self._p1.setdefault(self._walk_m,
                                    _appended_one_probability(self._walk))
        return self._p1[m]


def _appended_one_probability(state):
    half = state.amps.size // 2
    return float(np.sum(np.abs(state.amps[half:]) ** 2))


def grover_operator(problem):
    """Q = A S0 A^dag S_good, applied right to left as a circuit."""
    n_total = problem.n_qubits + 1
    a = problem.a_circuit()
    q = Circuit(n_total)
    q.phase(math.pi, n_total - 1)                    # S_good on the appended qubit
    q.extend(a.inverse().gates)
    q.flip_about_zero(tuple(range(n_total)))         # S0
    q.extend(a.gates)
    return q


def run_schedule(problem, schedule, noise=None, rng=None, counter=None):
    """Measure the appended qubit N_k times after Q^{m_k} A |0>.

    Noiseless entries draw hits from the exact Born probability of the
    simulated state; noisy entries simulate one stochastic Pauli
    trajectory per shot.  Returns a list of (m_k, N_k, h_k).
    """
    if rng is None:
        raise ValueError("run_schedule needs an rng")
    noisy = noise is not None and noise.p_error > 0
    results = []
    for m, shots in schedule.entries:
        if noisy:
            hits = 0
            a = problem.a_circuit()
            grover = grover_operator(problem)
            for _ in range(shots):
                state = new_state(problem.n_qubits + 1)
                run_circuit(state, a, noise, rng)
                for _ in range(m):
                    run_circuit(state, grover, noise, rng)
                hits += 1 if rng.random() < _appended_one_probability(state) else 0
        else:
            p1 = problem.exact_hit_probability(m)
            hits = int(rng.binomial(shots, p1))
        if counter is not None:
            counter.add(shots * (2 * m + 1))
        results.append((m, shots, hits))
    return results


# -- maximum-likelihood post-processing --------------------------------------

_GRID_POINTS = 100_000
_ll_tables = {}


def _loglik_tables(ms, grid_points):
    key = (ms, grid_points)
    if key not in _ll_tables:
        thetas = np.linspace(0.0, math.pi / 2, grid_points)
        s2 = np.sin(np.outer(thetas, 2 * np.asarray(ms) + 1)) ** 2
        tables = (thetas,
                  np.log(np.clip(s2, _TINY, None)),
                  np.log(np.clip(1.0 - s2, _TINY, None)))
        if len(_ll_tables) >= 2:
            _ll_tables.pop(next(iter(_ll_tables)))
        _ll_tables[key] = tables
    return _ll_tables[key]


def _neg_loglik(theta, ms, Ns, hs):
    s2 = np.sin((2 * ms + 1) * theta) ** 2
    return -(hs @ np.log(np.clip(s2, _TINY, None))
             + (Ns - hs) @ np.log(np.clip(1.0 - s2, _TINY, None)))


def _grid_interval(thetas, ll, i_best, threshold):
    lo = i_best
    while lo > 0 and ll[lo - 1] >= threshold:
        lo -= 1
    hi = i_best
    while hi < ll.size - 1 and ll[hi + 1] >= threshold:
        hi += 1
    return thetas[lo], thetas[hi]


def mle_estimate(results, grid_points=_GRID_POINTS):
    """Grid-search + refined MLE of theta with a likelihood-ratio interval.

    results: list of (m, N, h) from run_schedule.
    """
    if not results:
        raise ValueError("empty schedule results")
    ms = np.array([r[0] for r in results])
    Ns = np.array([r[1] for r in results], dtype=float)
    hs = np.array([r[2] for r in results], dtype=float)
    thetas, ls, lc = _loglik_tables(tuple(ms), grid_points)
    ll = ls @ hs + lc @ (Ns - hs)
    i = int(np.argmax(ll))
    lo, hi = thetas[max(i - 1, 0)], thetas[min(i + 1, thetas.size - 1)]
    res = minimize_scalar(_neg_loglik, bounds=(lo, hi), method="bounded",
                          args=(ms, Ns, hs), options={"xatol": 1e-12})
    theta_star, ll_star = float(res.x), -float(res.fun)
    t_lo, t_hi = _grid_interval(thetas, ll, i, ll_star - 0.5)
    a_hat = min(1.0, max(0.0, math.sin(theta_star) ** 2))
    q = int(np.sum(Ns * (2 * ms + 1)))
    return AmplitudeEstimate(a_hat,
                             min(math.sin(t_lo) ** 2, a_hat),
                             max(math.sin(t_hi) ** 2, a_hat),
                             q)


def noise_aware_mle(results, theta_points=4001, lambda_points=81,
                    lambda_max=0.5):
    """Joint MLE of (theta, lambda) under contrast damping toward 1/2.

    Model: P(1|m) = 1/2 + (sin^2((2m+1)theta) - 1/2) exp(-lambda (2m+1)).
    A flat likelihood along lambda at the optimum marks the fit degenerate.
    """
    if not results:
        raise ValueError("empty schedule results")
    ms = np.array([r[0] for r in results])
    Ns = np.array([r[1] for r in results], dtype=float)
    hs = np.array([r[2] for r in results], dtype=float)
    reps = 2 * ms + 1
    thetas = np.linspace(0.0, math.pi / 2, theta_points)
    lambdas = np.linspace(0.0, lambda_max, lambda_points) if lambda_max > 0 \
        else np.array([0.0])
    s2 = np.sin(np.outer(thetas, reps)) ** 2

    def loglik_row(lam):
        p = 0.5 + (s2 - 0.5) * np.exp(-lam * reps)
        p = np.clip(p, _TINY, 1.0 - 1e-15)
        return np.log(p) @ hs + np.log(1.0 - p) @ (Ns - hs)

    rows = np.array([loglik_row(lam) for lam in lambdas])   # (L, T)
    li, ti = np.unravel_index(int(np.argmax(rows)), rows.shape)

    def nll(x):
        theta, lam = x
        p = 0.5 + (np.sin(reps * theta) ** 2 - 0.5) * np.exp(-lam * reps)
        p = np.clip(p, _TINY, 1.0 - 1e-15)
        return -(hs @ np.log(p) + (Ns - hs) @ np.log(1.0 - p))

    dt = thetas[1] - thetas[0] if theta_points > 1 else 1e-3
    dl = lambdas[1] - lambdas[0] if lambdas.size > 1 else 0.0
    bounds = [(max(0.0, thetas[ti] - dt), min(math.pi / 2, thetas[ti] + dt)),
              (max(0.0, lambdas[li] - dl), min(lambda_max, lambdas[li] + dl))]
    if lambdas.size == 1:
        bounds[1] = (0.0, 0.0)
    res = minimize(nll, x0=[thetas[ti], lambdas[li]], method="L-BFGS-B",
                   bounds=bounds)
    theta_star, lambda_star = float(res.x[0]), float(res.x[1])
    ll_star = -float(res.fun)

    profile = rows.max(axis=0)
    t_lo, t_hi = _grid_interval(thetas, profile, ti, ll_star - 0.5)
    lambda_span = float(rows[:, ti].max() - rows[:, ti].min())
    degenerate = lambdas.size > 1 and lambda_span < 0.5

    a_hat = min(1.0, max(0.0, math.sin(theta_star) ** 2))
    q = int(np.sum(Ns * (2 * ms + 1)))
    return AmplitudeEstimate(a_hat,
                             min(math.sin(t_lo) ** 2, a_hat),
                             max(math.sin(t_hi) ** 2, a_hat),
                             q, lambda_hat=lambda_star, degenerate=degenerate)


# -- canonical QPE-based estimation ------------------------------------------

def _check_canonical_capacity(problem, t_qubits):
    if not 1 <= t_qubits <= 10:
        raise CapacityError("t_qubits must lie in [1, 10]")
    total = problem.n_qubits + 1 + t_qubits
    if total > MAX_QUBITS:
        raise CapacityError(
            f"QPE needs {total} qubits, capacity is {MAX_QUBITS}")


def canonical_qae_circuit(problem, t_qubits):
    """A-prepared eigenstate input, controlled Grover powers, inverse QFT."""
    _check_canonical_capacity(problem, t_qubits)
    n_state = problem.n_qubits + 1
    total = n_state + t_qubits
    c = Circuit(total)
    c.extend(problem.a_circuit().gates)
    for j in range(t_qubits):
        c.h(n_state + j)
    grover = grover_operator(problem)
    for j in range(t_qubits):
        controlled = grover.controlled(n_state + j).gates
        for _ in range(1 << j):
            c.extend(controlled)
    c.extend(qft_circuit(t_qubits, inverse=True).gates, offset=n_state)
    return c


def canonical_qae_distribution(problem, t_qubits):
    """Exact outcome probabilities over the counting integer y."""
    circuit = canonical_qae_circuit(problem, t_qubits)
    state = run_circuit(new_state(circuit.n_qubits), circuit)
    block = 1 << (problem.n_qubits + 1)
    return np.sum(np.abs(state.amps.reshape(1 << t_qubits, block)) ** 2, axis=1)


def canonical_qae(problem, t_qubits, rng):
    """Single QPE measurement; a_hat = sin^2(pi y / 2^t)."""
    probs = canonical_qae_distribution(problem, t_qubits)
    y = int(rng.choice(probs.size, p=probs / probs.sum()))
    a_hat = math.sin(math.pi * y / (1 << t_qubits)) ** 2
    half_width = math.pi * 2.0 ** -t_qubits * (
        2.0 * math.sqrt(a_hat) + math.pi * 2.0 ** -t_qubits)
    q = 2 * ((1 << t_qubits) - 1) + 1
    return AmplitudeEstimate(a_hat,
                             max(0.0, a_hat - half_width),
                             min(1.0, a_hat + half_width),
                             q)


# -- Grover search demo -------------------------------------------------------

def grover_iterations(n_qubits):
    theta = math.asin(2.0 ** (-n_qubits / 2))
    return int(round(math.pi / (4 * theta) - 0.5))


def _marked_flip(marked, n_qubits):
    ones = tuple(q for q in range(n_qubits) if (marked >> q) & 1)
    zeros = tuple(q for q in range(n_qubits) if not (marked >> q) & 1)
    return Gate("flip0", zeros, ones)


def grover_circuit(marked, n_qubits):
    """Uniform-superposition A followed by the tuned number of iterates."""
    if not 0 <= marked < (1 << n_qubits):
        raise ValueError(f"marked index {marked} out of range")
    a = Circuit(n_qubits)
    for q in range(n_qubits):
        a.h(q)
    iters = grover_iterations(n_qubits)
    c = Circuit(n_qubits)
    c.extend(a.gates)
    for _ in range(iters):
        c.append(_marked_flip(marked, n_qubits))
        c.extend(a.inverse().gates)
        c.flip_about_zero(tuple(range(n_qubits)))
        c.extend(a.gates)
    return c, iters


def grover_search(marked, n_qubits, rng):
    """Run the search circuit once and measure; returns the found index."""
    if not 2 <= n_qubits <= 12:
        raise CapacityError("grover_search supports 2 <= n_qubits <= 12")
    circuit, _ = grover_circuit(marked, n_qubits)
    state = run_circuit(new_state(n_qubits), circuit)
    probs = state.probabilities()
    return int(rng.choice(probs.size, p=probs / probs.sum()))
