"""Discretized distributions and state-preparation circuit synthesis.

A parametric density is sampled at the 2^n grid midpoints
x_phys(i) = x_lo + (i + 0.5) * (x_hi - x_lo) / 2^n and renormalized.
The preparation circuit is synthesized by binary bisection of probability
mass: the node splitting a block rotates the next qubit by
2*arccos(sqrt(left_mass / node_mass)), controlled on the already-fixed
high bits, so |0...0> maps to sum_x sqrt(p(x)) |x> with real non-negative
amplitudes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .gates import mcry
from .sim import new_state, run_circuit


@dataclass
class DiscretizedDistribution:
    n_qubits: int
    x_lo: float
    x_hi: float
    probs: np.ndarray
    source: str

    def __post_init__(self):
        if self.x_lo >= self.x_hi:
            raise ValueError("x_lo must be below x_hi")
        if self.probs.size != 1 << self.n_qubits:
            raise ValueError("probability vector length must be 2^n_qubits")
        if np.any(self.probs < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(float(self.probs.sum()) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")

    @property
    def step(self):
        return (self.x_hi - self.x_lo) / self.probs.size

    def grid(self):
        """Physical coordinates of the grid midpoints."""
        return self.x_lo + (np.arange(self.probs.size) + 0.5) * self.step


def discretize(family, n_qubits, x_lo, x_hi, **params):
    """Midpoint-sampled, renormalized grid probabilities for a family."""
    if x_lo >= x_hi:
        raise ValueError("x_lo must be below x_hi")
    xs = x_lo + (np.arange(1 << n_qubits) + 0.5) * (x_hi - x_lo) / (1 << n_qubits)
    if family == "uniform":
        dens = np.ones_like(xs)
    elif family == "gaussian":
        mu, sigma = params["mu"], params["sigma"]
        if sigma <= 0:
            raise ValueError("gaussian sigma must be positive")
        dens = np.exp(-0.5 * ((xs - mu) / sigma) ** 2)
    elif family == "lognormal":
        mu, sigma = params["mu"], params["sigma"]
        if sigma <= 0:
            raise ValueError("lognormal sigma must be positive")
        if x_lo < 0:
            raise ValueError("lognormal support requires x_lo >= 0")
        dens = np.exp(-0.5 * ((np.log(xs) - mu) / sigma) ** 2) / xs
    else:
        raise ValueError(f"unknown distribution family {family!r}")
    total = dens.sum()
    if not np.isfinite(total) or total <= 0:
        raise ValueError("density vanishes or diverges on the grid")
    return DiscretizedDistribution(n_qubits, x_lo, x_hi, dens / total, family)


def explicit_distribution(probs, x_lo=0.0, x_hi=None):
    probs = np.asarray(probs, dtype=float)
    n = int(round(math.log2(probs.size)))
    if 1 << n != probs.size:
        raise ValueError("explicit probabilities need a power-of-two length")
    if x_hi is None:
        x_hi = float(probs.size)
    return DiscretizedDistribution(n, x_lo, x_hi, probs / probs.sum(), "explicit")


@dataclass
class StatePrepCircuit:
    circuit: Circuit
    dist: DiscretizedDistribution


def synthesize_state_prep(dist):
    """Bisection-tree synthesis of P with |p> = sum sqrt(p(x)) |x>."""
    n = dist.n_qubits
    levels = [dist.probs]
    for _ in range(n):
        levels.append(levels[-1].reshape(-1, 2).sum(axis=1))
    levels.reverse()  # levels[d] holds the 2^d block masses at depth d

    circuit = Circuit(n)
    for depth in range(n):
        target = n - 1 - depth
        high = [n - 1 - b for b in range(depth)]  # qubits already fixed
        for v in range(1 << depth):
            node = levels[depth][v]
            if node <= 0.0:
                continue  # zero-mass subtree: angle 0 by convention
            left = levels[depth + 1][2 * v]
            ratio = min(1.0, max(0.0, left / node))
            angle = 2.0 * math.acos(math.sqrt(ratio))
            if angle == 0.0:
                continue
            ones = tuple(q for b, q in enumerate(high) if (v >> (depth - 1 - b)) & 1)
            zeros = tuple(q for b, q in enumerate(high) if not (v >> (depth - 1 - b)) & 1)
            circuit.append(mcry(angle, ones, target, zeros))
    return StatePrepCircuit(circuit, dist)


def verify_state_prep(sp):
    """Max absolute amplitude error of the circuit against sqrt(p)."""
    state = run_circuit(new_state(sp.dist.n_qubits), sp.circuit)
    return float(np.max(np.abs(state.amps - np.sqrt(sp.dist.probs))))
