"""Function-encoding circuits on an appended qubit.

Two constructions: a table-lookup oracle (one value-controlled rotation
per grid point, exponentially deep, the correctness baseline) and a
shallow per-harmonic oracle of n+1 rotations whose appended qubit sees
the total angle phase + omega * x on branch x.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .gates import cry, mcry, ry


@dataclass
class BoundedFunction:
    """Grid values of an integrand with the affine map into [0, 1]."""

    raw_values: np.ndarray
    f_min: float
    f_max: float
    normalized: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.normalized is None:
            span = self.f_max - self.f_min
            if span > 0:
                self.normalized = (self.raw_values - self.f_min) / span
            else:
                # constant function: expectation is f_min exactly
                self.normalized = np.zeros_like(self.raw_values)
        if np.any(self.normalized < -1e-15) or np.any(self.normalized > 1 + 1e-15):
            raise ValueError("normalized values escape [0, 1]; check bounds")
        self.normalized = np.clip(self.normalized, 0.0, 1.0)

    def denormalize(self, normalized_expectation):
        return self.f_min + (self.f_max - self.f_min) * normalized_expectation


def normalize_function(raw_values, f_min=None, f_max=None):
    """Affine normalization into [0, 1]; bounds default to observed extrema."""
    raw = np.asarray(raw_values, dtype=float)
    if raw.size == 0 or not np.all(np.isfinite(raw)):
        raise ValueError("integrand values must be finite and non-empty")
    lo = float(raw.min()) if f_min is None else float(f_min)
    hi = float(raw.max()) if f_max is None else float(f_max)
    if lo > raw.min() or hi < raw.max():
        raise ValueError("explicit bounds must contain the observed values")
    return BoundedFunction(raw, lo, hi)


def build_table_oracle(f, n_qubits):
    """One multi-controlled Ry per basis state, angle 2*arcsin(sqrt(f(x)))."""
    if f.normalized.size != 1 << n_qubits:
        raise ValueError("function table length must be 2^n_qubits")
    c = Circuit(n_qubits + 1)
    for xval in range(1 << n_qubits):
        angle = 2.0 * math.asin(math.sqrt(float(f.normalized[xval])))
        ones = tuple(q for q in range(n_qubits) if (xval >> q) & 1)
        zeros = tuple(q for q in range(n_qubits) if not (xval >> q) & 1)
        c.append(mcry(angle, ones, n_qubits, zeros))
    return c


@dataclass(frozen=True)
class HarmonicSpec:
    """Angular frequency (radians per grid index) and phase of one harmonic."""

    omega: float
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and math.isfinite(self.phase)):
            raise ValueError("harmonic parameters must be finite")


def build_harmonic_oracle(h, n_qubits):
    """n+1 rotations giving P(appended=1) = sum_x p(x) sin^2((omega*x+phase)/2)."""
    c = Circuit(n_qubits + 1)
    c.append(ry(h.phase, n_qubits))
    for j in range(n_qubits):
        c.append(cry(h.omega * (1 << j), j, n_qubits))
    return c


# -- named integrands -------------------------------------------------------

def identity_fn():
    return lambda x: np.asarray(x, dtype=float)


def square_fn():
    return lambda x: np.asarray(x, dtype=float) ** 2


def relu_fn(threshold=0.0):
    return lambda x: np.maximum(0.0, np.asarray(x, dtype=float) - threshold)


def indicator_fn(lo, hi):
    return lambda x: ((np.asarray(x) >= lo) & (np.asarray(x) <= hi)).astype(float)


INTEGRANDS = {
    "identity": identity_fn,
    "square": square_fn,
    "relu": relu_fn,
    "indicator": indicator_fn,
}


def tabulate_integrand(fn, dist, f_min=None, f_max=None):
    """Evaluate a callable on a distribution's grid and normalize."""
    return normalize_function(fn(dist.grid()), f_min, f_max)
