"""Exact statevector simulation.

States are vectors of 2^n complex amplitudes mutated in place by gate
application; measurement follows the Born rule through an injected
numpy Generator.  Noise, when requested, is realized as stochastic Pauli
trajectories: after each gate a uniformly random Pauli hits a uniformly
random qubit with probability p_error, keeping memory at 2^n.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapacityError

MAX_QUBITS = 26

_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass
class QuantumState:
    n_qubits: int
    amps: np.ndarray

    def copy(self):
        return QuantumState(self.n_qubits, self.amps.copy())

    def probabilities(self):
        return np.abs(self.amps) ** 2

    def norm_error(self):
        return abs(float(np.sum(self.probabilities())) - 1.0)


def new_state(n_qubits):
    """|0...0> on n_qubits; capacity-bounded so memory stays at desk scale."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise CapacityError(
            f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return QuantumState(n_qubits, amps)


def _mask(qubits):
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def apply_gate(state, gate):
    """Apply one gate in place and return the state."""
    n = state.n_qubits
    if gate.max_qubit() >= n:
        raise ValueError(
            f"gate addresses qubit {gate.max_qubit()} on {n}-qubit state")
    pos = _mask(gate.controls)
    neg = _mask(gate.neg_controls)
    if gate.kind == "flip0":
        flip_mask = _mask(gate.targets) | pos | neg
        _kernels.apply_sign_flip(state.amps, n, flip_mask, pos)
    elif len(gate.targets) == 1:
        u = gate.base_matrix()
        _kernels.apply_2x2(state.amps, n, gate.targets[0],
                           u[0, 0], u[0, 1], u[1, 0], u[1, 1], pos, neg)
    else:
        u = np.ascontiguousarray(gate.base_matrix())
        _kernels.apply_kq(state.amps, n, gate.targets, u, pos, neg)
    return state


def _inject_pauli(state, rng):
    qubit = int(rng.integers(state.n_qubits))
    u = _PAULIS[int(rng.integers(3))]
    _kernels.apply_2x2(state.amps, state.n_qubits, qubit,
                       u[0, 0], u[0, 1], u[1, 0], u[1, 1], 0, 0)


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing trajectory noise: per-gate Pauli injection probability."""

    p_error: float

    def __post_init__(self):
        if not 0.0 <= self.p_error <= 1.0:
            raise ValueError(f"p_error must lie in [0, 1], got {self.p_error}")


def run_circuit(state, circuit, noise=None, rng=None):
    """Apply a circuit's gates in order, with optional Pauli injections."""
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(
            f"circuit on {circuit.n_qubits} qubits, state on {state.n_qubits}")
    if noise is not None and noise.p_error > 0 and rng is None:
        raise ValueError("noisy execution needs an rng")
    for gate in circuit.gates:
        apply_gate(state, gate)
        if noise is not None and noise.p_error > 0:
            if rng.random() < noise.p_error:
                _inject_pauli(state, rng)
    return state


def probability_of(state, basis_index):
    if not 0 <= basis_index < state.amps.size:
        raise ValueError(f"basis index {basis_index} out of range")
    return float(abs(state.amps[basis_index]) ** 2)


def bitstring(index, n_qubits):
    """Index rendered qubit (n-1) ... qubit 0 left to right."""
    return format(index, f"0{n_qubits}b")


def measure_all(state, shots, rng):
    """Histogram of `shots` i.i.d. Born-rule draws over full bitstrings."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    counts = rng.multinomial(shots, probs)
    return {bitstring(i, state.n_qubits): int(c)
            for i, c in enumerate(counts) if c}


def measure_one(state, qubit, rng):
    """Measure one qubit; collapse and renormalize in place."""
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range")
    idx = np.arange(state.amps.size)
    one_branch = (idx >> qubit) & 1 == 1
    p1 = float(np.sum(np.abs(state.amps[one_branch]) ** 2))
    bit = 1 if rng.random() < p1 else 0
    keep = one_branch if bit else ~one_branch
    state.amps[~keep] = 0.0
    state.amps /= math.sqrt(p1 if bit else 1.0 - p1)
    return bit, state


def dump_state(state):
    """Debug text form: one line per index, 17 significant digits."""
    lines = []
    for i, a in enumerate(state.amps):
        lines.append("%d %s %.17g %.17g %.17g"
                     % (i, bitstring(i, state.n_qubits),
                        a.real, a.imag, abs(a) ** 2))
    return "\n".join(lines)
