"""Quantum Fourier transform circuit.

With qubit 0 as the least-significant index bit, the forward transform
maps amplitude vectors by b_k = (1/sqrt(N)) sum_x exp(+2*pi*i*k*x/N) a_x,
i.e. numpy.fft.ifft scaled by sqrt(N).
"""

import math

from .circuit import Circuit
from .gates import Gate


def qft_circuit(n_qubits, inverse=False):
    """H + controlled-phase ladder with final qubit-order reversal."""
    if n_qubits < 1:
        raise ValueError("qft needs at least one qubit")
    c = Circuit(n_qubits)
    for j in reversed(range(n_qubits)):
        c.h(j)
        for m in range(j):
            c.append(Gate("phase", (j,), (m,), angle=math.pi / (1 << (j - m))))
    for i in range(n_qubits // 2):
        c.swap(i, n_qubits - 1 - i)
    return c.inverse() if inverse else c
