"""Gate definitions for the statevector simulator.

Qubit 0 is the least-significant bit of the basis index; this convention
is fixed here and relied on everywhere else.  A gate is a base unitary on
its target qubits plus optional control qubits: positive controls require
bit 1, negative controls bit 0.  Multi-qubit classics are expressed
through controls (CNOT is X with one control, Toffoli with two).
"""

import math
from dataclasses import dataclass, field

import numpy as np

SQ2 = 1.0 / math.sqrt(2.0)

_H = np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class Gate:
    kind: str
    targets: tuple
    controls: tuple = ()
    neg_controls: tuple = ()
    angle: float = 0.0
    matrix: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        seen = set()
        for q in (*self.targets, *self.controls, *self.neg_controls):
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if q in seen:
                raise ValueError(f"qubit {q} addressed twice by one gate")
            seen.add(q)
        if not seen:
            raise ValueError("gate addresses no qubits")
        if self.kind in ("ry", "rz", "phase") and not math.isfinite(self.angle):
            raise ValueError("non-finite rotation angle")
        if self.kind == "custom":
            m = self.matrix
            if m is None or m.shape != (1 << len(self.targets),) * 2:
                raise ValueError("custom matrix shape must match target count")
            if len(self.targets) > 3:
                raise ValueError("custom gates support at most 3 targets")
            if not np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-12):
                raise ValueError("custom matrix is not unitary")

    def base_matrix(self):
        """Unitary on the target qubits, controls excluded."""
        k = self.kind
        if k == "h":
            return _H
        if k == "x":
            return _X
        if k == "t":
            return np.diag([1.0, np.exp(1j * math.pi / 4)])
        if k == "phase":
            return np.diag([1.0, np.exp(1j * self.angle)])
        if k == "ry":
            c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if k == "rz":
            return np.diag([np.exp(-0.5j * self.angle), np.exp(0.5j * self.angle)])
        if k == "custom":
            return self.matrix
        if k == "flip0":
            d = 1 << len(self.targets)
            m = np.eye(d, dtype=complex)
            m[0, 0] = -1.0
            return m
        raise ValueError(f"unknown gate kind {k!r}")

    def inverse(self):
        k = self.kind
        if k in ("h", "x", "flip0"):
            return self
        if k == "t":
            return Gate("phase", self.targets, self.controls, self.neg_controls,
                        -math.pi / 4)
        if k in ("ry", "rz", "phase"):
            return Gate(k, self.targets, self.controls, self.neg_controls,
                        -self.angle)
        if k == "custom":
            return Gate(k, self.targets, self.controls, self.neg_controls,
                        matrix=np.ascontiguousarray(self.matrix.conj().T))
        raise ValueError(f"unknown gate kind {k!r}")

    def controlled(self, qubit):
        """The same gate with one more positive control."""
        return Gate(self.kind, self.targets, self.controls + (qubit,),
                    self.neg_controls, self.angle, self.matrix)

    @property
    def is_rotation(self):
        return self.kind in ("ry", "rz", "phase")

    def max_qubit(self):
        return max(self.targets + self.controls + self.neg_controls)


def h(q):
    return Gate("h", (q,))


def x(q):
    return Gate("x", (q,))


def t(q):
    return Gate("t", (q,))


def phase(angle, q):
    return Gate("phase", (q,), angle=angle)


def ry(angle, q):
    return Gate("ry", (q,), angle=angle)


def rz(angle, q):
    return Gate("rz", (q,), angle=angle)


def cnot(control, target):
    return Gate("x", (target,), (control,))


def toffoli(control_a, control_b, target):
    return Gate("x", (target,), (control_a, control_b))


def cry(angle, control, target):
    return Gate("ry", (target,), (control,), angle=angle)


def mcry(angle, controls, target, neg_controls=()):
    return Gate("ry", (target,), tuple(controls), tuple(neg_controls), angle)


def flip_about_zero(qubits):
    """Flip the sign of the component where every listed qubit is |0>."""
    return Gate("flip0", tuple(qubits))


def custom(matrix, qubits):
    """Explicit unitary on up to 3 qubits; qubits[j] is bit j of the matrix index."""
    m = np.ascontiguousarray(np.asarray(matrix, dtype=complex))
    return Gate("custom", tuple(qubits), matrix=m)
