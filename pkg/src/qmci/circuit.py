"""Ordered gate sequences with composition, inversion, and remapping."""

from . import gates as g


class Circuit:
    """A gate list on a fixed qubit count.  Builder methods chain."""

    def __init__(self, n_qubits, gate_list=()):
        if n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        self.n_qubits = n_qubits
        self.gates = []
        for gate in gate_list:
            self.append(gate)

    def append(self, gate):
        if gate.max_qubit() >= self.n_qubits:
            raise ValueError(
                f"gate addresses qubit {gate.max_qubit()} "
                f"on a {self.n_qubits}-qubit circuit")
        self.gates.append(gate)
        return self

    def extend(self, gate_list, offset=0):
        """Append gates, optionally shifted to higher qubit indices."""
        for gate in gate_list:
            if offset:
                gate = _shift(gate, offset)
            self.append(gate)
        return self

    # -- builders -----------------------------------------------------------

    def h(self, q):
        return self.append(g.h(q))

    def x(self, q):
        return self.append(g.x(q))

    def t(self, q):
        return self.append(g.t(q))

    def phase(self, angle, q):
        return self.append(g.phase(angle, q))

    def ry(self, angle, q):
        return self.append(g.ry(angle, q))

    def rz(self, angle, q):
        return self.append(g.rz(angle, q))

    def cnot(self, control, target):
        return self.append(g.cnot(control, target))

    def toffoli(self, a, b, target):
        return self.append(g.toffoli(a, b, target))

    def cry(self, angle, control, target):
        return self.append(g.cry(angle, control, target))

    def mcry(self, angle, controls, target, neg_controls=()):
        return self.append(g.mcry(angle, controls, target, neg_controls))

    def flip_about_zero(self, qubits):
        return self.append(g.flip_about_zero(qubits))

    def custom(self, matrix, qubits):
        return self.append(g.custom(matrix, qubits))

    def swap(self, a, b):
        """Swap two qubits (three CNOTs)."""
        return self.cnot(a, b).cnot(b, a).cnot(a, b)

    # -- transforms ---------------------------------------------------------

    def inverse(self):
        inv = Circuit(self.n_qubits)
        for gate in reversed(self.gates):
            inv.append(gate.inverse())
        return inv

    def controlled(self, qubit):
        """Every gate gains `qubit` as an extra positive control."""
        out = Circuit(max(self.n_qubits, qubit + 1))
        for gate in self.gates:
            out.append(gate.controlled(qubit))
        return out

    def __len__(self):
        return len(self.gates)

    def __repr__(self):
        return f"Circuit(n_qubits={self.n_qubits}, gates={len(self.gates)})"


def _shift(gate, offset):
    return g.Gate(gate.kind,
                  tuple(q + offset for q in gate.targets),
                  tuple(q + offset for q in gate.controls),
                  tuple(q + offset for q in gate.neg_controls),
                  gate.angle, gate.matrix)
