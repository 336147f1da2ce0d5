"""Quantum circuit realising the optimal cloner on three qubits.

The input state enters on qubit 1 with qubits 2 and 3 prepared in |0>.  The
gate sequence is a controlled y-rotation by 2(a- - a+) from qubit 1 onto the
ancilla, an unconditional y-rotation of the ancilla by 2 a+, a controlled
Hadamard, a CNOT cascade (1->3, 2->1, 3->2), and a final NOT on the ancilla.
The NOT only flips the ancilla's reference basis - the clones' reduced
states are untouched - but it is required for the circuit columns to equal
the cloning isometry exactly rather than up to that relabelling.

When a+ = a- the controlled rotation is the identity and the remaining
gates form the fixed mirror-symmetric cloning circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .optimal import ClonerParams

__all__ = [
    "Gate", "Circuit", "build_circuit", "gate_matrix", "circuit_unitary",
    "hadamard_conjugator", "ch_decomposed",
]

_SQRT2 = math.sqrt(2.0)
_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2

# Real symmetric involution A with A X A = H.
_A = np.array([[1.0, 1.0 + _SQRT2], [1.0 + _SQRT2, -1.0]]) / math.sqrt(4 + 2 * _SQRT2)

KINDS = ("Ry", "CRy", "CNOT", "CH", "A", "X")


@dataclass(frozen=True)
class Gate:
    """One gate on the 3-qubit register; qubit indices are 1-based."""

    kind: str
    target: int
    control: int | None = None
    param: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown gate kind {self.kind!r}")
        for q in (self.target, self.control):
            if q is not None and q not in (1, 2, 3):
                raise DomainError(f"qubit index {q} outside 1..3")
        if self.control == self.target:
            raise DomainError("control and target must differ")
        needs_control = self.kind in ("CRy", "CNOT", "CH")
        if needs_control and self.control is None:
            raise DomainError(f"{self.kind} requires a control qubit")
        if not needs_control and self.control is not None:
            raise DomainError(f"{self.kind} takes no control qubit")
        needs_param = self.kind in ("Ry", "CRy")
        if needs_param and self.param is None:
            raise DomainError(f"{self.kind} requires an angle")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": [] if self.param is None else [self.param],
            "control": self.control,
            "target": self.target,
        }


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list; gates[0] is applied first."""

    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def as_dicts(self) -> list[dict]:
        return [g.as_dict() for g in self.gates]


def _ry(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _embed_single(u: np.ndarray, target: int) -> np.ndarray:
    ops = [_I2, _I2, _I2]
    ops[target - 1] = u
    return np.kron(np.kron(ops[0], ops[1]), ops[2])


def _embed_controlled(u: np.ndarray, control: int, target: int) -> np.ndarray:
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    idle = [_I2, _I2, _I2]
    idle[control - 1] = p0
    act = [_I2, _I2, _I2]
    act[control - 1] = p1
    act[target - 1] = u
    return (np.kron(np.kron(idle[0], idle[1]), idle[2])
            + np.kron(np.kron(act[0], act[1]), act[2]))


def gate_matrix(g: Gate) -> np.ndarray:
    """8x8 unitary of the gate embedded on its qubits."""
    if g.kind == "Ry":
        return _embed_single(_ry(g.param), g.target)
    if g.kind == "CRy":
        return _embed_controlled(_ry(g.param), g.control, g.target)
    if g.kind == "CNOT":
        return _embed_controlled(_X, g.control, g.target)
    if g.kind == "CH":
        return _embed_controlled(_H, g.control, g.target)
    if g.kind == "A":
        return _embed_single(_A.astype(complex), g.target)
    if g.kind == "X":
        return _embed_single(_X, g.target)
    raise DomainError(f"unknown gate kind {g.kind!r}")


def hadamard_conjugator() -> np.ndarray:
    """The involution A (A^2 = 1) with A X A = H."""
    return _A.copy()


def ch_decomposed(control: int, target: int) -> np.ndarray:
    """Controlled-Hadamard built as A . CNOT . A on the target qubit."""
    a = gate_matrix(Gate("A", target))
    cnot = gate_matrix(Gate("CNOT", target, control=control))
    return a @ cnot @ a


def build_circuit(p: ClonerParams) -> Circuit:
    """Gate realisation of the cloner, in application order."""
    phi = 2 * (p.alpha_minus - p.alpha_plus)
    omega = 2 * p.alpha_plus
    return Circuit(gates=(
        Gate("CRy", 3, control=1, param=phi),
        Gate("Ry", 3, param=omega),
        Gate("CH", 2, control=3),
        Gate("CNOT", 3, control=1),
        Gate("CNOT", 1, control=2),
        Gate("CNOT", 2, control=3),
        Gate("X", 3),
    ))


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Ordered product of the gate matrices (first gate rightmost)."""
    u = np.eye(8, dtype=complex)
    for g in c.gates:
        u = gate_matrix(g) @ u
    return u
