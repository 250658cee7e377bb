"""Dense statevector simulator: the brute-force reference for all tests.

Basis ordering: qubit 0 is the most significant bit of the state index,
matching the text form of basis strings (leftmost character = qubit 0).
Gates are applied with stride loops / index arithmetic; no 2^n x 2^n
matrices are ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliOperator

MAX_QUBITS = 14

_SQ2 = 1 / np.sqrt(2)
_GATES_1Q = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "TDG": np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
}


@dataclass
class DenseState:
    n: int
    amplitudes: np.ndarray


def zero_state(n: int) -> np.ndarray:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"dense simulation limited to 1..{MAX_QUBITS} qubits")
    vec = np.zeros(1 << n, dtype=complex)
    vec[0] = 1.0
    return vec


def _qubit_to_index_mask(n: int, mask: int) -> int:
    """Map a qubit-order bitmask (bit q = qubit q) to index-bit order."""
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def apply_1q(vec: np.ndarray, n: int, u: np.ndarray, q: int) -> np.ndarray:
    view = vec.reshape(1 << q, 2, 1 << (n - 1 - q))
    return np.einsum("ab,ibj->iaj", u, view).reshape(-1)


def apply_2q(vec: np.ndarray, n: int, u: np.ndarray, q1: int, q2: int) -> np.ndarray:
    view = vec.reshape((2,) * n)
    moved = np.moveaxis(view, (q1, q2), (0, 1))
    out = np.tensordot(u.reshape(2, 2, 2, 2), moved, axes=([2, 3], [0, 1]))
    return np.moveaxis(out, (0, 1), (q1, q2)).reshape(-1)


def apply_pauli(vec: np.ndarray, n: int, p: PauliOperator) -> np.ndarray:
    """P|psi> via index arithmetic: P|b> = i^phase (-1)^{z.b} |b ^ x>."""
    xi = _qubit_to_index_mask(n, p.x)
    zi = _qubit_to_index_mask(n, p.z)
    idx = np.arange(1 << n)
    signs = (1j ** p.phase) * np.where(
        (np.bitwise_count(idx & zi) & 1).astype(bool), -1.0, 1.0
    )
    return (signs * vec)[idx ^ xi]


def apply_exp_pauli(vec: np.ndarray, n: int, p: PauliOperator, theta_pi: Fraction | float) -> np.ndarray:
    """exp(i theta P)|psi> with theta = theta_pi * pi."""
    if not p.is_hermitian():
        raise ValueError("exponential requires a Hermitian Pauli")
    theta = float(theta_pi) * np.pi
    return np.cos(theta) * vec + 1j * np.sin(theta) * apply_pauli(vec, n, p)


def apply_gate(vec: np.ndarray, n: int, g: Gate) -> np.ndarray:
    if g.kind == "EXP":
        return apply_exp_pauli(vec, n, g.pauli, g.theta)
    if g.kind in ("CX", "CZ"):
        if g.kind == "CX":
            u = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
        else:
            u = np.diag([1, 1, 1, -1]).astype(complex)
        return apply_2q(vec, n, u, g.qubits[0], g.qubits[1])
    return apply_1q(vec, n, _GATES_1Q[g.kind], g.qubits[0])


def run(c: Circuit) -> DenseState:
    vec = zero_state(c.n)
    for g in c.gates:
        vec = apply_gate(vec, c.n, g)
    if c.global_phase != 0:
        vec = vec * np.exp(1j * np.pi * float(c.global_phase))
    return DenseState(c.n, vec)


def fidelity_distance(a: DenseState, b: DenseState) -> float:
    """Euclidean 2-norm of the difference vector (phase sensitive)."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))
