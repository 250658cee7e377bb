"""Shared helpers: random circuit generators and dense replay utilities."""

from fractions import Fraction

import numpy as np

from stabsparse import oracle
from stabsparse.circuit import Circuit, Gate
from stabsparse.pauli import PauliOperator

CLIFFORD_1Q = ["H", "S", "SDG", "X", "Y", "Z"]
CLIFFORD_2Q = ["CX", "CZ"]


def _random_bits(rng, n):
    return int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)


def random_hermitian_pauli(rng, n, nontrivial=True, signed=True):
    while True:
        x = _random_bits(rng, n)
        z = _random_bits(rng, n)
        if nontrivial and x == 0 and z == 0:
            continue
        return PauliOperator.hermitian_from_xz(
            n, x, z, negate=bool(signed and rng.integers(0, 2))
        )


def random_clifford_gate(rng, n):
    if n >= 2 and rng.integers(0, 3) == 0:
        a, b = (int(q) for q in rng.choice(n, size=2, replace=False))
        return Gate(CLIFFORD_2Q[int(rng.integers(0, 2))], (a, b))
    kind = CLIFFORD_1Q[int(rng.integers(0, len(CLIFFORD_1Q)))]
    return Gate(kind, (int(rng.integers(0, n)),))


def random_clifford_exp_gate(rng, n):
    """exp(i theta P) gate with theta a multiple of pi/4 (a Clifford)."""
    p = random_hermitian_pauli(rng, n)
    k = int(rng.integers(1, 8))
    return Gate("EXP", (), pauli=p, theta=Fraction(k, 4))


def random_nonclifford_gate(rng, n):
    p = random_hermitian_pauli(rng, n)
    while True:
        num = int(rng.integers(-16, 17))
        den = int(rng.integers(1, 17))
        th = Fraction(num, den)
        if (th * 4).denominator != 1:
            return Gate("EXP", (), pauli=p, theta=th)


def random_mixed_circuit(rng, n, total, nonclifford):
    """Circuit with `total` gates, `nonclifford` of them non-Clifford."""
    kinds = ["C"] * (total - nonclifford) + ["N"] * nonclifford
    rng.shuffle(kinds)
    gates = []
    for k in kinds:
        if k == "N":
            if rng.integers(0, 2):
                gates.append(Gate("T" if rng.integers(0, 2) else "TDG", (int(rng.integers(0, n)),)))
            else:
                gates.append(random_nonclifford_gate(rng, n))
        else:
            if rng.integers(0, 5) == 0:
                gates.append(random_clifford_exp_gate(rng, n))
            else:
                gates.append(random_clifford_gate(rng, n))
    return Circuit(n, tuple(gates))


def dense_of_recompiled(rc):
    """Dense statevector of a canonical form (stabilizer state + rotations)."""
    vec = rc.phi.statevector()
    for q, theta in rc.rotations:
        vec = oracle.apply_exp_pauli(vec, rc.n, q, theta)
    if rc.global_phase != 0:
        vec = vec * np.exp(1j * np.pi * float(rc.global_phase))
    return vec
