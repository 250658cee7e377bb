"""Exact arithmetic on n-qubit Pauli operators in binary-symplectic form.

An operator is stored as a pair of n-bit integers (x, z) plus a phase
exponent mod 4, encoding

    P = i^phase * X[x] * Z[z],

where bit q of x (or z) puts an X (or Z) factor on qubit q, i.e.
X[x] = X^{x_0} (x) X^{x_1} (x) ...  All bit-vectors are packed into plain
Python integers so that row operations are word-parallel XOR/AND sweeps.

The Hermitian representative of a bit pattern is i^{|x&z|} X[x] Z[z]
(each overlapping X/Z pair contributes a Y = i XZ), so P is Hermitian
iff phase == |x&z| (mod 2).

Text form: an optional leading sign token among {+1, -1, +i, -i},
followed by one letter per qubit from IXYZ, qubit 0 first
(e.g. "XIZ" is X on qubit 0 and Z on qubit 2; "-1 XZ" is -(X(x)Z)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_SIGN_TOKENS = {"+1": 0, "+i": 1, "-1": 2, "-i": 3}
_TOKEN_OF = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}

_SINGLE = {
    "I": (0, 0),
    "X": (1, 0),
    "Y": (1, 1),  # Y = i XZ; the i is supplied by the Hermitian phase
    "Z": (0, 1),
}

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, slots=True)
class PauliOperator:
    """An n-qubit Pauli i^phase * X[x] * Z[z]."""

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("qubit count must be >= 1")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("x/z bits outside qubit range")
        if not 0 <= self.phase <= 3:
            object.__setattr__(self, "phase", self.phase & 3)

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n, 0, 0, 0)

    @classmethod
    def hermitian_from_xz(cls, n: int, x: int, z: int, negate: bool = False) -> PauliOperator:
        """Hermitian Pauli i^{|x&z|} X[x] Z[z], optionally times -1."""
        ph = ((x & z).bit_count() + (2 if negate else 0)) & 3
        return cls(n, x, z, ph)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliOperator:
        """X/Y/Z on one qubit of an n-qubit register."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _SINGLE[kind]
        return cls.hermitian_from_xz(n, xb << qubit, zb << qubit)

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse the text form described in the module docstring."""
        text = text.strip()
        phase = 0
        for tok, ph in _SIGN_TOKENS.items():
            if text.startswith(tok):
                phase = ph
                text = text[len(tok):].strip()
                break
        if not text:
            raise ValueError("empty Pauli string")
        x = z = 0
        for q, ch in enumerate(text):
            if ch not in _SINGLE:
                raise ValueError(f"invalid Pauli letter {ch!r}")
            xb, zb = _SINGLE[ch]
            x |= xb << q
            z |= zb << q
        n = len(text)
        base = cls.hermitian_from_xz(n, x, z)
        return cls(n, x, z, (base.phase + phase) & 3)

    # -- queries ----------------------------------------------------------

    @property
    def sign_exponent(self) -> int:
        """Exponent k with P = i^k times the Hermitian representative."""
        return (self.phase - (self.x & self.z).bit_count()) & 3

    def is_hermitian(self) -> bool:
        return self.sign_exponent % 2 == 0

    def is_identity_support(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def negate(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, (self.phase + 2) & 3)

    def __str__(self) -> str:
        return self.to_string()

    def to_string(self, always_sign: bool = False) -> str:
        body = "".join(
            ("I", "X", "Z", "Y")[((self.x >> q) & 1) + 2 * ((self.z >> q) & 1)]
            for q in range(self.n)
        )
        k = self.sign_exponent
        if k or always_sign:
            return f"{_TOKEN_OF[k]} {body}"
        return body

    def to_matrix(self) -> np.ndarray:
        """Dense matrix (qubit 0 is the most significant tensor factor)."""
        if self.n > 12:
            raise ValueError("matrix form limited to n <= 12")
        m = np.array([[1]], dtype=complex)
        for q in range(self.n):
            xb = (self.x >> q) & 1
            zb = (self.z >> q) & 1
            factor = _MATS["X"] @ _MATS["Z"] if xb and zb else _MATS["X" if xb else ("Z" if zb else "I")]
            m = np.kron(m, factor)
        return (1j ** self.phase) * m


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Operator product p*q with the accumulated phase.

    Moving Z[z_p] across X[x_q] contributes (-1)^{|z_p & x_q|}.
    """
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n}")
    phase = (p.phase + q.phase + 2 * (p.z & q.x).bit_count()) & 3
    return PauliOperator(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    """True iff the symplectic inner product x_p.z_q + x_q.z_p vanishes mod 2."""
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n}")
    return (((p.x & q.z).bit_count() + (q.x & p.z).bit_count()) & 1) == 0


def binary_rank(paulis: Sequence[PauliOperator]) -> int:
    """GF(2) rank of the k x 2n matrix whose rows are the (x, z) vectors."""
    if not paulis:
        return 0
    n = paulis[0].n
    rows = []
    for p in paulis:
        if p.n != n:
            raise ValueError("mixed qubit counts")
        rows.append(p.x | (p.z << n))
    rank = 0
    for row in rows:
        for pivot in rows[:rank]:
            low = pivot & -pivot
            if row & low:
                row ^= pivot
        if row:
            # keep reduced pivot rows sorted by lowest set bit for determinism
            rows[rank] = row
            rank += 1
    return rank


def conjugate_by_quarter_turn(p: PauliOperator, q: PauliOperator, turns: int = 1) -> PauliOperator:
    """exp(i k pi/4 P) Q exp(-i k pi/4 P) for k = turns.

    Fixed points commute with P; otherwise one turn maps Q to i P Q.
    The map has period 4 in the number of turns.
    """
    if commutes(p, q):
        return q
    turns &= 3
    out = q
    for _ in range(turns):
        prod = multiply(p, out)
        out = PauliOperator(prod.n, prod.x, prod.z, (prod.phase + 1) & 3)
    return out
