"""Phase-sensitive stabilizer state engine in CH form.

A state is stored as |phi> = omega * U_C * U_H |s> where

* U_C is a control-type Clifford (fixes |0..0>), described by its
  backward conjugation action on the Pauli generators:

      U_C^dag X_q U_C = i^{gamma[q]} X[F[q]] Z[M[q]]
      U_C^dag Z_q U_C = Z[G[q]]

  (forward images, when needed, are recovered by replaying gates);
* U_H applies Hadamards on the qubits of the mask ``v``;
* ``s`` is a computational basis string;
* ``omega`` is a tracked complex global factor.

All rows (F, G, M) and masks (v, s) are n-bit Python integers, bit q =
qubit q, so the O(n^2) updates run as word-parallel XOR/AND sweeps.

Update costs: S/SDG/CZ are O(1) row operations, CX is O(1) rows plus a
popcount, X/Y/Z are O(n), H and exp(i theta P) with theta an odd multiple
of pi/4 are O(n^2) via the superposition rewrite below.

Angle handling for exp(i theta P): theta must be an exact multiple of
pi/4, reduced mod 2 pi to k = (4 theta/pi) mod 8 eighth-turns:

    k = 0: identity.
    k even (k = 2j): apply (iP)^j to |s>: j=2 flips the sign of omega,
        j in {1, 3} applies the conjugated Pauli to the basis string.
    k odd: apply the k-1 even part first, then one pi/4 step, which
        rewrites 2^{-1/2}(|s> + i^delta |s'>) back into CH form; a
        basis-diagonal P degenerates to a phase e^{+-i pi/4} on omega.
"""

from __future__ import annotations

from fractions import Fraction
from math import sqrt

import numpy as np

from .pauli import PauliOperator

_SQRT_HALF = sqrt(0.5)
_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


class CHForm:
    __slots__ = ("n", "omega", "F", "G", "M", "gamma", "v", "s")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("qubit count must be >= 1")
        self.n = n
        self.omega: complex = 1.0 + 0j
        self.F = [1 << q for q in range(n)]
        self.G = [1 << q for q in range(n)]
        self.M = [0] * n
        self.gamma = [0] * n
        self.v = 0
        self.s = 0

    # -- basics ------------------------------------------------------------

    def copy(self) -> CHForm:
        new = CHForm.__new__(CHForm)
        new.n = self.n
        new.omega = self.omega
        new.F = self.F[:]
        new.G = self.G[:]
        new.M = self.M[:]
        new.gamma = self.gamma[:]
        new.v = self.v
        new.s = self.s
        return new

    def x_image(self, q: int) -> PauliOperator:
        """U_C^dag X_q U_C as a PauliOperator."""
        return PauliOperator(self.n, self.F[q], self.M[q], self.gamma[q])

    def z_image(self, q: int) -> PauliOperator:
        """U_C^dag Z_q U_C as a PauliOperator."""
        return PauliOperator(self.n, 0, self.G[q], 0)

    # -- gate updates (left multiplication) ---------------------------------

    def apply_clifford_gate(self, kind: str, *qubits: int) -> None:
        for q in qubits:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range")
        if kind == "H":
            self._apply_h(qubits[0])
        elif kind == "S":
            q = qubits[0]
            self.M[q] ^= self.G[q]
            self.gamma[q] = (self.gamma[q] - 1) & 3
        elif kind == "SDG":
            q = qubits[0]
            self.M[q] ^= self.G[q]
            self.gamma[q] = (self.gamma[q] + 1) & 3
        elif kind == "X":
            q = qubits[0]
            self._apply_pauli_lhs(1 << q, 0, 0)
        elif kind == "Y":
            q = qubits[0]
            self._apply_pauli_lhs(1 << q, 1 << q, 1)
        elif kind == "Z":
            q = qubits[0]
            self._apply_pauli_lhs(0, 1 << q, 0)
        elif kind == "CX":
            q, r = qubits
            if q == r:
                raise ValueError("CX qubits must be distinct")
            self.gamma[q] = (
                self.gamma[q] + self.gamma[r] + 2 * (self.M[q] & self.F[r]).bit_count()
            ) & 3
            self.G[r] ^= self.G[q]
            self.F[q] ^= self.F[r]
            self.M[q] ^= self.M[r]
        elif kind == "CZ":
            q, r = qubits
            if q == r:
                raise ValueError("CZ qubits must be distinct")
            self.M[q] ^= self.G[r]
            self.M[r] ^= self.G[q]
        else:
            raise ValueError(f"unknown Clifford gate {kind!r}")

    def apply_pauli_exponential(self, p: PauliOperator, theta: Fraction | int) -> None:
        """Apply exp(i theta pi P); theta is an exact multiple of 1/4."""
        if p.n != self.n:
            raise ValueError(f"dimension mismatch: {p.n} vs {self.n}")
        quarters = Fraction(theta) * 4
        if quarters.denominator != 1:
            raise ValueError(f"theta = {theta} pi is not a multiple of pi/4")
        if not p.is_hermitian():
            raise ValueError("exponential requires a Hermitian Pauli")
        self._apply_exp_raw(p.x, p.z, p.phase, int(quarters) & 7)

    def _apply_exp_raw(self, x: int, z: int, phase: int, k: int) -> None:
        """exp(i k pi/4 P) for Hermitian P = i^phase X[x] Z[z], k in 0..7."""
        if k == 0:
            return
        if x == 0 and z == 0:
            # P = +-identity (phase in {0, 2}): a pure global phase e^{+-i k pi/4}
            kk = k if phase == 0 else (-k) & 7
            self.omega *= complex(np.exp(1j * np.pi * kk / 4))
            return
        x2, z2, ph2 = self._conjugate_through(x, z, phase)
        j = k >> 1
        if j:
            if j == 2:
                self.omega *= -1
            else:
                val = _I_POW[(1 + ph2 + 2 * (z2 & self.s).bit_count()) & 3]
                self.omega *= val if j == 1 else -val
                self.s ^= x2
        if k & 1:
            if x2 == 0:
                eig = _I_POW[(ph2 + 2 * (z2 & self.s).bit_count()) & 3]
                self.omega *= (1 + 1j * eig.real) * _SQRT_HALF
            else:
                delta = (1 + ph2 + 2 * (z2 & self.s).bit_count()) & 3
                self._update_sum(self.s, self.s ^ x2, delta, 0)

    def _apply_pauli_lhs(self, x: int, z: int, phase: int) -> None:
        """Multiply the state by the Pauli i^phase X[x] Z[z]."""
        x2, z2, ph2 = self._conjugate_through(x, z, phase)
        self.omega *= _I_POW[(ph2 + 2 * (z2 & self.s).bit_count()) & 3]
        self.s ^= x2

    def _conjugate_through(self, x: int, z: int, phase: int) -> tuple[int, int, int]:
        """(U_C U_H)^dag P (U_C U_H) as raw (x, z, phase)."""
        F, G, M, gamma = self.F, self.G, self.M, self.gamma
        ax = az = 0
        ph = phase
        xx = x
        while xx:
            low = xx & -xx
            q = low.bit_length() - 1
            xx ^= low
            ph += gamma[q] + 2 * (az & F[q]).bit_count()
            ax ^= F[q]
            az ^= M[q]
        zz = z
        while zz:
            low = zz & -zz
            q = low.bit_length() - 1
            zz ^= low
            az ^= G[q]
        v = self.v
        ph += 2 * (ax & az & v).bit_count()
        nx = (ax & ~v) | (az & v)
        nz = (az & ~v) | (ax & v)
        return nx, nz, ph & 3

    # -- superposition rewrite (right multiplication helpers) ----------------

    def _s_right(self, q: int) -> None:
        e = 1 << q
        F, M, gamma = self.F, self.M, self.gamma
        for p in range(self.n):
            if F[p] & e:
                M[p] ^= e
                gamma[p] = (gamma[p] - 1) & 3

    def _cz_right(self, q: int, r: int) -> None:
        eq, er = 1 << q, 1 << r
        F, M, gamma = self.F, self.M, self.gamma
        for p in range(self.n):
            fp = F[p]
            if fp & er:
                M[p] ^= eq
            if fp & eq:
                M[p] ^= er
                if fp & er:
                    gamma[p] = (gamma[p] + 2) & 3

    def _cnot_right(self, q: int, r: int) -> None:
        eq, er = 1 << q, 1 << r
        F, G, M = self.F, self.G, self.M
        for p in range(self.n):
            if G[p] & er:
                G[p] ^= eq
            if F[p] & eq:
                F[p] ^= er
            if M[p] & er:
                M[p] ^= eq

    def _update_sum(self, t: int, u: int, delta: int, alpha: int) -> None:
        """Rewrite 2^{-1/2} (-1)^alpha U_H (|t> + i^delta |u>) into CH form.

        Right-multiplies U_C by CNOT/CZ/S gates chosen lowest differing
        bit first, then folds the remaining one-qubit superposition.
        """
        if t == u:
            self.omega *= ((-1) ** alpha) * (1 + _I_POW[delta & 3]) * _SQRT_HALF
            self.s = t
            return
        v = self.v
        diff = t ^ u
        set0 = diff & ~v
        set1 = diff & v
        if set0:
            low = set0 & -set0
            q = low.bit_length() - 1
            rest = set0 ^ low
            while rest:
                lo = rest & -rest
                rest ^= lo
                self._cnot_right(q, lo.bit_length() - 1)
            rest = set1
            while rest:
                lo = rest & -rest
                rest ^= lo
                self._cz_right(q, lo.bit_length() - 1)
        else:
            low = set1 & -set1
            q = low.bit_length() - 1
            rest = set1 ^ low
            while rest:
                lo = rest & -rest
                rest ^= lo
                self._cnot_right(lo.bit_length() - 1, q)
        e = 1 << q
        if t & e:
            y, w = u ^ e, u
        else:
            y, w = t, t ^ e
        omega_f, a_bit, b_bit, c_bit = _h_decompose(
            (self.v >> q) & 1, (y >> q) & 1, (w >> q) & 1, delta & 3
        )
        self.omega *= ((-1) ** alpha) * omega_f
        self.s = (y & ~e) | (e if c_bit else 0)
        if a_bit:
            self._s_right(q)
        self.v = (self.v & ~e) | (e if b_bit else 0)

    def _apply_h(self, q: int) -> None:
        v, s = self.v, self.s
        Fq, Gq, Mq = self.F[q], self.G[q], self.M[q]
        t = s ^ (Gq & v)
        u = s ^ (Fq & ~v) ^ (Mq & v)
        alpha = (Gq & ~v & s).bit_count() & 1
        beta = (
            (Mq & ~v & s).bit_count()
            + (Fq & v & Mq).bit_count()
            + (Fq & v & s).bit_count()
        ) & 1
        delta = (self.gamma[q] + 2 * (alpha + beta)) & 3
        self._update_sum(t, u, delta, alpha)

    # -- readout -------------------------------------------------------------

    def amplitude_bits(self, y: int) -> complex:
        """<y|phi> with y a qubit-order bitmask."""
        F, M, gamma = self.F, self.M, self.gamma
        mu = 0
        u = 0
        yy = y
        while yy:
            low = yy & -yy
            q = low.bit_length() - 1
            yy ^= low
            mu += gamma[q]
            u ^= F[q]
            mu += 2 * (M[q] & u).bit_count()
        v, s = self.v, self.s
        if (u ^ s) & ~v:
            return 0j
        return (
            self.omega
            * (2.0 ** (-0.5 * v.bit_count()))
            * _I_POW[mu & 3]
            * (-1.0 if (v & u & s).bit_count() & 1 else 1.0)
        )

    def amplitude(self, x: str) -> complex:
        """<x|phi> for a basis string, leftmost character = qubit 0."""
        if len(x) != self.n:
            raise ValueError(f"basis string length {len(x)} != n = {self.n}")
        mask = 0
        for q, ch in enumerate(x):
            if ch == "1":
                mask |= 1 << q
            elif ch != "0":
                raise ValueError(f"invalid basis character {ch!r}")
        return self.amplitude_bits(mask)

    def statevector(self) -> np.ndarray:
        """Dense vector indexed with qubit 0 as the most significant bit."""
        if self.n > 14:
            raise ValueError("statevector extraction limited to n <= 14")
        n = self.n
        out = np.empty(1 << n, dtype=complex)
        for idx in range(1 << n):
            mask = 0
            for q in range(n):
                if (idx >> (n - 1 - q)) & 1:
                    mask |= 1 << q
            out[idx] = self.amplitude_bits(mask)
        return out

    # -- inner products and normal form ---------------------------------------

    def _normalize_to_zero_ops(self) -> list[tuple]:
        """Left-gate sequence mapping this state onto (phase) |0..0>."""
        st = self.copy()
        ops: list[tuple] = []
        n = st.n

        def cx(c, t):
            st.apply_clifford_gate("CX", c, t)
            ops.append(("CX", c, t))

        # bring G (hence F) to the identity with left CNOTs
        for j in range(n):
            ej = 1 << j
            if not st.G[j] & ej:
                pivot = next((i for i in range(j + 1, n) if st.G[i] & ej), None)
                if pivot is None:
                    raise RuntimeError("singular tableau: invalid CH form")
                cx(pivot, j)
                cx(j, pivot)
                cx(pivot, j)
            for i in range(n):
                if i != j and st.G[i] & ej:
                    cx(j, i)
        # clear M (symmetric once F = G = identity) with CZ / S
        for q in range(n):
            for r in range(q + 1, n):
                if st.M[q] & (1 << r):
                    st.apply_clifford_gate("CZ", q, r)
                    ops.append(("CZ", q, r))
        for q in range(n):
            if st.M[q] & (1 << q):
                st.apply_clifford_gate("S", q)
                ops.append(("S", q))
        # clear the Hadamard layer, then the basis string
        for q in range(n):
            if st.v & (1 << q):
                st.apply_clifford_gate("H", q)
                ops.append(("H", q))
        for q in range(n):
            if st.s & (1 << q):
                st.apply_clifford_gate("X", q)
                ops.append(("X", q))
        if st.v or st.s:
            raise RuntimeError("normalization failed to reach a basis state")
        return ops

    def inner(self, other: CHForm) -> complex:
        """<self|other>, exact up to floating point."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        ops = self._normalize_to_zero_ops()
        a = self.copy()
        b = other.copy()
        for op in ops:
            a.apply_clifford_gate(op[0], *op[1:])
            b.apply_clifford_gate(op[0], *op[1:])
        return a.amplitude_bits(0).conjugate() * b.amplitude_bits(0)

    # -- diagnostics -----------------------------------------------------------

    def serialize(self) -> str:
        """Stable debug text form (used for golden-file comparisons)."""
        lines = [f"chform n={self.n}", f"omega {_fmt_complex(self.omega)}"]
        for q in range(self.n):
            lines.append(f"X{q} {self.x_image(q).to_string(always_sign=True)}")
        for q in range(self.n):
            lines.append(f"Z{q} {self.z_image(q).to_string(always_sign=True)}")
        lines.append("Uh " + _fmt_bits(self.v, self.n))
        lines.append("s " + _fmt_bits(self.s, self.n))
        return "\n".join(lines) + "\n"

    def validate(self) -> None:
        """Assert the symplectic tableau invariants."""
        n = self.n
        for p in range(n):
            assert self.x_image(p).is_hermitian(), "X image not Hermitian"
            for q in range(n):
                want = 1 if p == q else 0
                got = (self.F[p] & self.G[q]).bit_count() & 1
                assert got == want, "F.G^T != I"
                sym = ((self.F[p] & self.M[q]).bit_count() + (self.M[p] & self.F[q]).bit_count()) & 1
                assert sym == 0, "X images do not commute"


def _h_decompose(v: int, y: int, w: int, delta: int) -> tuple[complex, int, int, int]:
    """One-qubit rewrite H^v (|y> + i^delta |w>) ~ omega S^a H^b |c>, y != w.

    The returned omega absorbs a factor 2^{-1/2} relative to the left side.
    """
    if y == w:
        raise ValueError("states must differ")
    if not v:
        omega = _I_POW[(delta * y) & 3]
        delta2 = (delta if y == 0 else -delta) & 3
        return omega, delta2 & 1, 1, delta2 >> 1
    if not delta & 1:
        c = delta >> 1
        return (-1.0 + 0j) ** (c & y), 0, 0, c
    omega = (1 + _I_POW[delta]) * _SQRT_HALF
    return omega, 1, 1, 0 if ((delta >> 1) ^ y) else 1


def _fmt_complex(z: complex) -> str:
    re, im = z.real, z.imag
    sign = "+" if im >= 0 else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


def _fmt_bits(mask: int, n: int) -> str:
    return "".join("1" if (mask >> q) & 1 else "0" for q in range(n))


def init_zero(n: int) -> CHForm:
    """CH form of |0...0>."""
    return CHForm(n)
