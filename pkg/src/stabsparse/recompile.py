"""Clifford recompilation into canonical form.

Rewrites a circuit so that every non-Clifford gate becomes a Pauli
exponential acting *after* a single stabilizer state preparation:

    U|0..0> = exp(i theta_m Q_m) ... exp(i theta_1 Q_1) |phi>,

with every theta_i an exact rational in (0, pi/4) and each Q_i a signed
Hermitian Pauli.  |phi> collects all Clifford gates applied to |0..0>.

The rewrite streams through the gate list once.  A Clifford gate g is
commuted past the pending rotations (conjugating each Q_j by g) and then
absorbed into |phi>.  A non-Clifford exp(i theta P) is appended as a
rotation after splitting off Clifford factors exp(i k pi/4 P); those
factors are commuted past the earlier rotations with

    exp(i pi/4 P) Q exp(-i pi/4 P) = Q      if [P, Q] = 0
                                   = i P Q  if {P, Q} = 0

and absorbed into |phi>.  A conjugation result of the form -Q is kept as
the signed Pauli itself (the angle stays in (0, pi/4)).  Consecutive
rotations along the same axis are merged before folding, so products
that multiply to a Clifford disappear from the rotation list entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .chform import CHForm, init_zero
from .circuit import Circuit, Gate, NAMED_CLIFFORD
from .pauli import PauliOperator, conjugate_by_quarter_turn

_QUARTER = Fraction(1, 4)


@dataclass
class RecompiledCircuit:
    n: int
    phi: CHForm
    rotations: tuple[tuple[PauliOperator, Fraction], ...]
    global_phase: Fraction  # multiple of pi, in [0, 2)

    def serialize(self) -> str:
        gp = self.global_phase
        lines = [
            f"recompiled n={self.n}",
            f"global_phase {gp.numerator}/{gp.denominator}",
            self.phi.serialize().rstrip("\n"),
        ]
        for q, theta in self.rotations:
            lines.append(f"ROT {theta.numerator}/{theta.denominator} {q.to_string(always_sign=True)}")
        return "\n".join(lines) + "\n"


def conjugate_pauli_by_gate(g: Gate, p: PauliOperator) -> PauliOperator:
    """g P g^dag for a single Clifford gate, O(1) bit work."""
    x, z, phase = p.x, p.z, p.phase
    kind = g.kind
    if kind == "EXP":
        if not g.is_clifford():
            raise ValueError("cannot conjugate by a non-Clifford gate")
        return conjugate_by_quarter_turn(g.pauli, p, int(g.theta * 4))
    if kind in ("CX", "CZ"):
        c, t = g.qubits
        ec, et = 1 << c, 1 << t
        xc, zc = x & ec, z & ec
        xt, zt = x & et, z & et
        if kind == "CX":
            # X_c -> X_c X_t, Z_t -> Z_c Z_t; no phase in the i^p X[x] Z[z] encoding
            if xc:
                x ^= et
            if zt:
                z ^= ec
        else:
            if xc and xt:
                phase += 2
            if xc:
                z ^= et
            if xt:
                z ^= ec
        return PauliOperator(p.n, x, z, phase & 3)
    q = g.qubits[0]
    e = 1 << q
    xb, zb = x & e, z & e
    if kind == "H":
        if xb and zb:
            phase += 2
        elif xb:
            x ^= e
            z ^= e
        elif zb:
            x ^= e
            z ^= e
    elif kind == "S":
        if xb:
            z ^= e
            phase += 1
    elif kind == "SDG":
        if xb:
            z ^= e
            phase += 3
    elif kind == "X":
        if zb:
            phase += 2
    elif kind == "Y":
        if bool(xb) != bool(zb):
            phase += 2
    elif kind == "Z":
        if xb:
            phase += 2
    else:
        raise ValueError(f"cannot conjugate by non-Clifford gate {kind!r}")
    return PauliOperator(p.n, x, z, phase & 3)


def conjugate_pauli_by_clifford_suffix(p: PauliOperator, suffix: Iterable[Gate]) -> PauliOperator:
    """C P C^dag where C is the ordered product of `suffix` (first gate applied first)."""
    out = p
    for g in suffix:
        out = conjugate_pauli_by_gate(g, out)
    return out


def fold_angle(
    theta: Fraction,
    q: PauliOperator,
    earlier: list[tuple[PauliOperator, Fraction]],
    phi: CHForm,
) -> Fraction | None:
    """Split exp(i theta pi Q) into a canonical rotation and Clifford factors.

    Returns the residual angle in (0, 1/4), or None when the rotation is
    entirely Clifford.  The factored-out exp(i k pi/4 Q) is commuted past
    every rotation in `earlier` (conjugating them in place) and applied
    to phi.
    """
    t = theta % 2
    quarters = int(t // _QUARTER)
    residue = t - quarters * _QUARTER
    if residue == 0 and quarters == 0:
        return None
    if quarters:
        for j, (qj, tj) in enumerate(earlier):
            earlier[j] = (conjugate_by_quarter_turn(q, qj, quarters), tj)
        phi.apply_pauli_exponential(q, Fraction(quarters, 4))
    return residue if residue != 0 else None


def recompile(c: Circuit) -> RecompiledCircuit:
    phi = init_zero(c.n)
    rotations: list[tuple[PauliOperator, Fraction]] = []
    phase_ledger = c.global_phase

    def insert_rotation(p: PauliOperator, t: Fraction) -> None:
        nonlocal phase_ledger
        if p.is_identity_support():
            # exp(i t pi (+-1)) is a pure global phase
            phase_ledger += t if p.phase == 0 else -t
            return
        if rotations:
            q_last, t_last = rotations[-1]
            if q_last.x == p.x and q_last.z == p.z:
                rel = (p.phase - q_last.phase) & 3
                if rel in (0, 2):
                    rotations.pop()
                    t = t_last + (t if rel == 0 else -t)
                    p = q_last
        residue = fold_angle(t, p, rotations, phi)
        if residue is not None:
            rotations.append((p, residue))

    for g in c.gates:
        if g.kind in NAMED_CLIFFORD:
            for j, (qj, tj) in enumerate(rotations):
                rotations[j] = (conjugate_pauli_by_gate(g, qj), tj)
            phi.apply_clifford_gate(g.kind, *g.qubits)
        elif g.kind in ("T", "TDG"):
            # T = e^{i pi/8} exp(-i (pi/8) Z); TDG is the inverse
            sign = 1 if g.kind == "T" else -1
            phase_ledger += Fraction(sign, 8)
            z = PauliOperator.single(c.n, g.qubits[0], "Z")
            insert_rotation(z, Fraction(-sign, 8))
        elif g.kind == "EXP":
            if g.is_clifford():
                k = int(g.theta * 4)
                if not g.pauli.is_identity_support():
                    for j, (qj, tj) in enumerate(rotations):
                        rotations[j] = (conjugate_by_quarter_turn(g.pauli, qj, k), tj)
                phi.apply_pauli_exponential(g.pauli, g.theta)
            else:
                insert_rotation(g.pauli, g.theta)
        else:  # pragma: no cover - parser restricts kinds
            raise ValueError(f"unknown gate {g.kind!r}")

    for q, t in rotations:
        assert 0 < t < _QUARTER, "canonical angle invariant violated"
    return RecompiledCircuit(c.n, phi, tuple(rotations), phase_ledger % 2)
