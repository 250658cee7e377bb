"""Gate-list circuit representation and its line-based text format.

Angles are exact rational multiples of pi (``fractions.Fraction``) from
parse time right up to numeric evaluation, so Clifford classification
(theta in (pi/4) Z) is an exact arithmetic test, never a float comparison.

Text format (one gate per line, '#' starts a comment):

    qubits <n>
    H <q> | S <q> | SDG <q> | X <q> | Y <q> | Z <q>
    CX <q1> <q2> | CZ <q1> <q2>
    T <q> | TDG <q>
    EXP <num>/<den> <pauli-string>     # exp(i (num/den) pi P)

The EXP Pauli string uses the PauliOperator text form and must be
Hermitian (sign tokens +1/-1 only).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .pauli import PauliOperator

NAMED_SINGLE = ("H", "S", "SDG", "X", "Y", "Z")
NAMED_TWO = ("CX", "CZ")
NAMED_CLIFFORD = NAMED_SINGLE + NAMED_TWO


class CircuitParseError(ValueError):
    """Syntax or validation error, carrying the 1-based source line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...] = ()
    pauli: PauliOperator | None = None
    theta: Fraction | None = None  # multiple of pi; EXP gates only

    def is_clifford(self) -> bool:
        if self.kind in NAMED_CLIFFORD:
            return True
        if self.kind in ("T", "TDG"):
            return False
        # exp(i theta P) is Clifford exactly when theta is a multiple of pi/4
        return (self.theta * 4).denominator == 1


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    global_phase: Fraction = Fraction(0)  # multiple of pi

    def counts(self) -> tuple[int, int, int]:
        """(total, non-Clifford, Clifford) gate counts."""
        total = len(self.gates)
        non_clifford = sum(1 for g in self.gates if not g.is_clifford())
        return total, non_clifford, total - non_clifford


def _parse_fraction(text: str, line: int) -> Fraction:
    parts = text.split("/")
    if len(parts) != 2:
        raise CircuitParseError(f"malformed rational {text!r} (expected <num>/<den>)", line)
    try:
        num, den = int(parts[0]), int(parts[1])
    except ValueError:
        raise CircuitParseError(f"malformed rational {text!r}", line) from None
    if den == 0:
        raise CircuitParseError("zero denominator", line)
    return Fraction(num, den)


def parse(text: str) -> Circuit:
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        head = fields[0].upper()
        if n is None:
            if head != "QUBITS":
                raise CircuitParseError("first statement must be 'qubits <n>'", lineno)
            if len(fields) != 2 or not fields[1].isdigit():
                raise CircuitParseError("expected 'qubits <n>'", lineno)
            n = int(fields[1])
            if n < 1:
                raise CircuitParseError("qubit count must be >= 1", lineno)
            continue

        if head in NAMED_SINGLE or head in ("T", "TDG"):
            if len(fields) != 2:
                raise CircuitParseError(f"{head} takes one qubit index", lineno)
            q = _parse_index(fields[1], n, lineno)
            gates.append(Gate(head, (q,)))
        elif head in NAMED_TWO:
            if len(fields) != 3:
                raise CircuitParseError(f"{head} takes two qubit indices", lineno)
            a = _parse_index(fields[1], n, lineno)
            b = _parse_index(fields[2], n, lineno)
            if a == b:
                raise CircuitParseError(f"{head} qubits must be distinct", lineno)
            gates.append(Gate(head, (a, b)))
        elif head == "EXP":
            if len(fields) < 3:
                raise CircuitParseError("expected 'EXP <num>/<den> <pauli>'", lineno)
            theta = _parse_fraction(fields[1], lineno)
            pauli_text = " ".join(fields[2:])
            try:
                p = PauliOperator.from_string(pauli_text)
            except ValueError as exc:
                raise CircuitParseError(str(exc), lineno) from None
            if p.n != n:
                raise CircuitParseError(
                    f"Pauli string has {p.n} qubits, circuit has {n}", lineno
                )
            if not p.is_hermitian():
                raise CircuitParseError("EXP Pauli must be Hermitian (sign +1 or -1)", lineno)
            gates.append(Gate("EXP", (), pauli=p, theta=theta))
        else:
            raise CircuitParseError(f"unknown gate {fields[0]!r}", lineno)
    if n is None:
        raise CircuitParseError("missing 'qubits <n>' header", 1)
    return Circuit(n, tuple(gates))


def _parse_index(text: str, n: int, line: int) -> int:
    try:
        q = int(text)
    except ValueError:
        raise CircuitParseError(f"invalid qubit index {text!r}", line) from None
    if not 0 <= q < n:
        raise CircuitParseError(f"qubit index {q} out of range (n={n})", line)
    return q


def render(c: Circuit) -> str:
    """Inverse of parse; bit-exact round trip."""
    if c.global_phase != 0:
        raise ValueError("text format carries no global phase; fold it out first")
    lines = [f"qubits {c.n}"]
    for g in c.gates:
        if g.kind == "EXP":
            th = g.theta
            lines.append(f"EXP {th.numerator}/{th.denominator} {g.pauli.to_string()}")
        else:
            lines.append(f"{g.kind} " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + "\n"


def counts(c: Circuit) -> tuple[int, int, int]:
    return c.counts()
