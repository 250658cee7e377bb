"""Clifford decompositions of non-Clifford rotations and their 1-norms.

Every decomposition is a weighted sum of Clifford terms, each term a
product of Pauli exponentials exp(i k pi/4 R) so that sampled terms can
be applied to CH-form states with the fast phase-sensitive updates.

Built-in closed forms
---------------------

Single rotation, 0 < theta < pi/4 (optimal):

    exp(i theta Q) = (cos t - sin t) 1 + (sqrt(2) sin t) exp(i pi/4 Q)
    one_norm = cos t + (sqrt(2) - 1) sin t

Equal-angle triple, 0 < theta <= pi/8 (optimal): for axes applied in the
order W, Q, P (operator exp(i t P) exp(i t Q) exp(i t W)) with
P Q W = -i 1, the four Clifford terms are the images of
(1, SH, HX, SHS) under the axis relabeling X->P, Z->Q, Y->W, with
coefficient magnitudes

    cos 3t - sin t,  sin 2t (cos t - sin t),  sqrt(2) sin 2t sin t  (twice)

and one_norm their sum.  Term phases below were pinned numerically by
requiring the reconstruction to match the target to < 1e-12.

General single-qubit targets are handled by an ADMM basis-pursuit solve
over the 24 single-qubit Cliffords (min sum |a_j| s.t. sum a_j C_j = U).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pauli import PauliOperator, binary_rank, multiply
from .recompile import RecompiledCircuit

_SQRT2 = math.sqrt(2.0)
_EIGHTH = Fraction(1, 8)
_QUARTER = Fraction(1, 4)

Word = tuple[tuple[PauliOperator, Fraction], ...]


class SolverConvergenceError(RuntimeError):
    """The L1 solver did not converge within its iteration cap."""


@dataclass(frozen=True)
class CliffordTerm:
    coefficient: complex
    word: Word  # application order; angles are exact multiples of 1/4

    def matrix(self, n: int) -> np.ndarray:
        m = np.eye(1 << n, dtype=complex)
        for p, theta in self.word:
            t = float(theta) * math.pi
            m = (math.cos(t) * np.eye(1 << n) + 1j * math.sin(t) * p.to_matrix()) @ m
        return self.coefficient * m


@dataclass(frozen=True)
class CliffordDecomposition:
    terms: tuple[CliffordTerm, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("decomposition needs at least one term")

    @property
    def one_norm(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def matrix(self, n: int) -> np.ndarray:
        return sum(t.matrix(n) for t in self.terms)


# -- closed-form norms --------------------------------------------------------


def single_rotation_norm(theta: float) -> float:
    """Minimal 1-norm of exp(i theta P), valid for 0 <= theta <= pi/4."""
    return math.cos(theta) + (_SQRT2 - 1) * math.sin(theta)


def xyz_triple_norm(theta: float) -> float:
    """Minimal 1-norm of the equal-angle triple, valid for 0 < theta <= pi/8."""
    return (
        (math.cos(3 * theta) - math.sin(theta))
        + math.sin(2 * theta) * (math.cos(theta) - math.sin(theta))
        + 2 * _SQRT2 * math.sin(2 * theta) * math.sin(theta)
    )


# -- built-in decompositions ---------------------------------------------------


def optimal_single_rotation(q: PauliOperator, theta: Fraction) -> CliffordDecomposition:
    if not Fraction(0) < theta < _QUARTER:
        raise ValueError(f"theta = {theta} pi outside (0, pi/4)")
    if not q.is_hermitian() or q.is_identity_support():
        raise ValueError("axis must be a non-identity Hermitian Pauli")
    t = float(theta) * math.pi
    return CliffordDecomposition(
        (
            CliffordTerm(complex(math.cos(t) - math.sin(t)), ()),
            CliffordTerm(complex(_SQRT2 * math.sin(t)), ((q, _QUARTER),)),
        )
    )


def is_xyz_axes(a1: PauliOperator, a2: PauliOperator, a3: PauliOperator) -> bool:
    """True iff the triple applied in order a1, a2, a3 is a relabeled X/Y/Z
    triple covered by the closed form, i.e. a1 = i a3 a2 exactly."""
    if a1.n != a2.n or a2.n != a3.n:
        return False
    if a1.is_identity_support() or a2.is_identity_support() or a3.is_identity_support():
        return False
    prod = multiply(a3, a2)
    return (prod.x, prod.z, (prod.phase + 1) & 3) == (a1.x, a1.z, a1.phase)


def xyz_triple(
    theta1: Fraction,
    theta2: Fraction,
    theta3: Fraction,
    axes: tuple[PauliOperator, PauliOperator, PauliOperator],
) -> CliffordDecomposition:
    """Optimal four-term expansion of exp(i t a3) exp(i t a2) exp(i t a1).

    Requires equal angles in (0, pi/8] and a1 = i a3 a2 (axes listed in
    application order).
    """
    if not (theta1 == theta2 == theta3):
        raise ValueError("closed form requires equal angles")
    if not Fraction(0) < theta1 <= _EIGHTH:
        raise ValueError(f"theta = {theta1} pi outside (0, pi/8]")
    a1, a2, a3 = axes
    if not is_xyz_axes(a1, a2, a3):
        raise ValueError("axes are not a relabeled X/Y/Z triple (need a1 = i a3 a2)")
    t = float(theta1) * math.pi
    c1 = math.cos(3 * t) - math.sin(t)
    c2 = math.sin(2 * t) * (math.cos(t) - math.sin(t))
    c3 = _SQRT2 * math.sin(2 * t) * math.sin(t)
    p, q, w = a3, a2, a1  # X-like, Z-like, Y-like
    half = Fraction(1, 2)
    return CliffordDecomposition(
        (
            CliffordTerm(complex(c1), ()),
            # image of SH, word phase e^{i 3pi/4} folded into the coefficient
            CliffordTerm(complex(-c2), ((w, _QUARTER), (q, -3 * _QUARTER))),
            # image of HX (word phase 1)
            CliffordTerm(complex(c3), ((p, half), (w, _QUARTER), (q, -half))),
            # image of SHS, word phase e^{i pi} folded into the coefficient
            CliffordTerm(complex(-c3), ((q, -_QUARTER), (w, _QUARTER), (q, -3 * _QUARTER))),
        )
    )


# -- grouping and circuit extent ------------------------------------------------


def build_groups(
    rc: RecompiledCircuit, grouping: str = "per-gate"
) -> list[tuple[tuple[int, ...], CliffordDecomposition]]:
    """Partition the rotation list into decomposition groups.

    With the "xyz-triples" policy, consecutive equal-angle triples whose
    axes form a relabeled X/Y/Z pattern (binary rank 2) use the four-term
    closed form; everything else falls back to the per-gate expansion.
    """
    if grouping not in ("per-gate", "xyz-triples"):
        raise ValueError(f"unknown grouping policy {grouping!r}")
    rot = rc.rotations
    groups: list[tuple[tuple[int, ...], CliffordDecomposition]] = []
    i = 0
    while i < len(rot):
        if grouping == "xyz-triples" and i + 2 < len(rot) + 0 or False:
            pass
        if grouping == "xyz-triples" and i + 2 <= len(rot) - 1:
            (a1, t1), (a2, t2), (a3, t3) = rot[i], rot[i + 1], rot[i + 2]
            if (
                t1 == t2 == t3
                and t1 <= _EIGHTH
                and is_xyz_axes(a1, a2, a3)
            ):
                groups.append(((i, i + 1, i + 2), xyz_triple(t1, t2, t3, (a1, a2, a3))))
                i += 3
                continue
        q, t = rot[i]
        groups.append(((i,), optimal_single_rotation(q, t)))
        i += 1
    return groups


def circuit_extent(rc: RecompiledCircuit, grouping: str = "per-gate") -> float:
    """Product of per-group 1-norms (the total stabilizer-sum 1-norm)."""
    out = 1.0
    for _, dec in build_groups(rc, grouping):
        out *= dec.one_norm
    return out


def predict_contraction(paulis: list[PauliOperator]) -> bool:
    """Advisory: a contractive decomposition is expected iff the binary
    rank of the axes is smaller than their number."""
    if not paulis:
        raise ValueError("need at least one Pauli")
    return binary_rank(paulis) < len(paulis)


# -- verification ----------------------------------------------------------------


def verify_decomposition(
    target: np.ndarray, d: CliffordDecomposition
) -> tuple[bool, float, float]:
    """Reconstruct the decomposition densely and compare entrywise.

    Returns (matches, max-entry residual, one_norm); matches at 1e-9.
    """
    target = np.asarray(target, dtype=complex)
    dim = target.shape[0]
    if target.shape != (dim, dim) or dim not in (2, 4):
        raise ValueError("target must be a 2x2 or 4x4 matrix")
    n = 1 if dim == 2 else 2
    for term in d.terms:
        for p, _ in term.word:
            if p.n != n:
                raise ValueError("word dimension does not match target")
    got = d.matrix(n)
    residual = float(np.abs(got - target).max())
    return residual < 1e-9, residual, d.one_norm


# -- single-qubit Clifford group and L1 minimization ------------------------------


_LETTER_WORDS: dict[str, tuple[Word, Fraction]] = {
    "H": (
        ((PauliOperator.single(1, 0, "Y"), _QUARTER), (PauliOperator.single(1, 0, "Z"), -Fraction(1, 2))),
        Fraction(1, 2),
    ),
    "S": (((PauliOperator.single(1, 0, "Z"), -_QUARTER),), _QUARTER),
}


@functools.cache
def single_qubit_cliffords() -> tuple[tuple[str, np.ndarray, Word, complex], ...]:
    """The 24 single-qubit Cliffords as (word, canonical matrix, exponential
    word in application order, scalar c with matrix = c * word product).

    Canonical phase: first nonzero entry made positive real.
    """
    h = np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2
    s = np.diag([1, 1j]).astype(complex)
    gates = {"H": h, "S": s}

    def canon(m: np.ndarray) -> np.ndarray:
        flat = m.reshape(-1)
        idx = int(np.argmax(np.abs(flat) > 1e-9))
        return m / (flat[idx] / abs(flat[idx]))

    def key(m: np.ndarray):
        return tuple(np.round(canon(m).reshape(-1), 9).tolist())

    elems: list[tuple[str, np.ndarray]] = []
    seen = set()
    queue = [(np.eye(2, dtype=complex), "")]
    while queue:
        m, word = queue.pop(0)
        k = key(m)
        if k in seen:
            continue
        seen.add(k)
        elems.append((word, canon(m)))
        for letter in ("H", "S"):
            queue.append((gates[letter] @ m, letter + word))
    assert len(elems) == 24, f"expected 24 Cliffords, got {len(elems)}"

    out = []
    for word, mat in elems:
        exp_word: list[tuple[PauliOperator, Fraction]] = []
        raw = np.eye(2, dtype=complex)
        # leftmost letter in `word` is applied last
        for letter in reversed(word):
            w, _ = _LETTER_WORDS[letter]
            exp_word.extend(w)
        for p, theta in exp_word:
            t = float(theta) * math.pi
            raw = (math.cos(t) * np.eye(2) + 1j * math.sin(t) * p.to_matrix()) @ raw
        # scalar folding the word phases and the canonicalization phase
        ratio = mat.reshape(-1) / raw.reshape(-1)
        finite = ratio[np.isfinite(ratio) & (np.abs(raw.reshape(-1)) > 1e-9)]
        c = complex(finite[0])
        assert abs(abs(c) - 1) < 1e-9
        assert np.abs(c * raw - mat).max() < 1e-9
        out.append((word if word else "I", mat, tuple(exp_word), c))
    return tuple(out)


def l1_minimal_single_qubit(
    target: np.ndarray,
    *,
    rho: float = 4.0,
    tol: float = 1e-11,
    max_iter: int = 100_000,
) -> CliffordDecomposition:
    """Minimal-1-norm Clifford decomposition of a 2x2 unitary.

    ADMM splitting between the affine constraint set {a : A a = vec(U)}
    (projected exactly each iteration) and the complex soft-threshold
    proximal step for the 1-norm.  Raises SolverConvergenceError if the
    splitting gap has not closed after `max_iter` iterations.
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (2, 2):
        raise ValueError("target must be a 2x2 matrix")
    if np.abs(target @ target.conj().T - np.eye(2)).max() > 1e-10:
        raise ValueError("target must be unitary (to 1e-10)")

    table = single_qubit_cliffords()
    a_mat = np.stack([m.reshape(-1) for _, m, _, _ in table], axis=1)  # 4 x 24
    b = target.reshape(-1)
    k_mat = a_mat.conj().T @ np.linalg.inv(a_mat @ a_mat.conj().T)

    z = np.zeros(24, dtype=complex)
    u = np.zeros(24, dtype=complex)
    kappa = 1.0 / rho
    x = z
    for _ in range(max_iter):
        w = z - u
        x = w + k_mat @ (b - a_mat @ w)
        w2 = x + u
        mag = np.abs(w2)
        with np.errstate(divide="ignore", invalid="ignore"):
            shrink = np.where(mag > kappa, 1.0 - kappa / np.where(mag > 0, mag, 1.0), 0.0)
        z_new = shrink * w2
        primal = float(np.abs(x - z_new).max())
        dual = float(rho * np.abs(z_new - z).max())
        z = z_new
        u = u + x - z
        if primal < tol and dual < tol:
            break
    else:
        raise SolverConvergenceError(
            f"no convergence after {max_iter} iterations (gap {primal:.2e})"
        )

    terms = []
    for coeff, (_, _, exp_word, c) in zip(x, table):
        if abs(coeff) < 1e-9:
            continue
        terms.append(CliffordTerm(complex(coeff * c), exp_word))
    if not terms:
        terms.append(CliffordTerm(0j, ()))
    return CliffordDecomposition(tuple(terms))
