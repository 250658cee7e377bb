import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_clifford_gate, random_clifford_exp_gate, random_hermitian_pauli

from stabsparse import oracle
from stabsparse.chform import CHForm, init_zero
from stabsparse.circuit import Gate
from stabsparse.pauli import PauliOperator


def apply_gate_both(state, vec, g):
    if g.kind == "EXP":
        state.apply_pauli_exponential(g.pauli, g.theta)
    else:
        state.apply_clifford_gate(g.kind, *g.qubits)
    return oracle.apply_gate(vec, state.n, g)


def test_init_zero():
    st = init_zero(1)
    assert st.amplitude("0") == 1
    assert st.amplitude("1") == 0
    st3 = init_zero(3)
    vec = st3.statevector()
    want = np.zeros(8)
    want[0] = 1
    assert np.allclose(vec, want)
    with pytest.raises(ValueError):
        init_zero(0)


def test_h_on_zero():
    st = init_zero(1)
    st.apply_clifford_gate("H", 0)
    assert np.allclose(st.statevector(), [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_s_on_plus():
    st = init_zero(1)
    st.apply_clifford_gate("H", 0)
    st.apply_clifford_gate("S", 0)
    assert np.allclose(st.statevector(), [1 / np.sqrt(2), 1j / np.sqrt(2)])


def test_bell_state():
    st = init_zero(2)
    st.apply_clifford_gate("H", 0)
    st.apply_clifford_gate("CX", 0, 1)
    assert np.isclose(st.amplitude("11"), 1 / np.sqrt(2))
    assert np.allclose(st.statevector(), [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])


def test_exp_z_half_pi_on_zero():
    st = init_zero(1)
    st.apply_pauli_exponential(PauliOperator.from_string("Z"), Fraction(1, 2))
    assert np.isclose(st.omega, 1j)
    assert np.isclose(st.amplitude("0"), 1j)


def test_exp_x_quarter_pi_on_zero():
    st = init_zero(1)
    st.apply_pauli_exponential(PauliOperator.from_string("X"), Fraction(1, 4))
    assert np.allclose(st.statevector(), [1 / np.sqrt(2), 1j / np.sqrt(2)])


def test_exp_pi_is_minus_identity():
    rng = np.random.default_rng(0)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        st = init_zero(n)
        vec = oracle.zero_state(n)
        for _ in range(15):
            vec = apply_gate_both(st, vec, random_clifford_gate(rng, n))
        before = st.statevector()
        s_before = st.s
        st.apply_pauli_exponential(random_hermitian_pauli(rng, n, signed=False), 1)
        assert np.allclose(st.statevector(), -before, atol=1e-12)
        assert st.s == s_before


def test_theta_validation():
    st = init_zero(1)
    with pytest.raises(ValueError):
        st.apply_pauli_exponential(PauliOperator.from_string("Z"), Fraction(1, 3))
    with pytest.raises(ValueError):
        st.apply_pauli_exponential(PauliOperator.from_string("+i Z"), Fraction(1, 4))
    with pytest.raises(ValueError):
        st.apply_pauli_exponential(PauliOperator.from_string("ZZ"), Fraction(1, 4))


def test_identity_pauli_exponential_is_global_phase():
    st = init_zero(2)
    st.apply_pauli_exponential(PauliOperator.identity(2), Fraction(1, 4))
    assert np.isclose(st.omega, np.exp(1j * np.pi / 4))
    st.apply_pauli_exponential(PauliOperator.identity(2).negate(), Fraction(1, 4))
    assert np.isclose(st.omega, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_oracle_equivalence_random_sequences(seed):
    """Dense oracle equality, global phase included, for mixed sequences."""
    rng = np.random.default_rng(1000 + seed)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        st = init_zero(n)
        vec = oracle.zero_state(n)
        length = int(rng.integers(1, 61))
        for _ in range(length):
            if rng.integers(0, 4) == 0:
                g = random_clifford_exp_gate(rng, n)
            else:
                g = random_clifford_gate(rng, n)
            vec = apply_gate_both(st, vec, g)
        assert np.allclose(st.statevector(), vec, atol=1e-10)
        assert abs(abs(st.omega) - 1) < 1e-10


def test_amplitude_random_clifford_circuit_vs_oracle():
    rng = np.random.default_rng(42)
    n = 5
    st = init_zero(n)
    vec = oracle.zero_state(n)
    for _ in range(60):
        vec = apply_gate_both(st, vec, random_clifford_gate(rng, n))
    for idx in range(1 << n):
        x = format(idx, f"0{n}b")
        assert abs(st.amplitude(x) - vec[idx]) < 1e-10


def test_amplitude_hh_00():
    st = init_zero(2)
    st.apply_clifford_gate("H", 0)
    st.apply_clifford_gate("H", 1)
    assert np.isclose(st.amplitude("11"), 0.5)


def test_support_structure():
    """|<x|phi>| is 0 or a power of 2^{-1/2} when |omega| = 1."""
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        st = init_zero(n)
        for _ in range(40):
            g = random_clifford_gate(rng, n)
            st.apply_clifford_gate(g.kind, *g.qubits)
        for idx in range(1 << n):
            a = abs(st.amplitude_bits(idx))
            if a > 1e-12:
                k = -2 * np.log2(a)
                assert abs(k - round(k)) < 1e-9


def test_quarter_twice_equals_half():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        base = init_zero(n)
        for _ in range(20):
            g = random_clifford_gate(rng, n)
            base.apply_clifford_gate(g.kind, *g.qubits)
        p = random_hermitian_pauli(rng, n)
        twice = base.copy()
        twice.apply_pauli_exponential(p, Fraction(1, 4))
        twice.apply_pauli_exponential(p, Fraction(1, 4))
        once = base.copy()
        once.apply_pauli_exponential(p, Fraction(1, 2))
        assert np.allclose(twice.statevector(), once.statevector(), atol=1e-12)


def test_negative_and_large_angles_fold():
    rng = np.random.default_rng(8)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        st = init_zero(n)
        vec = oracle.zero_state(n)
        for _ in range(10):
            vec = apply_gate_both(st, vec, random_clifford_gate(rng, n))
        p = random_hermitian_pauli(rng, n)
        theta = Fraction(int(rng.integers(-20, 21)), 4)
        st.apply_pauli_exponential(p, theta)
        vec = oracle.apply_exp_pauli(vec, n, p, theta)
        assert np.allclose(st.statevector(), vec, atol=1e-10)


def test_uc_fixes_zero_invariant():
    """Rebuilding a reached tableau with omega=1, Uh=0, s=0 leaves <0|phi> = 1."""
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        st = init_zero(n)
        for _ in range(30):
            g = random_clifford_gate(rng, n)
            st.apply_clifford_gate(g.kind, *g.qubits)
        bare = init_zero(n)
        bare.F, bare.G, bare.M, bare.gamma = st.F[:], st.G[:], st.M[:], st.gamma[:]
        assert np.isclose(bare.amplitude_bits(0), 1.0)
        st.validate()


def test_norm_preservation():
    rng = np.random.default_rng(9)
    st = init_zero(4)
    for _ in range(200):
        if rng.integers(0, 3) == 0:
            st.apply_pauli_exponential(random_hermitian_pauli(rng, 4), Fraction(int(rng.integers(1, 8)), 4))
        else:
            g = random_clifford_gate(rng, 4)
            st.apply_clifford_gate(g.kind, *g.qubits)
        assert abs(abs(st.omega) - 1) < 1e-9
    assert abs(np.linalg.norm(st.statevector()) - 1) < 1e-9


def test_inner_product():
    rng = np.random.default_rng(12)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        a, va = init_zero(n), oracle.zero_state(n)
        b, vb = init_zero(n), oracle.zero_state(n)
        for _ in range(25):
            va = apply_gate_both(a, va, random_clifford_gate(rng, n))
            vb = apply_gate_both(b, vb, random_clifford_gate(rng, n))
        want = np.vdot(va, vb)
        assert abs(a.inner(b) - want) < 1e-10


def test_serialize_golden():
    st = init_zero(2)
    st.apply_clifford_gate("H", 0)
    st.apply_clifford_gate("CX", 0, 1)
    st.apply_clifford_gate("S", 1)
    # row images verified by hand: with U_C = S1.CX01,
    # X0 -> X0X1, X1 -> -Z0Y1, Z0 -> Z0, Z1 -> Z0Z1
    expected = (
        "chform n=2\n"
        "omega 1.0+0.0i\n"
        "X0 +1 XX\n"
        "X1 -1 ZY\n"
        "Z0 +1 ZI\n"
        "Z1 +1 ZZ\n"
        "Uh 10\n"
        "s 00\n"
    )
    assert st.serialize() == expected


def test_extract_statevector_guard():
    st = init_zero(2)
    st.n = 15
    with pytest.raises(ValueError):
        st.statevector()


def test_cost_scaling_subquadratic_or_quadratic():
    """Wall time of apply_pauli_exponential grows no faster than ~n^2."""
    times = {}
    for n in (64, 128, 256):
        rng = np.random.default_rng(n)
        st = init_zero(n)
        # scramble so the update paths are nontrivial
        for _ in range(3 * n):
            g = random_clifford_gate(rng, n)
            st.apply_clifford_gate(g.kind, *g.qubits)
        paulis = [random_hermitian_pauli(rng, n) for _ in range(24)]
        t0 = time.perf_counter()
        for p in paulis:
            st.apply_pauli_exponential(p, Fraction(1, 4))
        times[n] = (time.perf_counter() - t0) / len(paulis)
    # quadratic scaling predicts 4x per doubling; allow generous slack
    assert times[128] / times[64] < 6.0
    assert times[256] / times[128] < 6.0
