from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpc.circuit import Circuit, cnot, h, rzz
from lpc.compiler import lower_cnot_to_rzz
from lpc.parity import decode_plan, initial_state, replay
from lpc.sim import (
    SimulationError,
    apply_circuit,
    bit_reversal,
    circuit_unitary,
    dft_matrix,
    equiv_up_to_phase,
    fidelity,
    permutation_unitary,
)

from test_circuit import circuits


def basis(n, index):
    v = np.zeros(2**n, dtype=complex)
    v[index] = 1
    return v


def test_cnot_on_10():
    out = apply_circuit(basis(2, 0b10), Circuit(2, (cnot(0, 1),)))
    assert np.allclose(out, basis(2, 0b11))


def test_rzz_phase_on_00():
    out = apply_circuit(basis(2, 0), Circuit(2, (rzz(0, 1, 0.8),)))
    assert np.allclose(out, np.exp(-0.4j) * basis(2, 0), atol=1e-14)


def test_empty_circuit_and_identities():
    v = np.array([0.6, 0.8j, 0, 0])
    assert np.allclose(apply_circuit(v, Circuit(2)), v)
    assert np.allclose(circuit_unitary(Circuit(3)), np.eye(8))
    c = circuit_unitary(Circuit(2, (cnot(0, 1),)))
    assert np.allclose(c @ c, np.eye(4))
    hh = circuit_unitary(Circuit(2, (h(0), h(1), h(0), h(1))))
    assert np.allclose(hh, np.eye(4), atol=1e-12)


def test_dimension_mismatch_and_size_guard(monkeypatch):
    with pytest.raises(SimulationError):
        apply_circuit(np.ones(8), Circuit(2))
    monkeypatch.setenv("LPC_SIM_MAX_QUBITS", "3")
    with pytest.raises(SimulationError):
        circuit_unitary(Circuit(4))
    with pytest.raises(SimulationError):
        dft_matrix(4)


def test_equiv_up_to_phase_examples():
    u = circuit_unitary(Circuit(2, (cnot(0, 1), h(1))))
    assert equiv_up_to_phase(u, np.exp(1.3j) * u)
    x = np.array([[0, 1], [1, 0]])
    assert not equiv_up_to_phase(np.eye(2), x)
    lowered = circuit_unitary(lower_cnot_to_rzz(Circuit(2, (cnot(0, 1),))))
    assert equiv_up_to_phase(lowered, circuit_unitary(Circuit(2, (cnot(0, 1),))), tol=1e-10)


def test_permutation_unitary_moves_bits():
    # Physical position 0 carries logical 2, position 2 carries logical 0.
    p = permutation_unitary((2, 1, 0))
    assert np.allclose(p @ basis(3, 0b100), basis(3, 0b001))
    assert np.allclose(bit_reversal(3), p)


@settings(max_examples=60, deadline=None)
@given(circuits(max_qubits=5, max_gates=25))
def test_norm_conservation_and_unitarity(c):
    rng = np.random.default_rng(0)
    v = rng.normal(size=2**c.num_qubits) + 1j * rng.normal(size=2**c.num_qubits)
    v /= np.linalg.norm(v)
    state = v.copy()
    for g in c.gates:
        state = apply_circuit(state, Circuit(c.num_qubits, (g,)))
        assert abs(np.linalg.norm(state) - 1) < 1e-12
    u = circuit_unitary(c)
    assert np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-10)
    assert np.allclose(u @ v, state, atol=1e-12)


def test_decode_roundtrip_is_a_permutation():
    rng = np.random.default_rng(11)
    for _ in range(500):
        n = int(rng.integers(2, 7))
        pairs = []
        for _ in range(int(rng.integers(0, 30))):
            k = int(rng.integers(0, n - 1))
            pairs.append((k, k + 1) if rng.random() < 0.5 else (k + 1, k))
        final = replay(initial_state(n), pairs)[-1]
        plan = decode_plan(final)
        u = circuit_unitary(Circuit(n, tuple(cnot(c, t) for c, t in pairs)) + plan.circuit)
        assert np.allclose(np.abs(u[np.abs(u) > 1e-9]), 1)
        assert np.count_nonzero(np.abs(u) > 1e-9) == 2**n
        assert fidelity(permutation_unitary(plan.permutation) @ u, np.eye(2**n)) == pytest.approx(1, abs=1e-12)
