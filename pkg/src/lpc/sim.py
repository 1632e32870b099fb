"""Dense statevector simulation and unitary-equivalence checks.

Qubit 0 is the most significant bit of a basis-state index. Gate conventions:
RZ(t) = diag(e^{-it/2}, e^{it/2}), RX(t) = cos(t/2) I - i sin(t/2) X,
RZZ(t) = exp(-i t/2 Z(x)Z), CPHASE(p) = diag(1, 1, 1, e^{ip}).
"""

from __future__ import annotations

import os
from functools import reduce
from typing import TYPE_CHECKING

import numpy as np

from .circuit import Circuit, Gate
from .parity import decode_plan

if TYPE_CHECKING:
    from .compiler import CompilationResult, QAOAInstance

DEFAULT_MAX_QUBITS = 12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


class SimulationError(ValueError):
    pass


def max_qubits() -> int:
    """Size guard for dense simulation; overridable through ``LPC_SIM_MAX_QUBITS``."""
    raw = os.environ.get("LPC_SIM_MAX_QUBITS")
    return int(raw) if raw else DEFAULT_MAX_QUBITS


def gate_matrix(gate: Gate) -> np.ndarray:
    """Matrix of a gate on its own qubits, first listed qubit most significant."""
    t = gate.angle
    if gate.kind == "RZ":
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    if gate.kind == "RX":
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if gate.kind == "H":
        return _H
    if gate.kind == "RZZ":
        a, b = np.exp(-0.5j * t), np.exp(0.5j * t)
        return np.diag([a, b, b, a])
    if gate.kind == "CPHASE":
        return np.diag([1, 1, 1, np.exp(1j * t)])
    if gate.kind == "CNOT":
        return _CNOT
    if gate.kind == "SWAP":
        return _SWAP
    raise SimulationError(f"no matrix for {gate.kind}")


def _apply(tensor: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply a gate to a tensor whose first n axes are qubits (extra trailing axes are batch)."""
    k = len(gate.qubits)
    m = gate_matrix(gate).reshape((2,) * (2 * k))
    out = np.tensordot(m, tensor, axes=(list(range(k, 2 * k)), list(gate.qubits)))
    # tensordot puts the gate's output axes first; move them back into place.
    return np.moveaxis(out, list(range(k)), list(gate.qubits))


def _check_size(n: int) -> None:
    limit = max_qubits()
    if n > limit:
        raise SimulationError(f"{n} qubits exceeds the dense-simulation limit of {limit} (set LPC_SIM_MAX_QUBITS)")


def apply_circuit(state: np.ndarray, circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**n,):
        raise SimulationError(f"state of shape {state.shape} does not match {n} qubits")
    tensor = state.reshape((2,) * n)
    for g in circuit.gates:
        tensor = _apply(tensor, g, n)
    return tensor.reshape(2**n)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    _check_size(n)
    dim = 2**n
    # Evolve all basis states at once: the trailing axis indexes the input column.
    tensor = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circuit.gates:
        tensor = _apply(tensor, g, n)
    return tensor.reshape(dim, dim)


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Global-phase-invariant overlap |tr(U^dag V)| / dim."""
    if u.shape != v.shape:
        raise SimulationError(f"shape mismatch {u.shape} vs {v.shape}")
    return float(abs(np.vdot(u, v)) / u.shape[0])


def equiv_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    return fidelity(u, v) >= 1 - tol


def permutation_unitary(perm: tuple[int, ...] | list[int]) -> np.ndarray:
    """Basis relabelling that moves the bit at physical position k to logical position perm[k]."""
    n = len(perm)
    dim = 2**n
    idx = np.arange(dim)
    dest = np.zeros(dim, dtype=np.int64)
    for k, logical in enumerate(perm):
        bit = (idx >> (n - 1 - k)) & 1
        dest |= bit << (n - 1 - logical)
    p = np.zeros((dim, dim), dtype=complex)
    p[dest, idx] = 1
    return p


def logical_unitary(result: CompilationResult) -> np.ndarray:
    """P(perm) U(decode) U(circuit): the compiled circuit expressed on logical qubits."""
    plan = decode_plan(result.final_flow)
    u = circuit_unitary(result.circuit + plan.circuit)
    return permutation_unitary(plan.permutation) @ u


def logical_equiv(result: CompilationResult, reference: np.ndarray) -> float:
    """Fidelity between the decoded compiled circuit and a logical reference unitary."""
    return fidelity(logical_unitary(result), reference)


def _kron_all(mats: list[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def z_diagonal(n: int) -> np.ndarray:
    """Row i holds the Z eigenvalue (+1/-1) of logical qubit i on every basis state."""
    idx = np.arange(2**n)
    return np.array([1 - 2 * ((idx >> (n - 1 - i)) & 1) for i in range(n)], dtype=float)


def qaoa_reference(inst: QAOAInstance) -> np.ndarray:
    """prod_j exp(-i beta_j H_X) exp(-i gamma_j H_P) with H_P = sum J_ij Z_i Z_j + sum h_i Z_i."""
    n = inst.n
    _check_size(n)
    z = z_diagonal(n)
    hp = np.zeros(2**n)
    for (i, j), value in inst.J.items():
        hp += value * z[i] * z[j]
    for i, value in inst.h.items():
        hp += value * z[i]
    u = np.eye(2**n, dtype=complex)
    for beta, gamma in zip(inst.betas, inst.gammas):
        rot = np.cos(beta) * np.eye(2) - 1j * np.sin(beta) * _X
        mixer = _kron_all([rot] * n)
        u = mixer @ (np.exp(-1j * gamma * hp)[:, None] * u)
    return u


def dft_matrix(n: int) -> np.ndarray:
    """Quantum Fourier transform F[k, x] = exp(2 pi i k x / 2^n) / sqrt(2^n)."""
    _check_size(n)
    dim = 2**n
    k = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)


def bit_reversal(n: int) -> np.ndarray:
    return permutation_unitary(tuple(range(n - 1, -1, -1)))
