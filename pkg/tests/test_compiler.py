from __future__ import annotations

import json
import math

import numpy as np
import pytest

from lpc.circuit import HALF_PI, Circuit, cnot, cphase, h, resource_report, rz, rzz, two_qubit_depth
from lpc.compiler import (
    QAOAInstance,
    ScheduleError,
    compile_qaoa,
    compile_qft,
    decompose_cphase,
    hadamard_as_rotations,
    lower_cnot_to_rzz,
    mixer_layer,
    phase_separator_schedule,
    wave_schedule,
)
from lpc.parity import FlowState, initial_state, members, replay
from lpc.sim import bit_reversal, circuit_unitary, dft_matrix, fidelity, logical_equiv, qaoa_reference

ALL_PAIRS = lambda n: {(i, j) for i in range(n) for j in range(i + 1, n)}  # noqa: E731


def exposed(states, n):
    return {members(x) for s in states for x in s.labels} & (ALL_PAIRS(n) | {(i,) for i in range(n)})


# --- schedule -----------------------------------------------------------------


def test_wave_schedule_size_and_final_state():
    for n in range(2, 20):
        cnots = wave_schedule(n)
        assert len(cnots) == n * n - 1
        final = replay(initial_state(n), cnots)[-1]
        assert final.labels == tuple(1 << (n - 1 - k) for k in range(n))


def test_wave_schedule_n6_wave_boundaries():
    states = replay(initial_state(6), wave_schedule(6))
    fmt = lambda s: " ".join("".join(map(str, m)) for m in s.as_sets())  # noqa: E731
    assert fmt(states[5]) == "01 12 23 34 45 5"
    assert fmt(states[10]) == "01 02 03 04 05 0"
    assert fmt(states[15]) == "12 23 34 45 5 0"
    assert fmt(states[-1]) == "5 4 3 2 1 0"


@pytest.mark.parametrize("n", range(2, 33))
def test_phase_separator_covers_everything_by_replay(n):
    sched = phase_separator_schedule(n)
    states = replay(initial_state(n), sched.cnots)
    assert exposed(states, n) == ALL_PAIRS(n) | {(i,) for i in range(n)}
    assert set(sched.coverage) == exposed(states, n)
    assert all(abs(c - t) == 1 for c, t in sched.cnots)
    assert sum(len(layer) for layer in sched.layers) == len(sched.cnots)


def test_phase_separator_measured_counts():
    # Shortest covering prefix of the wave sequence: n^2 - 6 CNOTs for n >= 3.
    assert len(phase_separator_schedule(2).cnots) == 1
    assert len(phase_separator_schedule(3).cnots) == 3
    for n in range(4, 33):
        assert len(phase_separator_schedule(n).cnots) == n * n - 6


# --- mixer --------------------------------------------------------------------


def test_mixer_on_singletons_is_plain_rx():
    gates = mixer_layer(initial_state(4), 0.3)
    assert [g.kind for g in gates] == ["RX"] * 4
    assert all(g.angle == pytest.approx(0.6) for g in gates)


def test_mixer_zero_beta_is_identity():
    flow = phase_separator_schedule(4).states[-1]
    assert mixer_layer(flow, 0.0) == []
    kept = Circuit(4, tuple(mixer_layer(flow, 0.0, keep_zero_rotations=True)))
    assert fidelity(circuit_unitary(kept), np.eye(16)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", range(4, 12))
def test_mixer_budget_on_final_spanning_line(n):
    flow = phase_separator_schedule(n).states[-1]
    frag = Circuit(n, tuple(mixer_layer(flow, 0.4)))
    rep = resource_report(frag)
    assert rep.n_cnot <= 2 * (n - 2)
    assert rep.two_qubit_depth <= 4


def test_mixer_rejects_wide_support():
    with pytest.raises(ScheduleError):
        mixer_layer(FlowState.from_sets([{0, 1}, {1}, {1, 2}]), 0.1)


def test_mixer_realises_logical_x_rotations():
    rng = np.random.default_rng(3)
    for n in range(2, 7):
        states = phase_separator_schedule(n).states
        usable = [s for s in states if all(len(s.support(i)) <= 2 for i in range(n))]
        assert states[-1] in usable
        for state in usable:
            beta = rng.uniform(-1, 1)
            try:
                frag = Circuit(n, tuple(mixer_layer(state, beta)))
            except ScheduleError:
                continue  # two-position support that is not a neighbouring pair
            # In the encoded frame logical X_i acts as X on every position holding i.
            x = np.array([[0, 1], [1, 0]])
            u = np.eye(2**n, dtype=complex)
            for i in range(n):
                sup = state.support(i)
                xs = [x if k in sup else np.eye(2) for k in range(n)]
                p = np.eye(1)
                for m in xs:
                    p = np.kron(p, m)
                u = (np.cos(beta) * np.eye(2**n) - 1j * np.sin(beta) * p) @ u
            assert fidelity(circuit_unitary(frag), u) == pytest.approx(1, abs=1e-12)


# --- QAOA ---------------------------------------------------------------------


def test_qaoa_rejects_p0():
    with pytest.raises(ValueError):
        compile_qaoa(QAOAInstance(3, {(0, 1): 1.0}, {}, (), ()))


def test_qaoa_instance_json_roundtrip():
    inst = QAOAInstance.random(4, seed=2, p=2)
    again = QAOAInstance.from_json(json.dumps(inst.to_dict()))
    assert again == inst
    with pytest.raises(ValueError):
        QAOAInstance.from_dict({"n": 2, "p": 2, "J": [[0, 1, 1.0]], "h": [0, 0], "betas": [0.1], "gammas": [0.2]})
    with pytest.raises(ValueError):
        QAOAInstance(2, {(0, 0): 1.0}, {}, (0.1,), (0.1,))


def test_qaoa_n3_counts():
    res = compile_qaoa(QAOAInstance.random(3, seed=1))
    assert res.report.n_swap == 0
    assert res.report.n2q == 7
    lowered = resource_report(lower_cnot_to_rzz(res.circuit))
    assert lowered.n2q == 7 and lowered.n_cnot == 0


@pytest.mark.parametrize("n", range(2, 33))
def test_qaoa_measured_entangling_count(n):
    res = compile_qaoa(QAOAInstance.random(n, seed=n))
    assert res.report.n_swap == 0
    expected = 3 if n == 2 else n * n - 2
    assert res.report.n2q == expected
    assert res.coverage >= set(QAOAInstance.random(n, seed=n).J)
    assert res.circuit.is_lnn()


def test_qaoa_sparse_instance_uses_only_needed_rotations():
    inst = QAOAInstance(5, {(0, 4): 0.5}, {2: 0.3}, (0.2,), (0.7,))
    res = compile_qaoa(inst)
    assert sum(g.kind == "RZ" for g in res.circuit) == 2
    assert logical_equiv(res, qaoa_reference(inst)) >= 1 - 1e-9


def test_qaoa_all_zero_angles_decode_to_identity():
    inst = QAOAInstance(4, {(i, j): 0.0 for i in range(4) for j in range(i + 1, 4)}, {}, (0.0,), (0.0,))
    res = compile_qaoa(inst, keep_zero_rotations=True)
    # The physical circuit is a nontrivial CNOT permutation; only the decoded frame is the identity.
    assert fidelity(circuit_unitary(res.circuit), np.eye(16)) < 1 - 1e-6
    assert logical_equiv(res, np.eye(16)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n, p", [(2, 1), (3, 1), (5, 1), (4, 2), (5, 3), (6, 2)])
def test_qaoa_matches_reference(n, p):
    inst = QAOAInstance.random(n, seed=10 * n + p, p=p)
    assert logical_equiv(compile_qaoa(inst), qaoa_reference(inst)) >= 1 - 1e-9


def test_qaoa_keep_zero_rotations_flag():
    inst = QAOAInstance(3, {(0, 1): 1.0, (1, 2): 0.0}, {0: 0.0}, (0.3,), (0.2,))
    skipped = compile_qaoa(inst)
    kept = compile_qaoa(inst, keep_zero_rotations=True)
    assert sum(g.kind == "RZ" for g in kept.circuit) == sum(g.kind == "RZ" for g in skipped.circuit) + 2


# --- QFT ----------------------------------------------------------------------


def test_qft_n1():
    res = compile_qft(1)
    assert [g.kind for g in res.circuit] == ["H"]


@pytest.mark.parametrize("n", range(3, 33))
def test_qft_counts(n):
    res = compile_qft(n)
    assert res.report.n_swap == 0
    assert res.report.n_cnot == n * n - 1 == res.report.n2q
    assert two_qubit_depth(res.circuit) == 4 * n - 4
    assert res.final_flow.labels == tuple(1 << (n - 1 - k) for k in range(n))


def test_qft_n2_depth_is_three():
    res = compile_qft(2)
    assert res.report.n_cnot == 3 and res.report.two_qubit_depth == 3


def test_qft_hadamards_on_end_qubits_are_physical():
    for n in range(2, 8):
        kinds = [g.kind for g in compile_qft(n).circuit]
        assert kinds.count("H") == 2
        assert kinds.count("RX") == n - 2


@pytest.mark.parametrize("n", range(1, 8))
def test_qft_matches_dft(n):
    res = compile_qft(n)
    assert fidelity(circuit_unitary(res.circuit), dft_matrix(n)) >= 1 - 1e-9
    assert logical_equiv(res, bit_reversal(n) @ dft_matrix(n)) >= 1 - 1e-9


# --- identities ---------------------------------------------------------------


@pytest.mark.parametrize("phi, target", [(0.0, np.eye(4)), (math.pi, np.diag([1, 1, 1, -1])), (HALF_PI, np.diag([1, 1, 1, 1j]))])
def test_decompose_cphase(phi, target):
    a, b, c = decompose_cphase(phi)
    u = circuit_unitary(Circuit(2, (rz(0, a), rzz(0, 1, b), rz(1, c))))
    assert fidelity(u, target) >= 1 - 1e-12
    assert fidelity(u, circuit_unitary(Circuit(2, (cphase(0, 1, phi),)))) >= 1 - 1e-12


def test_hadamard_decomposition():
    u = circuit_unitary(Circuit(1, tuple(hadamard_as_rotations(0))))
    assert fidelity(u, circuit_unitary(Circuit(1, (h(0),)))) >= 1 - 1e-12


@pytest.mark.parametrize("c, t", [(0, 1), (1, 0)])
def test_cnot_lowering(c, t):
    lowered = lower_cnot_to_rzz(Circuit(2, (cnot(c, t),)))
    rep = resource_report(lowered)
    assert rep.n2q == 1 and rep.n_rzz == 1
    assert all(g.angle == HALF_PI for g in lowered if g.kind == "RZZ")
    assert fidelity(circuit_unitary(lowered), circuit_unitary(Circuit(2, (cnot(c, t),)))) >= 1 - 1e-12


def test_lowering_is_idempotent_on_two_qubit_count():
    res = compile_qaoa(QAOAInstance.random(3, seed=4))
    once = lower_cnot_to_rzz(res.circuit)
    assert resource_report(lower_cnot_to_rzz(once)).n2q == resource_report(once).n2q == 7
    assert {g.angle for g in once if g.is_two_qubit} == {HALF_PI}
