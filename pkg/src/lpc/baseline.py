"""SWAP-inserting reference compilers for a linear chain, and fixed-angle lowering.

These stand in for general-purpose transpilers: an odd-even transposition SWAP
network for all-to-all ZZ layers, and greedy SWAP routing for the QFT.
"""

from __future__ import annotations

import math

from .circuit import HALF_PI, Circuit, Gate, cphase, h, resource_report, rx, rz, rzz, swap
from .compiler import CompilationResult, QAOAInstance, cnot_as_rzz, decompose_cphase
from .parity import FlowState


def _layout_flow(layout: list[int]) -> FlowState:
    """Flow state of a plain routed register: position k holds logical layout[k] unencoded."""
    return FlowState(len(layout), tuple(1 << q for q in layout))


def _transposition_events(n: int) -> list[tuple[int, int]]:
    """(layer, bond) pairs of an odd-even transposition network that reverses n wires.

    Layers alternate between odd and even bonds, starting with odd bonds; after n
    layers every pair of wires has been swapped past each other exactly once.
    """
    return [(layer, k) for layer in range(n) for k in range((layer + 1) % 2, n - 1, 2)]


def swap_network_zz(
    inst: QAOAInstance, round_index: int = 0, layout: list[int] | None = None, trim_tail: bool = True
) -> tuple[list[Gate], list[int]]:
    """ZZ part (plus fields) of one QAOA round as RZZ gates threaded through a SWAP network.

    Each pair meets exactly once, at the moment the network swaps it, and gets
    RZZ(2 gamma J) just before that SWAP. With ``trim_tail`` the SWAPs whose
    positions see no later two-qubit gate are dropped; only the resulting
    layout changes. Returns the gates and the final layout (position -> logical).
    """
    n = inst.n
    gamma = inst.gammas[round_index]
    layout = list(range(n)) if layout is None else list(layout)
    gates: list[Gate] = [rz(k, 2 * gamma * inst.h[q]) for k, q in enumerate(layout) if inst.h.get(q, 0.0) != 0]

    events = _transposition_events(n)
    needed = [True] * len(events)
    if trim_tail:
        live: set[int] = set()
        for e in range(len(events) - 1, -1, -1):
            _, k = events[e]
            # The RZZ of this event always stays, so its positions are live for earlier SWAPs.
            needed[e] = bool(live & {k, k + 1})
            live |= {k, k + 1}
    for e, (_, k) in enumerate(events):
        a, b = layout[k], layout[k + 1]
        value = inst.J.get((min(a, b), max(a, b)), 0.0)
        if value != 0:
            gates.append(rzz(k, k + 1, 2 * gamma * value))
        if needed[e]:
            gates.append(swap(k, k + 1))
            layout[k], layout[k + 1] = b, a
    return gates, layout


def compile_baseline_qaoa(inst: QAOAInstance) -> CompilationResult:
    """All rounds of QAOA on a chain with SWAP routing; the mixer follows the current layout."""
    if inst.p < 1:
        raise ValueError("QAOA needs at least one round (p >= 1)")
    n = inst.n
    layout = list(range(n))
    gates: list[Gate] = []
    for r, beta in enumerate(inst.betas):
        zz, layout = swap_network_zz(inst, r, layout, trim_tail=(r == inst.p - 1))
        gates += zz
        if beta != 0:
            gates += [rx(k, 2 * beta) for k in range(n)]
    circuit = Circuit(n, tuple(gates), lnn=True)
    coverage = frozenset((i, j) for i in range(n) for j in range(i + 1, n)) if n > 1 else frozenset()
    return CompilationResult(circuit, _layout_flow(layout), coverage, resource_report(circuit))


def route_qft(n: int) -> CompilationResult:
    """Textbook QFT on a chain with greedy SWAP routing and an explicit final reversal.

    The control walks right towards each partner. After its last controlled phase
    it steps past that partner, so it parks at the right end of the still-active
    block. The closing bubble-sort pass realises the textbook final order
    reversal; with this routing the register is already reversed and the pass
    adds no SWAPs. The physical circuit equals the DFT matrix.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    layout = list(range(n))
    where = list(range(n))
    gates: list[Gate] = []

    def do_swap(k: int) -> None:
        a, b = layout[k], layout[k + 1]
        layout[k], layout[k + 1] = b, a
        where[a], where[b] = k + 1, k
        gates.append(swap(k, k + 1))

    for i in range(n):
        gates.append(h(where[i]))
        for j in range(i + 1, n):
            while abs(where[j] - where[i]) > 1:
                do_swap(where[i] if where[j] > where[i] else where[i] - 1)
            gates.append(cphase(where[i], where[j], math.pi / 2 ** (j - i)))
        if i < n - 1 and where[i] < where[n - 1]:
            do_swap(where[i])
    # Final reversal: logical wire i carries the output bit of position n-1-i.
    target = list(range(n - 1, -1, -1))
    rank = {q: target.index(q) for q in range(n)}
    for sweep in range(n):
        for k in range(n - 1):
            if rank[layout[k]] > rank[layout[k + 1]]:
                do_swap(k)
    circuit = Circuit(n, tuple(gates), lnn=True)
    coverage = frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    return CompilationResult(circuit, _layout_flow(layout), coverage, resource_report(circuit))


def _is_fixed_angle(theta: float) -> bool:
    r = math.remainder(theta, 2 * math.pi)
    return math.isclose(abs(r), HALF_PI, rel_tol=0, abs_tol=1e-12)


def rzz_as_fixed_angle(a: int, b: int, theta: float) -> list[Gate]:
    """RZZ(theta) = CNOT RZ_b(theta) CNOT, each CNOT carried by one RZZ(pi/2)."""
    return cnot_as_rzz(a, b) + [rz(b, theta)] + cnot_as_rzz(a, b)


def fixed_angle_lowering(circuit: Circuit) -> Circuit:
    """Rewrite every arbitrary-angle ZZ interaction with RZZ(pi/2) gates only.

    RZZ(+-pi/2), CNOT and SWAP pass through unchanged. CPHASE is first split into
    RZ, RZZ, RZ.
    """
    gates: list[Gate] = []
    for g in circuit.gates:
        if g.kind == "CPHASE":
            (a, b), (za, zz, zb) = g.qubits, decompose_cphase(g.angle)
            gates.append(rz(a, za))
            gates += [rzz(a, b, zz)] if _is_fixed_angle(zz) else rzz_as_fixed_angle(a, b, zz)
            gates.append(rz(b, zb))
        elif g.kind == "RZZ" and not _is_fixed_angle(g.angle):
            gates += rzz_as_fixed_angle(*g.qubits, g.angle)
        else:
            gates.append(g)
    return Circuit(circuit.num_qubits, tuple(gates), circuit.lnn)
