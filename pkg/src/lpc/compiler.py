"""SWAP-free linear-chain compilation of QAOA and QFT by walking through parity labels.

A CNOT schedule moves the chain through a sequence of full-rank label states.
Logical Z and ZZ rotations are placed wherever the matching label is held by a
single position; logical X rotations wherever a logical index is held by a
single position (or, for the QAOA mixer, by two neighbours joined by a CNOT pair).
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .circuit import (
    HALF_PI,
    Circuit,
    Gate,
    ResourceReport,
    cnot,
    h,
    resource_report,
    rx,
    rz,
    rzz,
)
from .parity import FlowState, initial_state, label_of, members, replay, weight


class ScheduleError(RuntimeError):
    """A schedule failed to expose a required label; indicates a construction bug."""


# ---------------------------------------------------------------------------
# Instances and results


@dataclass(frozen=True)
class QAOAInstance:
    n: int
    J: dict[tuple[int, int], float]
    h: dict[int, float]
    betas: tuple[float, ...]
    gammas: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        couplings: dict[tuple[int, int], float] = {}
        for (i, j), value in self.J.items():
            if i == j:
                raise ValueError(f"diagonal coupling ({i},{j})")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"coupling ({i},{j}) outside 0..{self.n - 1}")
            key = (min(i, j), max(i, j))
            couplings[key] = couplings.get(key, 0.0) + float(value)
        for i in self.h:
            if not 0 <= i < self.n:
                raise ValueError(f"field index {i} outside 0..{self.n - 1}")
        if len(self.betas) != len(self.gammas):
            raise ValueError("betas and gammas must have equal length")
        object.__setattr__(self, "J", couplings)
        object.__setattr__(self, "h", {int(i): float(v) for i, v in self.h.items()})
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))

    @property
    def p(self) -> int:
        return len(self.betas)

    @classmethod
    def random(cls, n: int, seed: int = 0, p: int = 1) -> QAOAInstance:
        """Complete graph with J, h, beta, gamma drawn uniformly from [-1, 1]."""
        rng = np.random.default_rng(seed)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        J = dict(zip(pairs, rng.uniform(-1, 1, len(pairs)).tolist()))
        hs = dict(enumerate(rng.uniform(-1, 1, n).tolist()))
        betas = rng.uniform(-1, 1, p).tolist()
        gammas = rng.uniform(-1, 1, p).tolist()
        return cls(n, J, hs, tuple(betas), tuple(gammas))

    @classmethod
    def from_dict(cls, doc: dict) -> QAOAInstance:
        n = int(doc["n"])
        J = {(int(i), int(j)): float(v) for i, j, v in doc.get("J", [])}
        raw_h = doc.get("h", [])
        hs = {i: float(v) for i, v in enumerate(raw_h)} if isinstance(raw_h, list) else {
            int(i): float(v) for i, v in raw_h.items()
        }
        betas, gammas = doc["betas"], doc["gammas"]
        if "p" in doc and int(doc["p"]) != len(betas):
            raise ValueError(f"p={doc['p']} but {len(betas)} betas given")
        return cls(n, J, hs, tuple(betas), tuple(gammas))

    @classmethod
    def from_json(cls, text: str) -> QAOAInstance:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "J": [[i, j, v] for (i, j), v in sorted(self.J.items())],
            "h": [self.h.get(i, 0.0) for i in range(self.n)],
            "betas": list(self.betas),
            "gammas": list(self.gammas),
        }


@dataclass(frozen=True)
class CompilationResult:
    circuit: Circuit
    final_flow: FlowState
    coverage: frozenset[tuple[int, ...]]
    report: ResourceReport
    trace: tuple[FlowState, ...] = field(default=(), repr=False)
    phase_separator_cnots: int = 0


# ---------------------------------------------------------------------------
# CNOT schedule


def _wave(kind: str, length: int) -> list[tuple[int, int]]:
    """'R' wave: CNOT(k+1 -> k) for k = 0..L-1. 'F' wave: CNOT(k -> k+1)."""
    return [(k + 1, k) if kind == "R" else (k, k + 1) for k in range(length)]


def wave_schedule(n: int) -> list[tuple[int, int]]:
    """Full wave sequence: n^2 - 1 CNOTs, ending in the mirrored all-singleton state.

    Alternating R/F waves of shrinking length. The F wave following the i-th R
    wave builds a star around logical i, exposing every pair {i, j>i}, and after
    the preceding R wave logical i is held alone at position 0.
    """
    if n < 2:
        return []
    waves = [("R", n - 1), ("F", n - 1)]
    for i in range(1, n - 1):
        waves += [("R", n - i), ("F", n - 1 - i)]
    waves.append(("R", 1))
    return [cx for kind, length in waves for cx in _wave(kind, length)]


def asap_layers(cnots: Sequence[tuple[int, int]], n: int) -> list[list[tuple[int, int]]]:
    free = [0] * n
    layers: list[list[tuple[int, int]]] = []
    for c, t in cnots:
        layer = max(free[c], free[t])
        free[c] = free[t] = layer + 1
        if layer == len(layers):
            layers.append([])
        layers[layer].append((c, t))
    return layers


def _required_labels(n: int) -> set[int]:
    return {1 << i for i in range(n)} | {(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)}


@dataclass(frozen=True)
class PhaseSchedule:
    cnots: tuple[tuple[int, int], ...]
    layers: tuple[tuple[tuple[int, int], ...], ...]
    states: tuple[FlowState, ...]
    coverage: frozenset[tuple[int, ...]]


def phase_separator_schedule(n: int) -> PhaseSchedule:
    """Shortest prefix of :func:`wave_schedule` that exposes every pair and singleton."""
    if n < 1:
        raise ValueError("n must be at least 1")
    need = _required_labels(n)
    state = initial_state(n)
    seen = set(state.labels) & need
    states = [state]
    cnots: list[tuple[int, int]] = []
    for c, t in wave_schedule(n):
        if seen == need:
            break
        state = states[-1]
        labels = list(state.labels)
        labels[t] ^= labels[c]
        states.append(FlowState(n, tuple(labels)))
        cnots.append((c, t))
        if labels[t] in need:
            seen.add(labels[t])
    if seen != need:
        missing = sorted(members(x) for x in need - seen)
        raise ScheduleError(f"schedule for n={n} never exposes {missing}")
    coverage = frozenset(members(x) for x in seen)
    layers = tuple(tuple(layer) for layer in asap_layers(cnots, n))
    return PhaseSchedule(tuple(cnots), layers, tuple(states), coverage)


# ---------------------------------------------------------------------------
# Mixer


def mixer_layer(flow: FlowState, beta: float, keep_zero_rotations: bool = False) -> list[Gate]:
    """exp(-i beta sum_i X_i) on the logical qubits of ``flow``; leaves the flow unchanged.

    A logical index held at one position gets RX(2 beta) there. One held at two
    neighbours k, k+1 carries X_k X_{k+1}; CNOT(k -> k+1) RX_k(2 beta) CNOT(k -> k+1)
    implements exp(-i beta X_k X_{k+1}). Pair blocks are grouped by bond parity,
    so the fragment has two-qubit depth at most 4.
    """
    theta = 2 * beta
    if theta == 0 and not keep_zero_rotations:
        return []
    singles: list[int] = []
    bonds: list[int] = []
    for i in range(flow.n):
        sup = flow.support(i)
        if len(sup) == 1:
            singles.append(sup[0])
        elif len(sup) == 2 and sup[1] - sup[0] == 1:
            bonds.append(sup[0])
        else:
            raise ScheduleError(f"logical {i} has X-support {sup}; needs one position or two neighbours")
    gates = [rx(k, theta) for k in sorted(singles)]
    for parity in (0, 1):
        group = sorted(k for k in bonds if k % 2 == parity)
        gates += [cnot(k, k + 1) for k in group]
        gates += [rx(k, theta) for k in group]
        gates += [cnot(k, k + 1) for k in group]
    return gates


# ---------------------------------------------------------------------------
# QAOA


def compile_qaoa(inst: QAOAInstance, keep_zero_rotations: bool = False) -> CompilationResult:
    """Phase separator along the covering schedule, then the mixer, for each round.

    Odd rounds replay the schedule backwards (each CNOT is its own inverse), which
    visits the same label states in reverse and returns to the initial chain.
    """
    if inst.p < 1:
        raise ValueError("QAOA needs at least one round (p >= 1)")
    n = inst.n
    sched = phase_separator_schedule(n)
    gates: list[Gate] = []
    trace: list[FlowState] = []
    flow = initial_state(n)
    for r, (beta, gamma) in enumerate(zip(inst.betas, inst.gammas)):
        cnots = list(sched.cnots) if r % 2 == 0 else list(reversed(sched.cnots))
        states = replay(flow, cnots)
        rotations: dict[int, list[Gate]] = {}
        placed: set[int] = set()
        terms = [((i, j), v) for (i, j), v in sorted(inst.J.items())]
        terms += [((i,), v) for i, v in sorted(inst.h.items())]
        wanted = {label_of(idx): 2 * gamma * v for idx, v in terms if keep_zero_rotations or 2 * gamma * v != 0}
        for t, s in enumerate(states):
            for k, lab in enumerate(s.labels):
                if lab in wanted and lab not in placed:
                    placed.add(lab)
                    rotations.setdefault(t, []).append(rz(k, wanted[lab]))
        missing = set(wanted) - placed
        if missing:
            raise ScheduleError(f"labels never exposed: {sorted(members(x) for x in missing)}")
        for t in range(len(states)):
            gates += sorted(rotations.get(t, []), key=lambda g: g.qubits)
            if t < len(cnots):
                gates.append(cnot(*cnots[t]))
        flow = states[-1]
        trace += states if r == 0 else states[1:]
        gates += mixer_layer(flow, beta, keep_zero_rotations)
    circuit = Circuit(n, tuple(gates), lnn=True)
    return CompilationResult(
        circuit=circuit,
        final_flow=flow,
        coverage=sched.coverage,
        report=resource_report(circuit),
        trace=tuple(trace),
        phase_separator_cnots=len(sched.cnots),
    )


# ---------------------------------------------------------------------------
# QFT


def decompose_cphase(phi: float) -> tuple[float, float, float]:
    """CPhase(phi) = RZ_i(phi/2) RZZ_ij(-phi/2) RZ_j(phi/2) up to the phase e^{i phi/4}."""
    return (phi / 2, -phi / 2, phi / 2)


def hadamard_as_rotations(q: int) -> list[Gate]:
    """H = RZ(pi/2) RX(pi/2) RZ(pi/2) up to global phase."""
    return [rz(q, HALF_PI), rx(q, HALF_PI), rz(q, HALF_PI)]


@dataclass(frozen=True)
class _LogicalOp:
    kind: str  # "Z" (diagonal rotation on a label), "X" (RX on logical index), "H"
    label: int  # bitmask; a single bit for X and H
    angle: float | None = None

    def commutes_with(self, other: _LogicalOp) -> bool:
        if self.kind == "Z" and other.kind == "Z":
            return True
        if self.kind == "X" and other.kind == "X":
            return True
        return not self.label & other.label


def qft_program(n: int) -> list[_LogicalOp]:
    """Textbook QFT without the final reversal, as logical Z/X/H operations.

    Hadamards on the first and last logical qubit are kept whole; the others are
    split into RZ RX RZ so their Z parts can sit on labels away from position 0.
    """
    ops: list[_LogicalOp] = []
    for i in range(n):
        bit = 1 << i
        if i in (0, n - 1):
            ops.append(_LogicalOp("H", bit))
        else:
            ops += [_LogicalOp("Z", bit, HALF_PI), _LogicalOp("X", bit, HALF_PI), _LogicalOp("Z", bit, HALF_PI)]
        for j in range(i + 1, n):
            a, b, c = decompose_cphase(math.pi / 2 ** (j - i))
            ops += [_LogicalOp("Z", bit, a), _LogicalOp("Z", bit | 1 << j, b), _LogicalOp("Z", 1 << j, c)]
    return ops


class _Timeline:
    """Where each label (and each isolated logical index) is available along a state sequence."""

    def __init__(self, states: Sequence[FlowState]):
        self.label_times: dict[int, list[int]] = {}
        self.label_pos: dict[tuple[int, int], int] = {}
        self.alone_times: dict[int, list[int]] = {}
        self.alone_pos: dict[tuple[int, int], int] = {}
        for t, s in enumerate(states):
            counts: dict[int, int] = {}
            where: dict[int, int] = {}
            for k, lab in enumerate(s.labels):
                self.label_times.setdefault(lab, []).append(t)
                self.label_pos[(lab, t)] = k
                for i in members(lab):
                    counts[i] = counts.get(i, 0) + 1
                    where[i] = k
            for i, c in counts.items():
                if c == 1:
                    self.alone_times.setdefault(i, []).append(t)
                    self.alone_pos[(i, t)] = where[i]

    def earliest(self, op: _LogicalOp, after: int) -> tuple[int, int] | None:
        """(time, position) of the first feasible slot at or after ``after``."""
        if op.kind == "Z":
            times, lookup = self.label_times.get(op.label, []), lambda t: self.label_pos[(op.label, t)]
            idx = bisect.bisect_left(times, after)
            return (times[idx], lookup(times[idx])) if idx < len(times) else None
        i = op.label.bit_length() - 1
        times = self.alone_times.get(i, [])
        idx = bisect.bisect_left(times, after)
        while idx < len(times):
            t = times[idx]
            pos = self.alone_pos[(i, t)]
            if op.kind == "X" or self.label_pos.get((op.label, t)) == pos:
                return t, pos
            idx += 1
        return None


def place_program(
    n: int, cnots: Sequence[tuple[int, int]], program: Sequence[_LogicalOp]
) -> tuple[list[Gate], list[FlowState]]:
    """Interleave logical operations with a CNOT schedule at their earliest legal points.

    Each operation goes to the first state, no earlier than any preceding
    non-commuting operation, in which it is realizable by one physical gate.
    """
    states = replay(initial_state(n), cnots)
    timeline = _Timeline(states)
    slots: dict[int, list[Gate]] = {}
    # Latest placement time per logical index of: diagonal ops, X ops, H ops.
    last = {kind: [0] * n for kind in "ZXH"}
    for op in program:
        touched = members(op.label)
        blockers = [k for k in "ZXH" if not _LogicalOp(k, 1).commutes_with(_LogicalOp(op.kind, 1))]
        after = max((last[k][i] for k in blockers for i in touched), default=0)
        hit = timeline.earliest(op, after)
        if hit is None:
            raise ScheduleError(f"no slot for {op} at or after step {after}")
        t, pos = hit
        for i in touched:
            last[op.kind][i] = max(last[op.kind][i], t)
        gate = {"Z": lambda: rz(pos, op.angle), "X": lambda: rx(pos, op.angle), "H": lambda: h(pos)}[op.kind]()
        slots.setdefault(t, []).append(gate)
    gates: list[Gate] = []
    for t in range(len(states)):
        gates += slots.get(t, [])
        if t < len(cnots):
            gates.append(cnot(*cnots[t]))
    return gates, states


def compile_qft(n: int) -> CompilationResult:
    """QFT on a chain with n^2 - 1 CNOTs and no SWAPs; outputs land in reversed order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    cnots = wave_schedule(n)
    gates, states = place_program(n, cnots, qft_program(n))
    circuit = Circuit(n, tuple(gates), lnn=True)
    coverage = frozenset(members(lab) for s in states for lab in s.labels if weight(lab) <= 2)
    return CompilationResult(circuit, states[-1], coverage, resource_report(circuit), tuple(states))


# ---------------------------------------------------------------------------
# Fixed-angle lowering of CNOTs


def cnot_as_rzz(control: int, target: int) -> list[Gate]:
    """CNOT = H_t CZ H_t with CZ = RZZ(pi/2) RZ_c(-pi/2) RZ_t(-pi/2) up to phase, H split into RZ RX RZ."""
    return [
        rz(target, HALF_PI),
        rx(target, HALF_PI),
        rzz(control, target, HALF_PI),
        rz(control, -HALF_PI),
        rz(target, HALF_PI),
        rx(target, HALF_PI),
        rz(target, HALF_PI),
    ]


def lower_cnot_to_rzz(circuit: Circuit) -> Circuit:
    gates: list[Gate] = []
    for g in circuit.gates:
        gates += cnot_as_rzz(*g.qubits) if g.kind == "CNOT" else [g]
    return Circuit(circuit.num_qubits, tuple(gates), circuit.lnn)

