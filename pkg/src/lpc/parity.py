"""Parity-label tracking for CNOT circuits on a linear chain.

Each physical position stores the XOR of a subset of logical computational-basis
values. A label is that subset, held as an int bitmask (bit i set means logical
qubit i participates). CNOT(c -> t) maps label[t] to label[t] XOR label[c].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .circuit import Circuit, cnot


class FlowError(ValueError):
    """Raised on invalid flow states or non-adjacent CNOTs."""


def weight(label: int) -> int:
    return bin(label).count("1")


def members(label: int) -> tuple[int, ...]:
    """Logical indices in a label, ascending."""
    out = []
    i = 0
    while label:
        if label & 1:
            out.append(i)
        label >>= 1
        i += 1
    return tuple(out)


def label_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask ^= 1 << i
    return mask


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of bitmask rows (xor-basis insertion keyed by leading bit)."""
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = row
                break
            row ^= basis[top]
    return len(basis)


@dataclass(frozen=True)
class FlowState:
    n: int
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if len(self.labels) != self.n:
            raise FlowError(f"expected {self.n} labels, got {len(self.labels)}")
        if any(x < 0 or x >> self.n for x in self.labels):
            raise FlowError("label mentions a logical index outside 0..n-1")

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]], n: int | None = None) -> FlowState:
        labels = [label_of(s) for s in sets]
        return cls(len(labels) if n is None else n, tuple(labels))

    def as_sets(self) -> list[tuple[int, ...]]:
        return [members(x) for x in self.labels]

    def support(self, logical: int) -> tuple[int, ...]:
        """Positions whose label contains ``logical``; this is where its X operator acts."""
        return tuple(k for k, x in enumerate(self.labels) if x >> logical & 1)

    def max_weight(self) -> int:
        return max((weight(x) for x in self.labels), default=0)

    def is_full_rank(self) -> bool:
        return gf2_rank(self.labels) == self.n


def initial_state(n: int) -> FlowState:
    if n < 1:
        raise FlowError("n must be at least 1")
    return FlowState(n, tuple(1 << k for k in range(n)))


def apply_cnot(state: FlowState, control: int, target: int, lnn: bool = True) -> FlowState:
    if control == target:
        raise FlowError("control and target must differ")
    if not (0 <= control < state.n and 0 <= target < state.n):
        raise FlowError(f"position out of range: ({control}, {target})")
    if lnn and abs(control - target) != 1:
        raise FlowError(f"CNOT({control}->{target}) is not nearest-neighbour")
    labels = list(state.labels)
    labels[target] ^= labels[control]
    return FlowState(state.n, tuple(labels))


def replay(state: FlowState, pairs: Iterable[tuple[int, int]], lnn: bool = True) -> list[FlowState]:
    """All intermediate states, starting with ``state``, under a sequence of (control, target)."""
    out = [state]
    for c, t in pairs:
        out.append(apply_cnot(out[-1], c, t, lnn))
    return out


def is_spanning_line(state: FlowState) -> bool:
    union = 0
    for x in state.labels:
        union |= x
    return (
        union == (1 << state.n) - 1
        and any(weight(x) == 1 for x in state.labels)
        and state.is_full_rank()
    )


def locate(state: FlowState, label: int | Iterable[int]) -> int | None:
    if not isinstance(label, int):
        label = label_of(label)
    for k, x in enumerate(state.labels):
        if x == label:
            return k
    return None


def dump(state: FlowState) -> str:
    """One ``position: (i,j,...)`` line per chain position."""
    return "\n".join(f"{k}: ({','.join(map(str, members(x)))})" for k, x in enumerate(state.labels))


@dataclass(frozen=True)
class DecodePlan:
    circuit: Circuit
    permutation: tuple[int, ...]  # permutation[k] = logical index held at position k after decoding

    @property
    def cnots(self) -> list[tuple[int, int]]:
        return [g.qubits for g in self.circuit.gates]


def decode_plan(state: FlowState) -> DecodePlan:
    """CNOT-only nearest-neighbour circuit that turns every label into a singleton.

    Runs the elimination on the chain and on its mirror image and keeps the
    shorter circuit.
    """
    n = state.n
    direct = _eliminate(state.labels)
    ops_m, perm_m = _eliminate(state.labels[::-1])
    mirrored = ([(n - 1 - c, n - 1 - t) for c, t in ops_m], perm_m[::-1])
    ops, perm = mirrored if len(mirrored[0]) < len(direct[0]) else direct
    return DecodePlan(Circuit(n, tuple(cnot(c, t) for c, t in ops), lnn=True), tuple(perm))


def _eliminate(labels: Sequence[int]) -> tuple[list[tuple[int, int]], list[int]]:
    """Gaussian elimination by neighbour row operations.

    Forward pass: for each position p pick the unused column that is cheapest to
    pivot at p, pull it to p by a descending ladder, then clear it from the rows
    below by a fill/clear cascade. Backward pass: clear each pivot column from the
    rows above its pivot with the mirrored cascade. All row operations are between
    neighbours, so the result is LNN.
    """
    n = len(labels)
    rows = list(labels)
    ops: list[tuple[int, int]] = []

    def op(c: int, t: int) -> None:
        rows[t] ^= rows[c]
        ops.append((c, t))

    pivots: list[int] = []
    unused = set(range(n))
    for p in range(n):
        best: tuple[int, int, int, int] | None = None
        for c in sorted(unused):
            hits = [k for k in range(p, n) if rows[k] >> c & 1]
            if not hits:
                continue
            q, m = hits[0], hits[-1]
            fills = sum(1 for k in range(q + 1, m + 1) if not rows[k] >> c & 1)
            cost = (q - p) + fills + (m - p)
            if best is None or cost < best[0]:
                best = (cost, c, q, m)
        if best is None:
            raise FlowError("label matrix is rank-deficient; cannot decode")
        _, c, q, m = best
        for k in range(q - 1, p - 1, -1):
            op(k + 1, k)
        for k in range(p + 1, m + 1):
            if not rows[k] >> c & 1:
                op(k - 1, k)
        for k in range(m, p, -1):
            op(k - 1, k)
        pivots.append(c)
        unused.discard(c)

    for p in range(n - 1, 0, -1):
        c = pivots[p]
        hits = [k for k in range(p) if rows[k] >> c & 1]
        if not hits:
            continue
        m = hits[0]
        for k in range(p - 1, m - 1, -1):
            if not rows[k] >> c & 1:
                op(k + 1, k)
        for k in range(m, p):
            op(k + 1, k)

    if any(weight(x) != 1 for x in rows):
        raise FlowError("decoding did not reach singletons; tracker bug")
    return ops, [x.bit_length() - 1 for x in rows]
