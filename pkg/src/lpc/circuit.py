"""Gate-level circuit representation, resource counting and a line-oriented text format.

Qubit indices are physical chain positions, 0-based. Angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

PARAMETRIC = frozenset({"RZ", "RX", "RZZ", "CPHASE"})
SINGLE_QUBIT = frozenset({"RZ", "RX", "H"})
TWO_QUBIT = frozenset({"RZZ", "CPHASE", "CNOT", "SWAP"})
KINDS = SINGLE_QUBIT | TWO_QUBIT

#: Angle of a fully entangling ZZ interaction.
HALF_PI = math.pi / 2


class CircuitError(ValueError):
    """Raised when a gate or circuit violates its structural invariants."""


class CircuitParseError(CircuitError):
    """Raised by :func:`parse`; carries the 1-based line number of the offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 1 if self.kind in SINGLE_QUBIT else 2
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.kind} takes {arity} qubit(s), got {len(self.qubits)}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.kind} needs two distinct qubits, got {self.qubits}")
        if self.kind in PARAMETRIC:
            if self.angle is None:
                raise CircuitError(f"{self.kind} requires an angle")
            angle = float(self.angle)
            if not math.isfinite(angle):
                raise CircuitError(f"non-finite angle {self.angle!r}")
            object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise CircuitError(f"{self.kind} takes no angle")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT


# Short constructors; these read better than Gate("RZ", (q,), theta) at call sites.
def rz(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), theta)


def rx(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), theta)


def h(q: int) -> Gate:
    return Gate("H", (q,))


def rzz(a: int, b: int, theta: float) -> Gate:
    return Gate("RZZ", (a, b), theta)


def cphase(a: int, b: int, phi: float) -> Gate:
    return Gate("CPHASE", (a, b), phi)


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    # Metadata only: validated on demand by check_lnn, not at construction.
    lnn: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise CircuitError("num_qubits must be non-negative")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise CircuitError(f"{g} acts outside a {self.num_qubits}-qubit register")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise CircuitError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates, self.lnn and other.lnn)

    def is_lnn(self) -> bool:
        """True when every two-qubit gate acts on chain neighbours."""
        return all(abs(g.qubits[0] - g.qubits[1]) == 1 for g in self.gates if g.is_two_qubit)

    def check_lnn(self) -> None:
        for i, g in enumerate(self.gates):
            if g.is_two_qubit and abs(g.qubits[0] - g.qubits[1]) != 1:
                raise CircuitError(f"gate {i} ({g.kind} {g.qubits}) is not nearest-neighbour")


class CircuitBuilder:
    """Mutable accumulator that freezes into a :class:`Circuit`."""

    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        self.gates: list[Gate] = []

    def append(self, gate: Gate) -> None:
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        self.gates.extend(gates)

    def build(self, lnn: bool = False) -> Circuit:
        return Circuit(self.num_qubits, tuple(self.gates), lnn)


@dataclass(frozen=True)
class ResourceReport:
    n1q: int = 0
    n2q: int = 0
    n_swap: int = 0
    n_cnot: int = 0
    n_rzz: int = 0
    n_cphase: int = 0
    two_qubit_depth: int = 0
    total_depth: int = 0

    def as_dict(self) -> dict[str, int]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _asap_depth(num_qubits: int, gates: Iterable[Gate], two_qubit_only: bool) -> int:
    free = [0] * num_qubits
    depth = 0
    for g in gates:
        if two_qubit_only and not g.is_two_qubit:
            continue
        layer = max(free[q] for q in g.qubits) + 1
        for q in g.qubits:
            free[q] = layer
        depth = max(depth, layer)
    return depth


def two_qubit_depth(circuit: Circuit) -> int:
    """Longest chain of two-qubit gates under greedy as-soon-as-possible layering."""
    return _asap_depth(circuit.num_qubits, circuit.gates, two_qubit_only=True)


def total_depth(circuit: Circuit) -> int:
    return _asap_depth(circuit.num_qubits, circuit.gates, two_qubit_only=False)


def resource_report(circuit: Circuit) -> ResourceReport:
    counts = {k: 0 for k in KINDS}
    for g in circuit.gates:
        counts[g.kind] += 1
    return ResourceReport(
        n1q=sum(counts[k] for k in SINGLE_QUBIT),
        n2q=sum(counts[k] for k in TWO_QUBIT),
        n_swap=counts["SWAP"],
        n_cnot=counts["CNOT"],
        n_rzz=counts["RZZ"],
        n_cphase=counts["CPHASE"],
        two_qubit_depth=two_qubit_depth(circuit),
        total_depth=total_depth(circuit),
    )


def _format_angle(theta: float) -> str:
    # 17 significant digits round-trip every IEEE double exactly.
    return format(theta, ".17g")


def serialize(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.num_qubits}"]
    for g in circuit.gates:
        parts = [g.kind, *map(str, g.qubits)]
        if g.angle is not None:
            parts.append(_format_angle(g.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitParseError(line, f"malformed {what} {token!r}") from None


def parse(text: str) -> Circuit:
    """Inverse of :func:`serialize`. Blank lines and ``#`` comments are ignored."""
    num_qubits: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if num_qubits is None:
            if tokens[0] != "qubits" or len(tokens) != 2:
                raise CircuitParseError(lineno, "expected header 'qubits N'")
            num_qubits = _parse_int(tokens[1], lineno, "qubit count")
            if num_qubits < 0:
                raise CircuitParseError(lineno, "qubit count must be non-negative")
            continue
        kind = tokens[0].upper()
        if kind not in KINDS:
            raise CircuitParseError(lineno, f"unknown gate kind {tokens[0]!r}")
        arity = 1 if kind in SINGLE_QUBIT else 2
        expected = arity + (1 if kind in PARAMETRIC else 0)
        if len(tokens) - 1 != expected:
            raise CircuitParseError(lineno, f"{kind} expects {expected} operand(s), got {len(tokens) - 1}")
        qubits = tuple(_parse_int(t, lineno, "qubit index") for t in tokens[1 : 1 + arity])
        for q in qubits:
            if not 0 <= q < num_qubits:
                raise CircuitParseError(lineno, f"qubit index {q} out of range for {num_qubits} qubits")
        angle = None
        if kind in PARAMETRIC:
            try:
                angle = float(tokens[-1])
            except ValueError:
                raise CircuitParseError(lineno, f"malformed angle {tokens[-1]!r}") from None
            if not math.isfinite(angle):
                raise CircuitParseError(lineno, f"non-finite angle {tokens[-1]!r}")
        try:
            gates.append(Gate(kind, qubits, angle))
        except CircuitError as exc:
            raise CircuitParseError(lineno, str(exc)) from None
    if num_qubits is None:
        raise CircuitParseError(1, "missing header 'qubits N'")
    return Circuit(num_qubits, tuple(gates))

