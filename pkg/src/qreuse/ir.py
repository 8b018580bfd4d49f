"""Dynamic-circuit intermediate representation and the analyses built on it.

A circuit is a flat, ordered list of instructions over a register of qubits
and a register of classical bits. Four instruction variants cover the
dynamic-circuit primitives: gates (optionally quantum-controlled and/or
classically conditioned), mid-circuit measurement, reset, and classical XOR
fix-ups. Circuits are immutable values; rewrite passes return new circuits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

__all__ = [
    "GateKind",
    "Condition",
    "Gate",
    "Measure",
    "Reset",
    "ClassicalToggle",
    "Instruction",
    "Circuit",
    "CircuitBuilder",
    "ConeResult",
    "H_KIND",
    "X_KIND",
    "Y_KIND",
    "Z_KIND",
    "S_KIND",
    "T_KIND",
    "p_kind",
    "rx_kind",
    "rz_kind",
    "opaque_kind",
    "validate",
    "forward_cone",
    "depth",
    "two_qubit_gate_count",
    "is_diagonal",
    "is_bitflip",
    "instruction_qubits",
    "read_bits",
    "written_bit",
    "wire_positions",
]

GATE_NAMES = frozenset({"h", "x", "y", "z", "s", "t", "p", "rx", "rz", "u"})
PARAMETRIC = frozenset({"p", "rx", "rz"})
_DIAGONAL_NAMES = frozenset({"z", "s", "t", "p", "rz"})

# Off-diagonal magnitude below this counts as diagonal for opaque matrices;
# also the angle tolerance used by tests.
ANGLE_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class GateKind:
    """A single-qubit gate alphabet entry.

    ``p``/``rx``/``rz`` carry exactly one angle (radians). ``u`` is an opaque
    named gate with an explicit 2x2 unitary (row-major) so the simulator can
    still execute it.
    """

    name: str
    angle: float | None = None
    label: str | None = None
    matrix: tuple[complex, complex, complex, complex] | None = None

    def __post_init__(self) -> None:
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate kind {self.name!r}")
        if self.name in PARAMETRIC and self.angle is None:
            raise ValueError(f"{self.name} requires an angle")
        if self.name not in PARAMETRIC and self.name != "u" and self.angle is not None:
            raise ValueError(f"{self.name} takes no angle")
        if self.name == "u" and (self.label is None or self.matrix is None):
            raise ValueError("opaque gates need a label and a 2x2 matrix")


H_KIND = GateKind("h")
X_KIND = GateKind("x")
Y_KIND = GateKind("y")
Z_KIND = GateKind("z")
S_KIND = GateKind("s")
T_KIND = GateKind("t")


def p_kind(angle: float) -> GateKind:
    return GateKind("p", angle=float(angle))


def rx_kind(angle: float) -> GateKind:
    return GateKind("rx", angle=float(angle))


def rz_kind(angle: float) -> GateKind:
    return GateKind("rz", angle=float(angle))


def opaque_kind(label: str, matrix, angle: float | None = None) -> GateKind:
    flat = tuple(complex(x) for x in matrix)
    if len(flat) != 4:
        raise ValueError("opaque matrix must have 4 entries (row-major 2x2)")
    return GateKind("u", angle=angle, label=label, matrix=flat)


@dataclass(frozen=True, slots=True)
class Condition:
    """Conjunction of classical-bit literals; empty means unconditional."""

    literals: tuple[tuple[int, bool], ...] = ()

    @property
    def always(self) -> bool:
        return not self.literals

    def bits(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.literals)


@dataclass(frozen=True, slots=True)
class Gate:
    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[tuple[int, bool], ...] = ()
    condition: Condition = Condition()
    source_line: int | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Measure:
    qubit: int
    bit: int
    source_line: int | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Reset:
    qubit: int
    source_line: int | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class ClassicalToggle:
    """``target ^= AND(product)``; empty product toggles unconditionally."""

    target: int
    product: tuple[tuple[int, bool], ...] = ()
    source_line: int | None = field(default=None, compare=False)


Instruction = Gate | Measure | Reset | ClassicalToggle


@dataclass(frozen=True, slots=True)
class Circuit:
    n_qubits: int
    n_clbits: int
    instructions: tuple[Instruction, ...] = ()
    name: str = ""

    def with_instructions(self, instructions) -> "Circuit":
        return replace(self, instructions=tuple(instructions))


def instruction_qubits(instr: Instruction) -> tuple[int, ...]:
    if isinstance(instr, Gate):
        return tuple(q for q, _ in instr.controls) + instr.targets
    if isinstance(instr, (Measure, Reset)):
        return (instr.qubit,)
    return ()


def read_bits(instr: Instruction) -> tuple[int, ...]:
    """Classical bits whose value the instruction consumes."""
    if isinstance(instr, Gate):
        return instr.condition.bits()
    if isinstance(instr, ClassicalToggle):
        # The XOR accumulates into the target, so the target is read too.
        return tuple(b for b, _ in instr.product) + (instr.target,)
    return ()


def written_bit(instr: Instruction) -> int | None:
    if isinstance(instr, Measure):
        return instr.bit
    if isinstance(instr, ClassicalToggle):
        return instr.target
    return None


def wire_positions(instructions, n_qubits: int) -> list[list[int]]:
    """Per-qubit list of instruction indices, in circuit order."""
    wires: list[list[int]] = [[] for _ in range(n_qubits)]
    for i, instr in enumerate(instructions):
        for q in instruction_qubits(instr):
            wires[q].append(i)
    return wires


def validate(circuit: Circuit) -> list[str]:
    """Return all invariant violations; an empty list means the circuit is ok."""
    errors: list[str] = []
    assigned = [False] * max(circuit.n_clbits, 0)

    def check_qubit(q: int, where: str) -> None:
        if not 0 <= q < circuit.n_qubits:
            errors.append(f"instr {i}: qubit {q} out of range in {where}")

    def check_clbit(b: int, where: str) -> None:
        if not 0 <= b < circuit.n_clbits:
            errors.append(f"instr {i}: clbit {b} out of range in {where}")

    for i, instr in enumerate(circuit.instructions):
        if isinstance(instr, Gate):
            for q in instr.targets:
                check_qubit(q, "targets")
            for q, _ in instr.controls:
                check_qubit(q, "controls")
            if len(instr.targets) != 1:
                errors.append(f"instr {i}: gates take exactly one target")
            if len(instr.controls) > 1:
                errors.append(f"instr {i}: at most one quantum control")
            overlap = set(instr.targets) & {q for q, _ in instr.controls}
            if overlap:
                errors.append(f"instr {i}: control/target overlap on {sorted(overlap)}")
            seen: set[int] = set()
            for b, _ in instr.condition.literals:
                check_clbit(b, "condition")
                if b in seen:
                    errors.append(f"instr {i}: clbit {b} repeated in condition")
                seen.add(b)
                if 0 <= b < circuit.n_clbits and not assigned[b]:
                    errors.append(f"instr {i}: condition reads clbit {b} before assignment")
        elif isinstance(instr, Measure):
            check_qubit(instr.qubit, "measure")
            check_clbit(instr.bit, "measure")
            if 0 <= instr.bit < circuit.n_clbits:
                assigned[instr.bit] = True
        elif isinstance(instr, Reset):
            check_qubit(instr.qubit, "reset")
        elif isinstance(instr, ClassicalToggle):
            check_clbit(instr.target, "toggle target")
            seen = set()
            for b, _ in instr.product:
                check_clbit(b, "toggle product")
                if b == instr.target:
                    errors.append(f"instr {i}: toggle target {b} appears in its own product")
                if b in seen:
                    errors.append(f"instr {i}: clbit {b} repeated in toggle product")
                seen.add(b)
                if 0 <= b < circuit.n_clbits and not assigned[b]:
                    errors.append(f"instr {i}: toggle reads clbit {b} before assignment")
            if 0 <= instr.target < circuit.n_clbits and not assigned[instr.target]:
                errors.append(f"instr {i}: toggle target {instr.target} unassigned")
        else:  # pragma: no cover - exhaustive union
            errors.append(f"instr {i}: unknown instruction {instr!r}")
    return errors


def is_diagonal(instr: Instruction) -> bool:
    """True when the gate's unitary is diagonal in the computational basis.

    Quantum controls and classical conditions preserve diagonality; opaque
    gates are judged by their declared matrix.
    """
    if not isinstance(instr, Gate):
        return False
    if instr.kind.name in _DIAGONAL_NAMES:
        return True
    if instr.kind.name == "u":
        m = instr.kind.matrix
        return abs(m[1]) <= ANGLE_TOL and abs(m[2]) <= ANGLE_TOL
    return False


def is_bitflip(instr: Instruction) -> bool:
    """True for an X gate without quantum controls (conditions allowed)."""
    return isinstance(instr, Gate) and instr.kind.name == "x" and not instr.controls


@dataclass(frozen=True, slots=True)
class ConeResult:
    instructions: frozenset[int]
    qubits: frozenset[int]
    measured_bits: frozenset[int]
    # measured_bits plus toggle targets; the full set of bits the cone writes
    written_bits: frozenset[int]


def forward_cone(circuit: Circuit, start: int) -> ConeResult:
    """Forward reachability from instruction ``start``.

    Propagation follows qubit wires (two-qubit gates fan out to both wires)
    and stops at a Reset, whose output no longer depends on anything earlier.
    A reached Measure or ClassicalToggle additionally reaches every later
    instruction that reads the bit it writes.
    """
    instrs = circuit.instructions
    if not 0 <= start < len(instrs):
        raise IndexError(f"instruction position {start} out of range")
    wires = wire_positions(instrs, circuit.n_qubits)
    next_on_wire: dict[tuple[int, int], int] = {}
    for q, positions in enumerate(wires):
        for a, b in zip(positions, positions[1:]):
            next_on_wire[(a, q)] = b
    readers: dict[int, list[int]] = {}
    for i, instr in enumerate(instrs):
        for b in read_bits(instr):
            readers.setdefault(b, []).append(i)

    seen: set[int] = set()
    queue: deque[int] = deque([start])
    while queue:
        i = queue.popleft()
        if i in seen:
            continue
        seen.add(i)
        for q in instruction_qubits(instrs[i]):
            j = next_on_wire.get((i, q))
            if j is not None and not isinstance(instrs[j], Reset):
                queue.append(j)
        b = written_bit(instrs[i])
        if b is not None:
            for j in readers.get(b, ()):
                if j > i:
                    queue.append(j)

    qubits = frozenset(q for i in seen for q in instruction_qubits(instrs[i]))
    measured = frozenset(instrs[i].bit for i in seen if isinstance(instrs[i], Measure))
    written = measured | frozenset(
        instrs[i].target for i in seen if isinstance(instrs[i], ClassicalToggle)
    )
    return ConeResult(frozenset(seen), qubits, measured, written)


def depth(circuit: Circuit) -> int:
    """As-soon-as-possible layer count.

    Gates, measurements, and resets each occupy one layer on every qubit they
    touch. A classically conditioned instruction lands strictly after the
    producer of every bit it reads. Toggles cost no quantum layer; they only
    forward the producer layer of their inputs.
    """
    qubit_avail = [1] * circuit.n_qubits
    bit_layer = [0] * circuit.n_clbits
    deepest = 0
    for instr in circuit.instructions:
        if isinstance(instr, ClassicalToggle):
            layer = max((bit_layer[b] for b in read_bits(instr)), default=0)
            bit_layer[instr.target] = layer
            continue
        qubits = instruction_qubits(instr)
        layer = max(qubit_avail[q] for q in qubits)
        for b in read_bits(instr):
            layer = max(layer, bit_layer[b] + 1)
        for q in qubits:
            qubit_avail[q] = layer + 1
        if isinstance(instr, Measure):
            bit_layer[instr.bit] = layer
        deepest = max(deepest, layer)
    return deepest


def two_qubit_gate_count(circuit: Circuit) -> int:
    return sum(
        1
        for instr in circuit.instructions
        if isinstance(instr, Gate) and len(instruction_qubits(instr)) == 2
    )


class CircuitBuilder:
    """Chainable helper for assembling circuits in tests and generators."""

    def __init__(self, n_qubits: int, n_clbits: int, name: str = ""):
        self.n_qubits = n_qubits
        self.n_clbits = n_clbits
        self.name = name
        self._instrs: list[Instruction] = []

    def append(self, instr: Instruction) -> "CircuitBuilder":
        self._instrs.append(instr)
        return self

    def _gate(self, kind: GateKind, target: int, controls=(), condition=()) -> "CircuitBuilder":
        cond = condition if isinstance(condition, Condition) else Condition(tuple(condition))
        return self.append(Gate(kind, (target,), tuple(controls), cond))

    def h(self, q: int, **kw) -> "CircuitBuilder":
        return self._gate(H_KIND, q, **kw)

    def x(self, q: int, **kw) -> "CircuitBuilder":
        return self._gate(X_KIND, q, **kw)

    def y(self, q: int, **kw) -> "CircuitBuilder":
        return self._gate(Y_KIND, q, **kw)

    def z(self, q: int, **kw) -> "CircuitBuilder":
        return self._gate(Z_KIND, q, **kw)

    def s(self, q: int, **kw) -> "CircuitBuilder":
        return self._gate(S_KIND, q, **kw)

    def t(self, q: int, **kw) -> "CircuitBuilder":
        return self._gate(T_KIND, q, **kw)

    def p(self, theta: float, q: int, **kw) -> "CircuitBuilder":
        return self._gate(p_kind(theta), q, **kw)

    def rx(self, theta: float, q: int, **kw) -> "CircuitBuilder":
        return self._gate(rx_kind(theta), q, **kw)

    def rz(self, theta: float, q: int, **kw) -> "CircuitBuilder":
        return self._gate(rz_kind(theta), q, **kw)

    def cx(self, control: int, target: int, **kw) -> "CircuitBuilder":
        return self._gate(X_KIND, target, controls=((control, True),), **kw)

    def cz(self, control: int, target: int, **kw) -> "CircuitBuilder":
        return self._gate(Z_KIND, target, controls=((control, True),), **kw)

    def cp(self, theta: float, control: int, target: int, **kw) -> "CircuitBuilder":
        return self._gate(p_kind(theta), target, controls=((control, True),), **kw)

    def opaque(self, label: str, matrix, target: int, controls=(), **kw) -> "CircuitBuilder":
        return self._gate(opaque_kind(label, matrix), target, controls=tuple(controls), **kw)

    def measure(self, qubit: int, bit: int) -> "CircuitBuilder":
        return self.append(Measure(qubit, bit))

    def reset(self, qubit: int) -> "CircuitBuilder":
        return self.append(Reset(qubit))

    def toggle(self, target: int, product=()) -> "CircuitBuilder":
        return self.append(ClassicalToggle(target, tuple(product)))

    def build(self, check: bool = True) -> Circuit:
        circuit = Circuit(self.n_qubits, self.n_clbits, tuple(self._instrs), self.name)
        if check:
            errors = validate(circuit)
            if errors:
                raise ValueError("invalid circuit: " + "; ".join(errors))
        return circuit
