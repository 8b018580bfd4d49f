"""Text format for dynamic circuits: a small OpenQASM-3 subset.

Grammar (statements are ``;``-terminated, ``//`` starts a comment):

    qubit[n] q;                 bit[m] c;
    h|x|y|z|s|t q[i];           p|rx|rz(angle) q[i];
    cx|cz q[i], q[j];           cp(angle) q[i], q[j];
    c[i] = measure q[j];        reset q[i];
    if (lit & lit & ...) <gate statement>;
    c[k] = c[k] ^ (lit & ...);  c[k] = c[k] ^ true;

where ``lit`` is ``c[i]`` or ``!c[i]`` and angles are decimal literals.
Opaque gates are declared by a ``// matrix <label>: re im re im re im re im``
comment (row-major 2x2) and used as ``<label> q[i];``. Emission is
deterministic: fixed ordering, 17-significant-digit floats, so identical
circuits produce byte-identical text.
"""

from __future__ import annotations

import re

from .ir import (
    Circuit,
    ClassicalToggle,
    Condition,
    Gate,
    GateKind,
    Measure,
    Reset,
    opaque_kind,
    validate,
)

__all__ = [
    "QasmError",
    "QasmSyntaxError",
    "QasmSemanticError",
    "QasmUnsupportedError",
    "parse",
    "emit",
]

_FIXED_GATES = ("h", "x", "y", "z", "s", "t")
_PARAM_GATES = ("p", "rx", "rz")
_TWO_QUBIT = ("cx", "cz")


class QasmError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.col = col


class QasmSyntaxError(QasmError):
    pass


class QasmSemanticError(QasmError):
    pass


class QasmUnsupportedError(QasmError):
    pass


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_RE_QUBIT_DECL = re.compile(r"^qubit\[(\d+)\]\s+(\w+)$")
_RE_BIT_DECL = re.compile(r"^bit\[(\d+)\]\s+(\w+)$")
_RE_FIXED = re.compile(r"^([a-z_][a-z0-9_]*)\s+q\[(\d+)\]$")
_RE_PARAM = re.compile(rf"^(p|rx|rz)\(({_NUM})\)\s+q\[(\d+)\]$")
_RE_TWOQ = re.compile(r"^(cx|cz)\s+q\[(\d+)\]\s*,\s*q\[(\d+)\]$")
_RE_CP = re.compile(rf"^cp\(({_NUM})\)\s+q\[(\d+)\]\s*,\s*q\[(\d+)\]$")
_RE_MEASURE = re.compile(r"^c\[(\d+)\]\s*=\s*measure\s+q\[(\d+)\]$")
_RE_RESET = re.compile(r"^reset\s+q\[(\d+)\]$")
_RE_IF = re.compile(r"^if\s*\((.*?)\)\s*(.+)$")
_RE_TOGGLE = re.compile(r"^c\[(\d+)\]\s*=\s*c\[(\d+)\]\s*\^\s*(.+)$")
_RE_LIT = re.compile(r"^(!?)c\[(\d+)\]$")
_RE_MATRIX = re.compile(r"^//\s*matrix\s+([a-z_][a-z0-9_]*)\s*:\s*(.+)$")
_RE_NAME = re.compile(r"^//\s*circuit:\s*(.*)$")

_UNSUPPORTED_HINTS = (
    "barrier",
    "gate ",
    "for ",
    "while ",
    "def ",
    "delay",
    "gphase",
    "swap",
    "ccx",
)


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _parse_literals(text: str, line: int) -> tuple[tuple[int, bool], ...]:
    parts = [p.strip() for p in text.split("&")]
    literals = []
    for part in parts:
        m = _RE_LIT.match(part)
        if not m:
            raise QasmSyntaxError(f"bad condition literal {part!r}", line)
        literals.append((int(m.group(2)), m.group(1) != "!"))
    return tuple(literals)


def _parse_gate_statement(stmt: str, line: int, matrices: dict[str, GateKind]):
    m = _RE_PARAM.match(stmt)
    if m:
        name, angle, q = m.group(1), float(m.group(2)), int(m.group(3))
        return Gate(GateKind(name, angle=angle), (q,), (), Condition(), source_line=line)
    m = _RE_TWOQ.match(stmt)
    if m:
        name, c, t = m.group(1), int(m.group(2)), int(m.group(3))
        kind = GateKind("x" if name == "cx" else "z")
        return Gate(kind, (t,), ((c, True),), Condition(), source_line=line)
    m = _RE_CP.match(stmt)
    if m:
        angle, c, t = float(m.group(1)), int(m.group(2)), int(m.group(3))
        return Gate(GateKind("p", angle=angle), (t,), ((c, True),), Condition(), source_line=line)
    m = _RE_FIXED.match(stmt)
    if m:
        name, q = m.group(1), int(m.group(2))
        if name in _FIXED_GATES:
            return Gate(GateKind(name), (q,), (), Condition(), source_line=line)
        if name in matrices:
            return Gate(matrices[name], (q,), (), Condition(), source_line=line)
        if name in ("measure", "reset") + _PARAM_GATES + _TWO_QUBIT + ("cp",):
            raise QasmSyntaxError(f"malformed statement {stmt!r}", line)
        raise QasmSemanticError(
            f"unknown gate {name!r}; opaque gates need a preceding matrix annotation", line
        )
    return None


def parse(text: str) -> Circuit:
    n_qubits: int | None = None
    n_clbits: int | None = None
    name = ""
    matrices: dict[str, GateKind] = {}
    instructions = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        m = _RE_MATRIX.match(raw.strip())
        if m:
            label, numbers = m.group(1), m.group(2).split()
            if len(numbers) != 8:
                raise QasmSyntaxError(
                    f"matrix annotation for {label!r} needs 8 numbers", lineno
                )
            vals = [float(x) for x in numbers]
            entries = [complex(vals[i], vals[i + 1]) for i in range(0, 8, 2)]
            matrices[label] = opaque_kind(label, entries)
            continue
        m = _RE_NAME.match(raw.strip())
        if m:
            name = m.group(1).strip()
            continue
        code = raw.split("//", 1)[0]
        if not code.strip():
            continue
        if not code.rstrip().endswith(";"):
            raise QasmSyntaxError("statement is not ';'-terminated", lineno)
        for stmt in code.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            col = raw.find(stmt.split()[0]) + 1
            if stmt.startswith("OPENQASM") or stmt.startswith("include"):
                continue  # headers tolerated and ignored on input, never emitted
            m = _RE_QUBIT_DECL.match(stmt)
            if m:
                if m.group(2) != "q":
                    raise QasmSemanticError("the qubit register must be named q", lineno, col)
                n_qubits = int(m.group(1))
                continue
            m = _RE_BIT_DECL.match(stmt)
            if m:
                if m.group(2) != "c":
                    raise QasmSemanticError("the bit register must be named c", lineno, col)
                n_clbits = int(m.group(1))
                continue
            m = _RE_MEASURE.match(stmt)
            if m:
                instructions.append(
                    Measure(int(m.group(2)), int(m.group(1)), source_line=lineno)
                )
                continue
            m = _RE_RESET.match(stmt)
            if m:
                instructions.append(Reset(int(m.group(1)), source_line=lineno))
                continue
            m = _RE_TOGGLE.match(stmt)
            if m:
                target, source, rhs = int(m.group(1)), int(m.group(2)), m.group(3).strip()
                if target != source:
                    raise QasmSemanticError(
                        "toggles must read and write the same bit", lineno, col
                    )
                if rhs.startswith("(") and rhs.endswith(")"):
                    rhs = rhs[1:-1].strip()
                product = () if rhs == "true" else _parse_literals(rhs, lineno)
                instructions.append(ClassicalToggle(target, product, source_line=lineno))
                continue
            m = _RE_IF.match(stmt)
            if m:
                cond_text, inner = m.group(1).strip(), m.group(2).strip()
                literals = () if cond_text == "true" else _parse_literals(cond_text, lineno)
                gate = _parse_gate_statement(inner, lineno, matrices)
                if gate is None:
                    raise QasmUnsupportedError(
                        f"only gate statements may be conditioned, got {inner!r}", lineno, col
                    )
                instructions.append(
                    Gate(gate.kind, gate.targets, gate.controls, Condition(literals), source_line=lineno)
                )
                continue
            gate = _parse_gate_statement(stmt, lineno, matrices)
            if gate is not None:
                instructions.append(gate)
                continue
            head = stmt.split("(")[0].split()[0] if stmt else stmt
            if any(stmt.startswith(h) for h in _UNSUPPORTED_HINTS):
                raise QasmUnsupportedError(f"construct {head!r} is outside the subset", lineno, col)
            raise QasmSyntaxError(f"cannot parse statement {stmt!r}", lineno, col)

    if n_qubits is None or n_clbits is None:
        raise QasmSemanticError("missing qubit[...] q; or bit[...] c; declaration")
    circuit = Circuit(n_qubits, n_clbits, tuple(instructions), name)
    errors = validate(circuit)
    if errors:
        raise QasmSemanticError("; ".join(errors))
    return circuit


def _literals_text(literals) -> str:
    return " & ".join(("" if pol else "!") + f"c[{b}]" for b, pol in literals)


def _gate_text(gate: Gate) -> str:
    kind = gate.kind
    if kind.name == "u":
        if gate.controls:
            raise QasmUnsupportedError("controlled opaque gates cannot be serialized")
        return f"{kind.label} q[{gate.targets[0]}];"
    if gate.controls:
        (c, pol), = gate.controls
        if not pol:
            raise QasmUnsupportedError("negative quantum controls cannot be serialized")
        t = gate.targets[0]
        if kind.name == "x":
            return f"cx q[{c}], q[{t}];"
        if kind.name == "z":
            return f"cz q[{c}], q[{t}];"
        if kind.name == "p":
            return f"cp({_fmt(kind.angle)}) q[{c}], q[{t}];"
        raise QasmUnsupportedError(f"controlled {kind.name} is outside the subset")
    q = gate.targets[0]
    if kind.name in _PARAM_GATES:
        return f"{kind.name}({_fmt(kind.angle)}) q[{q}];"
    return f"{kind.name} q[{q}];"


def emit(circuit: Circuit) -> str:
    """Deterministic text for a circuit; ``parse(emit(c))`` reproduces ``c``."""
    lines: list[str] = []
    if circuit.name:
        lines.append(f"// circuit: {circuit.name}")
    declared: set[str] = set()
    for instr in circuit.instructions:
        if isinstance(instr, Gate) and instr.kind.name == "u" and instr.kind.label not in declared:
            numbers = " ".join(
                f"{_fmt(z.real)} {_fmt(z.imag)}" for z in instr.kind.matrix
            )
            lines.append(f"// matrix {instr.kind.label}: {numbers}")
            declared.add(instr.kind.label)
    lines.append(f"qubit[{circuit.n_qubits}] q;")
    lines.append(f"bit[{circuit.n_clbits}] c;")
    for instr in circuit.instructions:
        if isinstance(instr, Gate):
            text = _gate_text(instr)
            if not instr.condition.always:
                text = f"if ({_literals_text(instr.condition.literals)}) {text}"
            lines.append(text)
        elif isinstance(instr, Measure):
            lines.append(f"c[{instr.bit}] = measure q[{instr.qubit}];")
        elif isinstance(instr, Reset):
            lines.append(f"reset q[{instr.qubit}];")
        else:
            rhs = "true" if not instr.product else f"({_literals_text(instr.product)})"
            lines.append(f"c[{instr.target}] = c[{instr.target}] ^ {rhs};")
    return "\n".join(lines) + "\n"
