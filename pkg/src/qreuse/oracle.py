"""Exact reference semantics for dynamic circuits.

Dense statevector simulation with explicit branching on measurements and
resets. The observable object is the joint probability distribution over the
declared classical bits, which is what every rewrite pass must preserve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .ir import Circuit, ClassicalToggle, Gate, GateKind, Reset

__all__ = ["OutcomeDistribution", "SimulationLimitError", "distribution", "equivalent"]

_SQRT2 = math.sqrt(0.5)

_FIXED = {
    "h": np.array([[_SQRT2, _SQRT2], [_SQRT2, -_SQRT2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "t": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
}


class SimulationLimitError(RuntimeError):
    """Raised when a circuit exceeds the qubit or branch budget."""


def kind_matrix(kind: GateKind) -> np.ndarray:
    if kind.name in _FIXED:
        return _FIXED[kind.name]
    if kind.name == "p":
        return np.array([[1, 0], [0, cmath.exp(1j * kind.angle)]], dtype=complex)
    if kind.name == "rz":
        return np.array(
            [[cmath.exp(-0.5j * kind.angle), 0], [0, cmath.exp(0.5j * kind.angle)]],
            dtype=complex,
        )
    if kind.name == "rx":
        c, s = math.cos(kind.angle / 2), math.sin(kind.angle / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    return np.array(kind.matrix, dtype=complex).reshape(2, 2)


def _apply_single(state: np.ndarray, mat: np.ndarray, qubit: int, n: int) -> np.ndarray:
    t = state.reshape([2] * n)
    t = np.moveaxis(t, qubit, 0)
    t = np.tensordot(mat, t, axes=([1], [0]))
    return np.moveaxis(t, 0, qubit).reshape(-1)


def _apply_gate(state: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    mat = kind_matrix(gate.kind)
    target = gate.targets[0]
    if not gate.controls:
        return _apply_single(state, mat, target, n)
    (control, polarity), = gate.controls
    t = state.reshape([2] * n).copy()
    sl = [slice(None)] * n
    sl[control] = 1 if polarity else 0
    sub = t[tuple(sl)]
    # Removing the control axis shifts later axes down by one.
    t_axis = target - (1 if target > control else 0)
    sub = np.moveaxis(sub, t_axis, 0)
    sub = np.tensordot(mat, sub, axes=([1], [0]))
    t[tuple(sl)] = np.moveaxis(sub, 0, t_axis)
    return t.reshape(-1)


def _prob_one(state: np.ndarray, qubit: int, n: int) -> float:
    t = np.abs(state.reshape([2] * n)) ** 2
    axes = tuple(a for a in range(n) if a != qubit)
    return float(t.sum(axis=axes)[1])


def _project(state: np.ndarray, qubit: int, outcome: int, prob: float, n: int) -> np.ndarray:
    t = state.reshape([2] * n).copy()
    sl = [slice(None)] * n
    sl[qubit] = 1 - outcome
    t[tuple(sl)] = 0.0
    return (t / math.sqrt(prob)).reshape(-1)


def _literals_hold(record: int, literals) -> bool:
    return all(((record >> b) & 1 == 1) == pol for b, pol in literals)


@dataclass(frozen=True, slots=True)
class OutcomeDistribution:
    """Probabilities over classical-bit assignments.

    Keys are bitstrings with bit 0 as the rightmost character.
    """

    n_bits: int
    probs: dict[str, float]

    def __getitem__(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def total_variation(self, other: "OutcomeDistribution") -> float:
        if self.n_bits != other.n_bits:
            raise ValueError("distributions declare different classical registers")
        keys = set(self.probs) | set(other.probs)
        return 0.5 * sum(abs(self[k] - other[k]) for k in keys)


def _key(record: int, n_bits: int) -> str:
    if n_bits == 0:
        return ""
    return format(record, f"0{n_bits}b")


def distribution(
    circuit: Circuit,
    *,
    max_qubits: int = 12,
    max_branches: int = 1 << 20,
    prune: float = 1e-14,
) -> OutcomeDistribution:
    """Joint distribution of the classical register after running the circuit.

    Depth-first path enumeration: unitaries act on a dense amplitude vector,
    measurements and resets split the path with Born-rule weights, conditions
    and toggles update each path's classical record. Branches with weight
    below ``prune`` are dropped.
    """
    n = circuit.n_qubits
    if n > max_qubits:
        raise SimulationLimitError(f"{n} qubits exceeds the cap of {max_qubits}")
    instrs = circuit.instructions
    initial = np.zeros(2 ** n, dtype=complex) if n else np.ones(1, dtype=complex)
    if n:
        initial[0] = 1.0
    acc: dict[int, float] = {}
    branches = 0
    # Stack entries: (next instruction position, state, classical record, weight).
    stack: list[tuple[int, np.ndarray, int, float]] = [(0, initial, 0, 1.0)]
    while stack:
        pos, state, record, weight = stack.pop()
        while pos < len(instrs):
            instr = instrs[pos]
            pos += 1
            if isinstance(instr, Gate):
                if _literals_hold(record, instr.condition.literals):
                    state = _apply_gate(state, instr, n)
            elif isinstance(instr, ClassicalToggle):
                if _literals_hold(record, instr.product):
                    record ^= 1 << instr.target
            else:
                q = instr.qubit
                p1 = _prob_one(state, q, n)
                p0 = 1.0 - p1
                outcomes = []
                if p0 * weight > prune:
                    outcomes.append((0, p0))
                if p1 * weight > prune:
                    outcomes.append((1, p1))
                branched = []
                for outcome, p in outcomes:
                    sub = _project(state, q, outcome, p, n)
                    if isinstance(instr, Reset):
                        if outcome == 1:
                            sub = _apply_single(sub, _FIXED["x"], q, n)
                        branched.append((pos, sub, record, weight * p))
                    else:
                        rec = (record | (1 << instr.bit)) if outcome else (record & ~(1 << instr.bit))
                        branched.append((pos, sub, rec, weight * p))
                branches += len(branched)
                if branches > max_branches:
                    raise SimulationLimitError(
                        f"branch count exceeded {max_branches}; circuit too dynamic"
                    )
                if not branched:
                    weight = 0.0
                    break
                pos, state, record, weight = branched[0]
                stack.extend(branched[1:])
        if weight > 0.0:
            acc[record] = acc.get(record, 0.0) + weight
    probs = {_key(rec, circuit.n_clbits): p for rec, p in acc.items()}
    return OutcomeDistribution(circuit.n_clbits, probs)


def equivalent(
    first: Circuit,
    second: Circuit,
    tol: float = 1e-9,
    **caps,
) -> tuple[bool, float]:
    """Compare classical-outcome distributions; qubit counts may differ."""
    if first.n_clbits != second.n_clbits:
        raise ValueError("circuits declare different classical registers")
    tv = distribution(first, **caps).total_variation(distribution(second, **caps))
    return tv <= tol, tv
