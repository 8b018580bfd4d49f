"""Greedy qubit reuse: merge independent computations onto one wire.

A computation on qubit ``q`` may move onto wire ``q_prime`` when nothing that
depends on ``q``'s instructions is needed by ``q_prime``'s own instructions:
the forward reach of ``q``'s wire must not touch ``q_prime``, and no
instruction on ``q_prime`` may read or write a classical bit that ``q``'s
reach produces. The merge appends ``q``'s instructions after a fresh reset of
``q_prime`` and reschedules the rest topologically, keeping the original
order wherever dependencies allow.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace

from .ir import (
    Circuit,
    Gate,
    Instruction,
    Measure,
    Reset,
    instruction_qubits,
    read_bits,
    written_bit,
)

__all__ = ["ReuseCandidate", "CandidateStaleError", "find_candidate", "apply_reuse", "run"]


@dataclass(frozen=True, slots=True)
class ReuseCandidate:
    q: int
    q_prime: int


class CandidateStaleError(ValueError):
    """The candidate's independence no longer holds for this circuit."""


class _Analysis:
    """Shared per-circuit data for one search round."""

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        instrs = circuit.instructions
        self.instrs = instrs
        n = len(instrs)
        self.qubits = [instruction_qubits(i) for i in instrs]
        self.reads = [read_bits(i) for i in instrs]
        self.writes = [written_bit(i) for i in instrs]
        self.is_reset = [isinstance(i, Reset) for i in instrs]

        wires: list[list[int]] = [[] for _ in range(circuit.n_qubits)]
        next_on_wire: list[dict[int, int]] = [dict() for _ in range(n)]
        readers: dict[int, list[int]] = {}
        last: dict[int, int] = {}
        for i in range(n - 1, -1, -1):
            for q in self.qubits[i]:
                j = last.get(q)
                if j is not None:
                    next_on_wire[i][q] = j
                last[q] = i
            for b in self.reads[i]:
                readers.setdefault(b, []).append(i)
        for i in range(n):
            for q in self.qubits[i]:
                wires[q].append(i)
        self.wires = wires

        # Forward-reach masks per instruction: qubits touched downstream and
        # classical bits written downstream. Wire propagation stops at resets;
        # a written bit reaches all of its later readers.
        qubit_mask = [0] * n
        bit_mask = [0] * n
        for i in range(n - 1, -1, -1):
            qm = 0
            for q in self.qubits[i]:
                qm |= 1 << q
            bm = 0
            b = self.writes[i]
            if b is not None:
                bm |= 1 << b
                for j in readers.get(b, ()):
                    if j > i:
                        qm |= qubit_mask[j]
                        bm |= bit_mask[j]
            for q, j in next_on_wire[i].items():
                if not self.is_reset[j]:
                    qm |= qubit_mask[j]
                    bm |= bit_mask[j]
            qubit_mask[i] = qm
            bit_mask[i] = bm

        nq = circuit.n_qubits
        self.reach_qubits = [0] * nq
        self.reach_bits = [0] * nq
        self.wire_reads = [0] * nq
        self.wire_writes = [0] * nq
        for q, positions in enumerate(wires):
            for i in positions:
                self.reach_qubits[q] |= qubit_mask[i]
                self.reach_bits[q] |= bit_mask[i]
                for b in self.reads[i]:
                    self.wire_reads[q] |= 1 << b
                b = self.writes[i]
                if b is not None:
                    self.wire_writes[q] |= 1 << b

    def independent(self, q: int, q_prime: int) -> bool:
        if (self.reach_qubits[q] >> q_prime) & 1:
            return False
        return not ((self.wire_reads[q_prime] | self.wire_writes[q_prime]) & self.reach_bits[q])

    def merge_order(self, cand: ReuseCandidate) -> list[Instruction] | None:
        """Schedule of the merged circuit, or None when dependencies cycle.

        Stable Kahn's algorithm: per-wire chains (with the merged wire running
        host, reset, then mover) plus classical-bit conflict edges; ties broken
        by original position so untouched instructions keep their order.
        """
        instrs = self.instrs
        n = len(instrs)
        reset_node = n
        host = self.wires[cand.q_prime]
        merged_chain = host + [reset_node] + self.wires[cand.q]

        adjacency: list[list[int]] = [[] for _ in range(n + 1)]
        indegree = [0] * (n + 1)

        def add_edge(a: int, b: int) -> None:
            adjacency[a].append(b)
            indegree[b] += 1

        for q, positions in enumerate(self.wires):
            if q in (cand.q, cand.q_prime):
                continue
            for a, b in zip(positions, positions[1:]):
                add_edge(a, b)
        for a, b in zip(merged_chain, merged_chain[1:]):
            add_edge(a, b)

        # Conflicting classical accesses keep their original order.
        accesses: dict[int, list[int]] = {}
        for i in range(n):
            for b in self.reads[i]:
                accesses.setdefault(b, []).append(i)
            if self.writes[i] is not None:
                accesses.setdefault(self.writes[i], []).append(i)
        for b, chain in accesses.items():
            last_write: int | None = None
            reads_since: list[int] = []
            for i in sorted(set(chain)):
                if self.writes[i] == b:
                    if last_write is not None:
                        add_edge(last_write, i)
                    for r in reads_since:
                        add_edge(r, i)
                    last_write = i
                    reads_since = []
                else:
                    if last_write is not None:
                        add_edge(last_write, i)
                    reads_since.append(i)

        reset_key = (host[-1] + 0.5) if host else -0.5
        sort_key = list(range(n)) + [reset_key]
        ready = [sort_key[i] for i in range(n + 1) if indegree[i] == 0]
        heapq.heapify(ready)
        order: list[int] = []
        while ready:
            key = heapq.heappop(ready)
            node = reset_node if key == reset_key else key
            order.append(node)
            for nxt in adjacency[node]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    heapq.heappush(ready, sort_key[nxt])
        if len(order) != n + 1:
            return None

        q, q_prime = cand.q, cand.q_prime

        def remap(w: int) -> int:
            if w == q:
                w = q_prime
            return w - 1 if w > q else w

        out: list[Instruction] = []
        for node in order:
            if node == reset_node:
                out.append(Reset(remap(q_prime)))
                continue
            instr = instrs[node]
            if not self.qubits[node]:
                out.append(instr)
            elif isinstance(instr, Gate):
                out.append(
                    Gate(
                        instr.kind,
                        tuple(remap(w) for w in instr.targets),
                        tuple((remap(w), pol) for w, pol in instr.controls),
                        instr.condition,
                    )
                )
            elif isinstance(instr, Measure):
                out.append(Measure(remap(instr.qubit), instr.bit))
            else:
                out.append(Reset(remap(instr.qubit)))
        return out


def _search(analysis: _Analysis) -> tuple[ReuseCandidate, list[Instruction]] | None:
    """First-fit reusable pair: lowest host wire first, then lowest mover."""
    n = analysis.circuit.n_qubits
    for q_prime in range(n):
        for q in range(n):
            if q == q_prime or not analysis.independent(q, q_prime):
                continue
            cand = ReuseCandidate(q, q_prime)
            merged = analysis.merge_order(cand)
            if merged is not None:
                return cand, merged
    return None


def find_candidate(circuit: Circuit) -> ReuseCandidate | None:
    found = _search(_Analysis(circuit))
    return found[0] if found else None


def apply_reuse(circuit: Circuit, cand: ReuseCandidate) -> Circuit:
    n = circuit.n_qubits
    if not (0 <= cand.q < n and 0 <= cand.q_prime < n) or cand.q == cand.q_prime:
        raise CandidateStaleError(f"candidate {cand} does not fit a {n}-qubit circuit")
    analysis = _Analysis(circuit)
    if not analysis.independent(cand.q, cand.q_prime):
        raise CandidateStaleError(f"{cand}: wires are no longer independent")
    merged = analysis.merge_order(cand)
    if merged is None:
        raise CandidateStaleError(f"{cand}: merged schedule has a dependency cycle")
    return replace(circuit, n_qubits=n - 1, instructions=tuple(merged))


def run(circuit: Circuit) -> tuple[Circuit, int]:
    """Repeat find-and-merge until no pair qualifies."""
    merges = 0
    while circuit.n_qubits > 1:
        found = _search(_Analysis(circuit))
        if found is None:
            break
        cand, merged = found
        circuit = replace(circuit, n_qubits=circuit.n_qubits - 1, instructions=tuple(merged))
        merges += 1
    return circuit, merges
