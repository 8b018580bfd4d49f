import math

import pytest
from hypothesis import given, settings, strategies as st

from qreuse import bench, oracle
from qreuse.commute import CommuteRule, applicable_rule, commute_once, run
from qreuse.ir import (
    CircuitBuilder,
    ClassicalToggle,
    Gate,
    Measure,
    instruction_qubits,
    validate,
    wire_positions,
)

from conftest import small_random


class TestApplicableRule:
    def test_cp_on_control_side(self):
        c = CircuitBuilder(2, 1).cp(0.3, 0, 1).measure(0, 0).build()
        assert applicable_rule(c, 1) is CommuteRule.CONTROLLED_ON_CONTROL

    def test_cp_on_target_side_is_diagonal(self):
        c = CircuitBuilder(2, 1).cp(0.3, 0, 1).measure(1, 0).build()
        assert applicable_rule(c, 1) is CommuteRule.DIAGONAL

    def test_hadamard_blocks(self):
        c = CircuitBuilder(1, 1).h(0).measure(0, 0).build()
        assert applicable_rule(c, 1) is None

    def test_rx_blocks(self):
        c = CircuitBuilder(1, 1).rx(0.7, 0).measure(0, 0).build()
        assert applicable_rule(c, 1) is None

    def test_cx_target_blocks(self):
        c = CircuitBuilder(2, 1).cx(0, 1).measure(1, 0).build()
        assert applicable_rule(c, 1) is None

    def test_conditioned_x_is_bitflip(self):
        b = CircuitBuilder(2, 2)
        b.measure(0, 0).x(1, condition=((0, True),)).measure(1, 1)
        assert applicable_rule(b.build(), 2) is CommuteRule.BIT_FLIP

    def test_y_decomposes(self):
        c = CircuitBuilder(1, 1).y(0).measure(0, 0).build()
        assert applicable_rule(c, 1) is CommuteRule.Y_DECOMPOSE

    def test_not_a_measurement(self):
        c = CircuitBuilder(1, 1).h(0).measure(0, 0).build()
        with pytest.raises(ValueError):
            applicable_rule(c, 0)

    def test_self_conditioned_x_blocks(self):
        # Re-measurement into the bit that conditions the X: moving would
        # create a self-referential toggle.
        b = CircuitBuilder(1, 1)
        b.measure(0, 0).x(0, condition=((0, True),)).measure(0, 0)
        assert applicable_rule(b.build(), 2) is None


class TestCommuteOnce:
    def test_plain_x_inserts_negation(self):
        c = CircuitBuilder(1, 1).x(0).measure(0, 0).build()
        out = commute_once(c, 1)
        kinds = [type(i).__name__ for i in out.instructions]
        assert kinds == ["Measure", "ClassicalToggle", "Gate"]
        assert out.instructions[1] == ClassicalToggle(0, ())
        assert out.instructions[2].kind.name == "x"

    def test_cx_control_swaps_without_fixup(self):
        c = CircuitBuilder(2, 1).cx(0, 1).measure(0, 0).build()
        out = commute_once(c, 1)
        assert isinstance(out.instructions[0], Measure)
        assert out.instructions[1].kind.name == "x"
        assert out.instructions[1].controls == ((0, True),)

    def test_conditioned_x_toggle_carries_condition(self):
        b = CircuitBuilder(2, 2)
        b.measure(0, 0).x(1, condition=((0, True),)).measure(1, 1)
        out = commute_once(b.build(), 2)
        toggle = out.instructions[2]
        assert toggle == ClassicalToggle(1, ((0, True),))

    def test_rule_not_applicable_raises(self):
        c = CircuitBuilder(1, 1).h(0).measure(0, 0).build()
        with pytest.raises(ValueError):
            commute_once(c, 1)


class TestRun:
    def test_z_then_measure(self):
        c = CircuitBuilder(1, 1).z(0).measure(0, 0).build()
        out, counts = run(c)
        assert isinstance(out.instructions[0], Measure)
        assert counts["diagonal"] == 1
        assert sum(counts.values()) == 1

    def test_already_first_is_fixpoint(self):
        c = CircuitBuilder(1, 1).measure(0, 0).h(0).build()
        out, counts = run(c)
        assert out.instructions == c.instructions
        assert sum(counts.values()) == 0

    def test_y_chain(self):
        c = CircuitBuilder(1, 1).y(0).measure(0, 0).build()
        out, counts = run(c)
        assert counts["y_decompose"] == 1
        assert counts["bit_flip"] == 1
        assert counts["diagonal"] == 1
        assert isinstance(out.instructions[0], Measure)
        ok, dev = oracle.equivalent(c, out)
        assert ok, dev

    def test_qpe_measurements_end_up_behind_their_h(self):
        c = bench.gen_qpe(4, 2 * math.pi * 3 / 8)
        out, _ = run(c)
        wires = wire_positions(out.instructions, out.n_qubits)
        for q in range(3):  # counting qubits
            positions = wires[q]
            meas_at = [k for k, p in enumerate(positions) if isinstance(out.instructions[p], Measure)]
            assert len(meas_at) == 1
            prev = out.instructions[positions[meas_at[0] - 1]]
            assert isinstance(prev, Gate) and prev.kind.name == "h"

    def test_measurement_count_and_bits_preserved(self):
        c = bench.gen_qft(4)
        out, _ = run(c)
        before = sorted(m.bit for m in c.instructions if isinstance(m, Measure))
        after = sorted(m.bit for m in out.instructions if isinstance(m, Measure))
        assert before == after

    def test_fixpoint_soundness_and_validity(self):
        c = bench.gen_qpe(5, 1.0)
        out, counts = run(c)
        assert validate(out) == []
        for pos, instr in enumerate(out.instructions):
            if isinstance(instr, Measure):
                assert applicable_rule(out, pos) is None
        assert sum(counts.values()) <= len(c.instructions) ** 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_run_preserves_distribution(seed):
    c = small_random(seed)
    out, counts = run(c)
    assert validate(out) == []
    assert sum(counts.values()) <= (len(c.instructions) + 2) ** 2
    before = sorted((m.qubit, m.bit) for m in c.instructions if isinstance(m, Measure))
    after = sorted((m.qubit, m.bit) for m in out.instructions if isinstance(m, Measure))
    assert before == after
    ok, dev = oracle.equivalent(c, out)
    assert ok, dev


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_run_fixpoint(seed):
    out, _ = run(small_random(seed))
    for pos, instr in enumerate(out.instructions):
        if isinstance(instr, Measure):
            assert applicable_rule(out, pos) is None
