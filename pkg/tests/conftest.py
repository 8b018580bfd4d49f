import pytest

from qreuse.bench import RandomSpec, SplitMix64, gen_random
from qreuse.ir import CircuitBuilder


def cx_pair(with_second_prep: bool = False):
    """Two measurements after a CX, first qubit prepared in superposition."""
    b = CircuitBuilder(2, 2)
    b.h(0)
    if with_second_prep:
        b.h(1)
    b.cx(0, 1)
    b.measure(0, 0)
    b.measure(1, 1)
    return b.build()


def small_random(seed: int, max_qubits: int = 4, max_depth: int = 6):
    """Small deterministic random circuit for semantic property tests."""
    n = 2 + seed % (max_qubits - 1)
    d = 2 + (seed // 7) % (max_depth - 1)
    return gen_random(RandomSpec(n, d, seed))


def adversarial(seed: int):
    """Circuit with constructs the benchmark generator never emits.

    Mid-circuit and repeated measurements, resets, negated conditions, and
    toggles, to stress the passes' classical hazard guards.
    """
    rng = SplitMix64(seed)
    n = 2 + rng.randrange(3)
    m = n + rng.randrange(2)
    b = CircuitBuilder(n, m, name=f"adv{seed}")
    assigned: list[int] = []
    for _ in range(6 + rng.randrange(12)):
        roll = rng.randrange(10)
        q = rng.randrange(n)
        cond = ()
        if assigned and rng.randrange(3) == 0:
            cond = ((rng.choice(assigned), rng.randrange(2) == 0),)
        if roll < 4:
            kind = rng.choice(("h", "x", "y", "z", "s", "p"))
            if kind == "p":
                b.p(rng.uniform() * 6.28, q, condition=cond)
            else:
                getattr(b, kind)(q, condition=cond)
        elif roll < 6 and n > 1:
            partner = (q + 1 + rng.randrange(n - 1)) % n
            kind = rng.choice(("cx", "cz", "cp"))
            if kind == "cp":
                b.cp(rng.uniform() * 6.28, q, partner, condition=cond)
            else:
                getattr(b, kind)(q, partner, condition=cond)
        elif roll < 8:
            bit = rng.randrange(m)
            b.measure(q, bit)
            assigned.append(bit)
        elif roll == 8:
            b.reset(q)
        elif assigned:
            target = rng.choice(assigned)
            others = [x for x in assigned if x != target]
            product = ()
            if others and rng.randrange(2) == 0:
                product = ((rng.choice(others), rng.randrange(2) == 0),)
            b.toggle(target, product)
    for q in range(n):
        b.measure(q, q % m)
    return b.build()


@pytest.fixture
def bell_measured():
    return cx_pair(with_second_prep=False)
