"""Shared circuit corpus and reference evaluators.

The reference evaluators below walk the gate list by hand with plain
Python ints.  They deliberately share no code with the package so that
tests compare two independent implementations.
"""
from __future__ import annotations

import itertools
import random

import pytest

from rarecase.circuit import CircuitBuilder, GateKind, build_cnf_verifier, parse_circuit

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


# ----------------------------------------------------------------- references


def ref_bool(c, x, z) -> int:
    vals = []
    for g in c.gates:
        k = g.kind
        if k is GateKind.INPUT_X:
            vals.append(int(x[len(vals)]))
        elif k is GateKind.INPUT_Z:
            vals.append(int(z[len(vals) - c.n]))
        elif k is GateKind.CONST:
            vals.append(g.const_value)
        elif k is GateKind.NOT:
            vals.append(1 - vals[g.operands[0]])
        elif k is GateKind.AND:
            vals.append(int(all(vals[o] for o in g.operands)))
        else:
            vals.append(int(any(vals[o] for o in g.operands)))
    return vals[c.output]


def ref_arith(c, x, z, p) -> int:
    vals = []
    for g in c.gates:
        k = g.kind
        if k is GateKind.INPUT_X:
            vals.append(x[len(vals)] % p)
        elif k is GateKind.INPUT_Z:
            vals.append(z[len(vals) - c.n] % p)
        elif k is GateKind.CONST:
            vals.append(g.const_value)
        elif k is GateKind.NOT:
            vals.append((1 - vals[g.operands[0]]) % p)
        elif k is GateKind.AND:
            v = 1
            for o in g.operands:
                v = v * vals[o] % p
            vals.append(v)
        else:
            v = 1
            for o in g.operands:
                v = v * (1 - vals[o]) % p
            vals.append((1 - v) % p)
    return vals[c.output]


def ref_count(c, x) -> int:
    return sum(ref_bool(c, x, z) for z in itertools.product((0, 1), repeat=c.m))


def ref_f_prime(c, x, a, b, p) -> int:
    total = 0
    for z in itertools.product((0, 1), repeat=c.m):
        w = [(ai * zi + bi) % p for ai, zi, bi in zip(a, z, b)]
        total += ref_arith(c, x, w, p)
    return total % p


# --------------------------------------------------------------------- corpus


def random_circuit(n: int, m: int, gates: int, seed: int):
    rnd = random.Random(seed)
    b = CircuitBuilder(n, m)
    last = n + m - 1
    for _ in range(gates):
        kind = rnd.choice(["AND", "OR", "NOT", "AND", "OR"])
        pool = list(range(last + 1))
        if kind == "NOT":
            last = b.add(kind, rnd.choice(pool))
        else:
            # bias toward recent gates so the output depends on most of them
            ops = [rnd.choice(pool[-4:]), rnd.choice(pool)]
            if rnd.random() < 0.3:
                ops.append(rnd.choice(pool))
            last = b.add(kind, *ops)
    return b.build(last)


DSL_CORPUS = {
    "and_xz": """
        input x 1
        input z 1
        g = AND x1 z1
        output g
    """,
    "or3": """
        input z 3
        g = OR z1 z2 z3
        output g
    """,
    "xor2": """
        input z 2
        nz1 = NOT z1
        nz2 = NOT z2
        a = AND z1 nz2
        b = AND nz1 z2
        out = OR a b
        output out
    """,
    "majority3": """
        input x 1
        input z 3
        a = AND z1 z2
        b = AND z1 z3
        c = AND z2 z3
        maj = OR a b c
        gate = OR maj x1
        output gate
    """,
    "const_true": """
        input x 2
        input z 2
        one = CONST 1
        output one
    """,
    "const_false": """
        input z 3
        zero = CONST 0
        g = AND zero z1
        output g
    """,
    "repeat_operand": """
        input x 2
        input z 2
        sq = AND z1 z1 x1
        o = OR sq z2 z2
        n = NOT o
        f = OR n x2
        output f
    """,
    "deep_not": """
        input x 3
        input z 3
        a = NOT z1
        b = NOT a
        c = AND b x1 z2
        d = NOT c
        e = OR d z3 x2
        f = AND e x3
        output f
    """,
    "input_output": """
        input x 2
        input z 4
        output z3
    """,
}

CNF_CORPUS = {
    "cnf_or2": (2, [[1, 2]]),
    "cnf_unsat1": (1, [[1], [-1]]),
    "cnf_two_clause": (2, [[1, -2], [-1, 2]]),
    "cnf_three_var": (3, [[1, 2, -3]]),
    "cnf_four_var": (4, [[-1, 2, 3, -4]]),
}

RANDOM_SHAPES = [(0, 2, 3), (1, 3, 6), (2, 4, 8), (3, 3, 10), (4, 5, 12), (2, 6, 14),
                 (5, 5, 9), (6, 6, 16), (0, 8, 12), (3, 7, 18)]


def build_corpus():
    out = {}
    for name, text in DSL_CORPUS.items():
        out[name] = parse_circuit(text)
    for name, (v, clauses) in CNF_CORPUS.items():
        out[name] = build_cnf_verifier(v, clauses)[0]
    for k, (n, m, g) in enumerate(RANDOM_SHAPES):
        out[f"random{k}_n{n}_m{m}"] = random_circuit(n, m, g, seed=1000 + k)
    return out


CORPUS = build_corpus()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def cnf_instances():
    """(name, circuit, x) for every CNF corpus formula."""
    return [(name, *build_cnf_verifier(v, cl)) for name, (v, cl) in CNF_CORPUS.items()]
