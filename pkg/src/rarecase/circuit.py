"""Verifier circuits: parsing, Boolean and arithmetised evaluation, degree bounds.

A circuit takes instance bits ``x_1..x_n`` and certificate bits
``z_1..z_m``.  Arithmetisation maps NOT g to 1 - g, AND to the product
of its operands and OR to 1 - prod(1 - g_j).  The arithmetised polynomial
is never expanded: everything downstream only needs point evaluations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .field import check_modulus


class GateKind(str, Enum):
    INPUT_X = "INPUT_X"
    INPUT_Z = "INPUT_Z"
    CONST = "CONST"
    NOT = "NOT"
    AND = "AND"
    OR = "OR"


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    operands: tuple[int, ...] = ()
    const_value: int = 0
    name: str = ""


@dataclass(frozen=True)
class DegreeProfile:
    per_x: tuple[int, ...]
    per_z: tuple[int, ...]
    total: int


@dataclass(frozen=True)
class Circuit:
    """Topologically ordered gate list.

    Gates ``0..n-1`` are the x inputs and ``n..n+m-1`` the z inputs; every
    operand index points strictly backwards.
    """

    n: int
    m: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise CircuitError("need n >= 0 and m >= 1")
        for idx, g in enumerate(self.gates):
            if idx < self.n:
                ok = g.kind is GateKind.INPUT_X
            elif idx < self.n + self.m:
                ok = g.kind is GateKind.INPUT_Z
            else:
                ok = g.kind not in (GateKind.INPUT_X, GateKind.INPUT_Z)
            if not ok:
                raise CircuitError(f"gate {idx} of kind {g.kind.value} is out of place")
            if any(o < 0 or o >= idx for o in g.operands):
                raise CircuitError(f"gate {idx} references a later gate (cycle)")
            _check_arity(g.kind, len(g.operands))
        if not 0 <= self.output < len(self.gates):
            raise CircuitError("output references an unknown gate")

    @property
    def size(self) -> int:
        return len(self.gates) - self.n - self.m

    def to_dsl(self) -> str:
        names = [self._ref(i) for i in range(len(self.gates))]
        lines = [f"input x {self.n}", f"input z {self.m}"]
        for idx in range(self.n + self.m, len(self.gates)):
            g = self.gates[idx]
            if g.kind is GateKind.CONST:
                rhs = f"CONST {g.const_value}"
            else:
                rhs = " ".join([g.kind.value, *(names[o] for o in g.operands)])
            lines.append(f"{names[idx]} = {rhs}")
        lines.append(f"output {names[self.output]}")
        return "\n".join(lines) + "\n"

    def _ref(self, idx: int) -> str:
        if idx < self.n:
            return f"x{idx + 1}"
        if idx < self.n + self.m:
            return f"z{idx - self.n + 1}"
        return self.gates[idx].name or f"g{idx}"


def _check_arity(kind: GateKind, k: int) -> None:
    if kind is GateKind.NOT and k != 1:
        raise CircuitError(f"NOT takes exactly one operand, got {k}")
    if kind in (GateKind.AND, GateKind.OR) and k < 1:
        raise CircuitError(f"{kind.value} needs at least one operand")
    if kind in (GateKind.INPUT_X, GateKind.INPUT_Z, GateKind.CONST) and k != 0:
        raise CircuitError(f"{kind.value} takes no operands")


# ---------------------------------------------------------------- building


class CircuitBuilder:
    """Incremental construction with name resolution."""

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.gates: list[Gate] = [Gate(GateKind.INPUT_X) for _ in range(n)]
        self.gates += [Gate(GateKind.INPUT_Z) for _ in range(m)]
        self._names: dict[str, int] = {}

    def x(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise CircuitError(f"x{i} out of range 1..{self.n}")
        return i - 1

    def z(self, j: int) -> int:
        if not 1 <= j <= self.m:
            raise CircuitError(f"z{j} out of range 1..{self.m}")
        return self.n + j - 1

    def add(self, kind: GateKind | str, *operands: int, const_value: int = 0, name: str = "") -> int:
        kind = GateKind(kind)
        _check_arity(kind, len(operands))
        if name:
            if name in self._names:
                raise CircuitError(f"gate name {name!r} defined twice")
            self._names[name] = len(self.gates)
        self.gates.append(Gate(kind, tuple(operands), int(const_value), name))
        return len(self.gates) - 1

    def lookup(self, name: str) -> int:
        return self._names[name]

    def build(self, output: int) -> Circuit:
        return Circuit(self.n, self.m, tuple(self.gates), output)


_INPUT_REF = re.compile(r"^([xz])(\d+)$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_circuit(text: str) -> Circuit:
    """Parse the line-oriented circuit DSL.

    ::

        # comment
        input x 2
        input z 1
        g1 = AND x1 z1
        g2 = OR g1 x2
        output g2
    """
    n = m = None
    builder = None
    output = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "input":
                if len(toks) != 3 or toks[1] not in ("x", "z") or not toks[2].isdigit():
                    raise CircuitParseError("expected 'input x|z <count>'", lineno)
                if builder is not None:
                    raise CircuitParseError("input declarations must precede gates", lineno)
                if toks[1] == "x":
                    if n is not None:
                        raise CircuitParseError("x declared twice", lineno)
                    n = int(toks[2])
                else:
                    if m is not None:
                        raise CircuitParseError("z declared twice", lineno)
                    m = int(toks[2])
                continue
            if builder is None:
                if m is None:
                    raise CircuitParseError("missing 'input z <m>' declaration", lineno)
                builder = CircuitBuilder(n or 0, m)
            if output is not None:
                raise CircuitParseError("nothing may follow the output line", lineno)
            if toks[0] == "output":
                if len(toks) != 2:
                    raise CircuitParseError("expected 'output <name>'", lineno)
                output = _resolve(builder, toks[1], lineno)
                continue
            if len(toks) < 3 or toks[1] != "=":
                raise CircuitParseError(f"cannot parse {line!r}", lineno)
            name, op, args = toks[0], toks[2].upper(), toks[3:]
            if not _NAME.match(name) or _INPUT_REF.match(name):
                raise CircuitParseError(f"invalid gate name {name!r}", lineno)
            if op == "CONST":
                if args not in (["0"], ["1"]):
                    raise CircuitParseError("CONST takes 0 or 1", lineno)
                builder.add(GateKind.CONST, const_value=int(args[0]), name=name)
            elif op in ("AND", "OR", "NOT"):
                refs = [_resolve(builder, a, lineno) for a in args]
                builder.add(op, *refs, name=name)
            else:
                raise CircuitParseError(f"unknown gate kind {op!r}", lineno)
        except CircuitParseError:
            raise
        except (CircuitError, KeyError) as exc:
            raise CircuitParseError(str(exc), lineno) from exc
    if builder is None:
        if m is None:
            raise CircuitParseError("missing 'input z <m>' declaration")
        builder = CircuitBuilder(n or 0, m)
    if output is None:
        raise CircuitParseError("missing output line")
    try:
        return builder.build(output)
    except CircuitError as exc:
        raise CircuitParseError(str(exc)) from exc


def _resolve(builder: CircuitBuilder, tok: str, lineno: int) -> int:
    m = _INPUT_REF.match(tok)
    try:
        if m:
            i = int(m.group(2))
            return builder.x(i) if m.group(1) == "x" else builder.z(i)
        return builder.lookup(tok)
    except KeyError:
        raise CircuitParseError(f"reference to undeclared name {tok!r}", lineno) from None
    except CircuitError as exc:
        raise CircuitParseError(str(exc), lineno) from None


# -------------------------------------------------------------- evaluation


def _check_lengths(c: Circuit, x: Sequence, z: Sequence) -> None:
    if len(x) != c.n or len(z) != c.m:
        raise CircuitError(f"expected |x|={c.n}, |z|={c.m}; got {len(x)}, {len(z)}")


def eval_bool(c: Circuit, x: Sequence[int], z: Sequence[int]) -> int:
    _check_lengths(c, x, z)
    vals = [int(bool(v)) for v in x] + [int(bool(v)) for v in z]
    for g in c.gates[c.n + c.m:]:
        if g.kind is GateKind.CONST:
            v = g.const_value
        elif g.kind is GateKind.NOT:
            v = 1 - vals[g.operands[0]]
        elif g.kind is GateKind.AND:
            v = int(all(vals[o] for o in g.operands))
        else:
            v = int(any(vals[o] for o in g.operands))
        vals.append(v)
    return vals[c.output]


def _batch_arrays(c: Circuit, X, Z, dtype) -> tuple[np.ndarray, np.ndarray]:
    # m >= 1 always, so Z fixes the batch size; X may be empty when n = 0
    Z = np.asarray(Z, dtype=dtype).reshape(-1, c.m)
    X = np.asarray(X, dtype=dtype)
    X = X.reshape(Z.shape[0], c.n) if X.size or c.n else np.zeros((Z.shape[0], 0), dtype=dtype)
    return X, Z


def eval_bool_batch(c: Circuit, X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Row-wise Boolean evaluation on 0/1 arrays of shape (B, n) and (B, m)."""
    try:
        X, Z = _batch_arrays(c, X, Z, np.int64)
    except ValueError as exc:
        raise CircuitError(f"batch shapes do not fit the circuit: {exc}") from None
    X, Z = X.astype(bool), Z.astype(bool)
    B = Z.shape[0]
    vals = [np.broadcast_to(X[:, i], (B,)) for i in range(c.n)]
    vals += [np.broadcast_to(Z[:, j], (B,)) for j in range(c.m)]
    for g in c.gates[c.n + c.m:]:
        if g.kind is GateKind.CONST:
            v = np.full(B, bool(g.const_value))
        elif g.kind is GateKind.NOT:
            v = ~vals[g.operands[0]]
        elif g.kind is GateKind.AND:
            v = np.logical_and.reduce([vals[o] for o in g.operands])
        else:
            v = np.logical_or.reduce([vals[o] for o in g.operands])
        vals.append(v)
    return vals[c.output].astype(np.int64)


def _field_ints(vec, p: int) -> list[int]:
    out = []
    for v in vec:
        if hasattr(v, "modulus"):
            if v.modulus != p:
                from .field import ModulusMismatch

                raise ModulusMismatch(f"{v.modulus} != {p}")
            out.append(v.value)
        else:
            out.append(int(v) % p)
    return out


def arith_eval_ints(c: Circuit, x: Sequence[int], z: Sequence[int], p: int) -> int:
    """g_{C,p}(x, z) for residues given as ints."""
    _check_lengths(c, x, z)
    vals = list(x) + list(z)
    for g in c.gates[c.n + c.m:]:
        if g.kind is GateKind.CONST:
            v = g.const_value
        elif g.kind is GateKind.NOT:
            v = (1 - vals[g.operands[0]]) % p
        elif g.kind is GateKind.AND:
            v = 1
            for o in g.operands:
                v = v * vals[o] % p
        else:
            v = 1
            for o in g.operands:
                v = v * (1 - vals[o]) % p
            v = (1 - v) % p
        vals.append(v)
    return vals[c.output] % p


def arith_eval(c: Circuit, x, z, p: int):
    """Arithmetised value at field inputs; returns a FieldElement."""
    from .field import FieldElement

    p = check_modulus(p)
    _check_lengths(c, x, z)
    return FieldElement(arith_eval_ints(c, _field_ints(x, p), _field_ints(z, p), p), p)


def arith_eval_batch(c: Circuit, X: np.ndarray, Z: np.ndarray, p: int) -> np.ndarray:
    """Row-wise arithmetised evaluation; X is (B, n), Z is (B, m), int64 residues."""
    try:
        X, Z = _batch_arrays(c, X, Z, np.int64)
    except ValueError as exc:
        raise CircuitError(f"batch shapes do not fit the circuit: {exc}") from None
    B = Z.shape[0]
    vals: list[np.ndarray] = [X[:, i] % p for i in range(c.n)] + [Z[:, j] % p for j in range(c.m)]
    for g in c.gates[c.n + c.m:]:
        if g.kind is GateKind.CONST:
            v = np.full(B, g.const_value, dtype=np.int64)
        elif g.kind is GateKind.NOT:
            v = (1 - vals[g.operands[0]]) % p
        elif g.kind is GateKind.AND:
            v = vals[g.operands[0]]
            for o in g.operands[1:]:
                v = v * vals[o] % p
        else:
            v = (1 - vals[g.operands[0]]) % p
            for o in g.operands[1:]:
                v = v * (1 - vals[o]) % p
            v = (1 - v) % p
        vals.append(v)
    return vals[c.output]


def degree_profile(c: Circuit) -> DegreeProfile:
    """Syntactic per-variable and total degree bounds (sum rule at AND/OR)."""
    nv = c.n + c.m
    per: list[np.ndarray] = []
    tot: list[int] = []
    for idx, g in enumerate(c.gates):
        if idx < nv:
            d = np.zeros(nv, dtype=np.int64)
            d[idx] = 1
            per.append(d)
            tot.append(1)
        elif g.kind is GateKind.CONST:
            per.append(np.zeros(nv, dtype=np.int64))
            tot.append(0)
        elif g.kind is GateKind.NOT:
            per.append(per[g.operands[0]])
            tot.append(tot[g.operands[0]])
        else:
            per.append(sum((per[o] for o in g.operands), np.zeros(nv, dtype=np.int64)))
            tot.append(sum(tot[o] for o in g.operands))
    out = per[c.output]
    return DegreeProfile(
        per_x=tuple(int(v) for v in out[: c.n]),
        per_z=tuple(int(v) for v in out[c.n:]),
        total=tot[c.output],
    )


# ------------------------------------------------------------ CNF verifiers


def _check_clauses(num_vars: int, clauses) -> list[list[int]]:
    if num_vars < 1:
        raise CircuitError("need at least one variable")
    clauses = [list(cl) for cl in clauses]
    if not clauses:
        raise CircuitError("need at least one clause")
    for cl in clauses:
        if not cl:
            raise CircuitError("empty clause")
        for lit in cl:
            if lit == 0 or abs(lit) > num_vars:
                raise CircuitError(f"literal {lit} out of range for {num_vars} variables")
    return clauses


def cnf_verifier_circuit(num_vars: int, num_clauses: int) -> Circuit:
    """Generic verifier for every CNF with this many variables and clauses.

    x holds two selector bits per (clause, variable): ``pos`` then ``neg``,
    clause-major.  z is the assignment.
    """
    v, k = num_vars, num_clauses
    b = CircuitBuilder(2 * v * k, v)
    nots = [b.add(GateKind.NOT, b.z(i), name=f"nz{i}") for i in range(1, v + 1)]
    clause_gates = []
    for j in range(k):
        terms = []
        for i in range(v):
            base = 2 * (j * v + i) + 1
            terms.append(b.add(GateKind.AND, b.x(base), b.z(i + 1), name=f"p{j + 1}_{i + 1}"))
            terms.append(b.add(GateKind.AND, b.x(base + 1), nots[i], name=f"n{j + 1}_{i + 1}"))
        clause_gates.append(b.add(GateKind.OR, *terms, name=f"cl{j + 1}"))
    out = b.add(GateKind.AND, *clause_gates, name="sat")
    return b.build(out)


def cnf_encoding(num_vars: int, clauses) -> tuple[int, ...]:
    clauses = _check_clauses(num_vars, clauses)
    bits = [0] * (2 * num_vars * len(clauses))
    for j, cl in enumerate(clauses):
        for lit in cl:
            base = 2 * (j * num_vars + abs(lit) - 1)
            bits[base + (0 if lit > 0 else 1)] = 1
    return tuple(bits)


def build_cnf_verifier(num_vars: int, clauses) -> tuple[Circuit, tuple[int, ...]]:
    """Return the shape-generic verifier and this formula's selector encoding.

    Literals are DIMACS-style nonzero ints: ``3`` is z3, ``-3`` is NOT z3.
    """
    clauses = _check_clauses(num_vars, clauses)
    return cnf_verifier_circuit(num_vars, len(clauses)), cnf_encoding(num_vars, clauses)


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Parse the ``p cnf`` subset of DIMACS; returns (num_vars, clauses)."""
    num_vars = num_clauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise CircuitParseError("expected 'p cnf <vars> <clauses>'", lineno)
            num_vars, num_clauses = int(toks[2]), int(toks[3])
            continue
        if num_vars is None:
            raise CircuitParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CircuitParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise CircuitParseError("empty clause", lineno)
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise CircuitParseError(f"literal {lit} exceeds {num_vars} variables", lineno)
                current.append(lit)
    if num_vars is None:
        raise CircuitParseError("missing 'p cnf' header")
    if current:
        clauses.append(current)
    if num_clauses is not None and len(clauses) != num_clauses:
        raise CircuitParseError(f"header promises {num_clauses} clauses, found {len(clauses)}")
    return num_vars, clauses


def eval_cnf(clauses, assignment: Sequence[int]) -> int:
    """Direct CNF semantics; assignment[i] is the value of variable i+1."""
    return int(all(any(bool(assignment[abs(l) - 1]) == (l > 0) for l in cl) for cl in clauses))
