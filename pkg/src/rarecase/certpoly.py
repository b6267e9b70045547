"""Certificate-counting polynomials and the self-reduction identity.

``g'(x, z, a, b) = g(x, a*z + b)`` and ``f'(x, a, b) = sum_{z in {0,1}^m} g'``.
At ``a = 1, b = 0`` and Boolean x, f' is the number of accepting
certificates reduced mod p.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .circuit import Circuit, CircuitError, arith_eval_batch, arith_eval_ints, eval_bool_batch, _field_ints
from .field import FieldElement, check_modulus

MAX_ENUM_BITS = 24
_CHUNK = 1 << 14


class EnumerationTooLarge(ValueError):
    pass


def _guard(m: int) -> None:
    if m > MAX_ENUM_BITS:
        raise EnumerationTooLarge(f"m = {m} exceeds the 2^{MAX_ENUM_BITS} enumeration guard")


@lru_cache(maxsize=32)
def boolean_cube(m: int) -> np.ndarray:
    """All of {0,1}^m as a (2^m, m) int64 array; row k has z_{j+1} = bit j of k."""
    _guard(m)
    k = np.arange(1 << m, dtype=np.int64)
    cube = (k[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1
    cube.setflags(write=False)
    return cube


@dataclass(frozen=True)
class Instance:
    """A query (x, a, b, p); components are stored as residues in [0, p)."""

    x: tuple[int, ...]
    a: tuple[int, ...]
    b: tuple[int, ...]
    p: int

    def __post_init__(self):
        p = check_modulus(self.p)
        object.__setattr__(self, "p", p)
        for name in ("x", "a", "b"):
            object.__setattr__(self, name, tuple(_field_ints(getattr(self, name), p)))
        if len(self.a) != len(self.b):
            raise CircuitError("a and b must have the same length")

    @classmethod
    def counting(cls, x: Sequence[int], m: int, p: int) -> Instance:
        """The a = (1,..,1), b = (0,..,0) specialisation that counts certificates."""
        return cls(tuple(x), (1,) * m, (0,) * m, p)

    def replace(self, *, a=None, b=None, x=None) -> Instance:
        return Instance(self.x if x is None else x, self.a if a is None else a,
                        self.b if b is None else b, self.p)

    def as_vector(self) -> np.ndarray:
        return np.array(self.x + self.a + self.b, dtype=np.int64)


@dataclass(frozen=True)
class CountResult:
    count: int


def _check_instance(c: Circuit, inst: Instance) -> None:
    if len(inst.x) != c.n or len(inst.a) != c.m:
        raise CircuitError(f"instance shape ({len(inst.x)}, {len(inst.a)}) does not fit circuit ({c.n}, {c.m})")


def count_certificates_bruteforce(c: Circuit, x: Sequence[int]) -> CountResult:
    """Exact count over Z of z in {0,1}^m accepted by the Boolean circuit."""
    _guard(c.m)
    if len(x) != c.n:
        raise CircuitError(f"expected |x| = {c.n}")
    cube = boolean_cube(c.m)
    X = np.asarray(x, dtype=np.int64)[None, :]
    total = 0
    for lo in range(0, cube.shape[0], _CHUNK):
        Z = cube[lo:lo + _CHUNK]
        total += int(eval_bool_batch(c, np.broadcast_to(X, (Z.shape[0], c.n)), Z).sum())
    return CountResult(total)


def g_prime_ints(c: Circuit, x, z, a, b, p: int) -> int:
    w = [(aj * zj + bj) % p for aj, zj, bj in zip(a, z, b)]
    return arith_eval_ints(c, x, w, p)


def g_prime_eval(c: Circuit, x, z, a, b, p: int) -> FieldElement:
    p = check_modulus(p)
    if not (len(z) == len(a) == len(b) == c.m) or len(x) != c.n:
        raise CircuitError("length mismatch")
    x, z, a, b = (_field_ints(v, p) for v in (x, z, a, b))
    return FieldElement(g_prime_ints(c, x, z, a, b, p), p)


def f_prime_batch(c: Circuit, X, A, B, p: int) -> np.ndarray:
    """f' for a batch of queries; X is (Q, n), A and B are (Q, m)."""
    _guard(c.m)
    A = np.asarray(A, dtype=np.int64).reshape(-1, c.m)
    B = np.asarray(B, dtype=np.int64).reshape(-1, c.m)
    Q = A.shape[0]
    X = np.asarray(X, dtype=np.int64)
    X = X.reshape(Q, c.n) if X.size or c.n else np.zeros((Q, 0), dtype=np.int64)
    cube = boolean_cube(c.m)
    acc = np.zeros(Q, dtype=np.int64)
    step = max(1, _CHUNK // max(Q, 1))
    for lo in range(0, cube.shape[0], step):
        Z = cube[lo:lo + step]
        k = Z.shape[0]
        W = (A[:, None, :] * Z[None, :, :] + B[:, None, :]) % p
        Xr = np.repeat(X, k, axis=0)
        vals = arith_eval_batch(c, Xr, W.reshape(-1, c.m), p).reshape(Q, k)
        acc = (acc + vals.sum(axis=1) % p) % p
    return acc


def f_prime_ints(c: Circuit, inst: Instance) -> int:
    _check_instance(c, inst)
    return int(f_prime_batch(c, [inst.x], [inst.a], [inst.b], inst.p)[0])


def f_prime_eval(c: Circuit, inst: Instance) -> FieldElement:
    return FieldElement(f_prime_ints(c, inst), inst.p)


def self_reduction_sides(c: Circuit, x, a, b, r, i: int, p: int | None = None) -> tuple[FieldElement, FieldElement]:
    """Both sides of the self-reduction identity for variable ``i`` (1-based).

    Left: sum over the other m-1 Boolean coordinates of g' with z_i = r.
    Right: 2^{-1} f'(x, a with a_i = 0, b with b_i = a_i r + b_i).
    """
    if p is None:
        p = getattr(r, "modulus", None)
        if p is None:
            raise ValueError("pass p when r is a plain int")
    p = check_modulus(p)
    m = c.m
    if not 1 <= i <= m:
        raise IndexError(f"variable index {i} outside 1..{m}")
    _guard(m)
    x, a, b = (_field_ints(v, p) for v in (x, a, b))
    (r,) = _field_ints([r], p)

    lhs = 0
    for k in range(1 << (m - 1)):
        z = []
        bit = 0
        for j in range(m):
            if j == i - 1:
                z.append(r)
            else:
                z.append((k >> bit) & 1)
                bit += 1
        lhs = (lhs + g_prime_ints(c, x, z, a, b, p)) % p

    a2 = list(a)
    b2 = list(b)
    b2[i - 1] = (a[i - 1] * r + b[i - 1]) % p
    a2[i - 1] = 0
    half = pow(2, -1, p)
    rhs = half * f_prime_ints(c, Instance(x, a2, b2, p)) % p
    return FieldElement(lhs, p), FieldElement(rhs, p)


def estimate_zero_fraction(evaluator: Callable[[Sequence[int]], int], p: int, arity: int,
                           samples: int, seed: int) -> Fraction:
    """Fraction of uniform points in Z_p^arity where ``evaluator`` vanishes."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, p, size=(samples, arity), dtype=np.int64)
    zeros = sum(1 for row in pts.tolist() if int(evaluator(row)) % p == 0)
    return Fraction(zeros, samples)


def linear_product(roots: Sequence[int], p: int) -> Callable[[Sequence[int]], int]:
    """The univariate evaluator prod_k (r - root_k), for Schwartz-Zippel checks."""

    def ev(point):
        v = 1
        for root in roots:
            v = v * (point[0] - root) % p
        return v

    return ev
