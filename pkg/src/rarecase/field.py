"""Arithmetic in Z_p and univariate polynomials over Z_p.

Two layers live here.  ``FieldElement`` and ``UniPoly`` are the checked,
self-describing public types: every value carries its modulus and mixing
moduli raises.  The ``*_ints`` helpers work on plain Python ints with an
explicit prime and are what the protocol hot paths call.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Products of two residues must fit in a signed 64-bit int for the numpy paths.
MAX_PRIME = 2**31


class FieldError(ValueError):
    pass


class NonInvertible(FieldError, ZeroDivisionError):
    pass


class ModulusMismatch(FieldError):
    pass


class DuplicatePoint(FieldError):
    pass


@lru_cache(maxsize=1024)
def _is_prime(n: int) -> bool:
    # Miller-Rabin with bases 2, 3, 5, 7 is exact below 3.2e9
    if n < 2:
        return False
    for q in (2, 3, 5, 7):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_modulus(p: int) -> int:
    p = int(p)
    if p <= 2 or p >= MAX_PRIME or not _is_prime(p):
        raise FieldError(f"modulus must be an odd prime below 2^31, got {p}")
    return p


@dataclass(frozen=True, slots=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.modulus
        return NotImplemented

    def _new(self, v: int) -> FieldElement:
        return FieldElement(v, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * inv(self._new(o))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise NonInvertible(f"0 has no inverse mod {a.modulus}")
    return FieldElement(pow(a.value, -1, a.modulus), a.modulus)


def inv_int(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise NonInvertible(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def common_modulus(elements: Iterable[FieldElement]) -> int:
    p = None
    for e in elements:
        if p is None:
            p = e.modulus
        elif e.modulus != p:
            raise ModulusMismatch(f"{p} != {e.modulus}")
    if p is None:
        raise FieldError("cannot infer a modulus from an empty sequence")
    return p


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class UniPoly:
    """Polynomial over Z_p, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        p = check_modulus(self.modulus)
        object.__setattr__(self, "coeffs", tuple(_trim([int(c) % p for c in self.coeffs])))

    @classmethod
    def zero(cls, p: int) -> UniPoly:
        return cls((), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, r) -> FieldElement:
        return poly_eval(self, r)

    def field_coeffs(self) -> list[FieldElement]:
        return [FieldElement(c, self.modulus) for c in self.coeffs]


def eval_ints(coeffs: Sequence[int], r: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * r + c) % p
    return acc


def poly_eval(f: UniPoly, r) -> FieldElement:
    """Horner evaluation; ``r`` may be a FieldElement or an int."""
    if isinstance(r, FieldElement):
        if r.modulus != f.modulus:
            raise ModulusMismatch(f"{f.modulus} != {r.modulus}")
        r = r.value
    return FieldElement(eval_ints(f.coeffs, int(r) % f.modulus, f.modulus), f.modulus)


def master_poly(xs: Sequence[int], p: int) -> np.ndarray:
    """Coefficients of prod_j (r - x_j) mod p, lowest degree first."""
    out = np.zeros(len(xs) + 1, dtype=np.int64)
    out[0] = 1
    for k, xj in enumerate(xs):
        # multiply by (r - xj); only the first k + 2 entries can be nonzero
        head = out[: k + 1].copy()
        out[0] = 0
        out[1: k + 2] = head
        out[: k + 1] = (out[: k + 1] - head * (xj % p)) % p
    return out


def _interpolate_small(xs, ys, p):
    k = len(xs)
    master = [int(v) for v in master_poly(xs, p)]
    out = [0] * k
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        if yj == 0:
            continue
        # synthetic division master / (r - xj)
        q = [0] * k
        carry = 0
        for t in range(k, 0, -1):
            carry = (master[t] + carry * xj) % p
            q[t - 1] = carry
        denom = 1
        for l, xl in enumerate(xs):
            if l != j:
                denom = denom * (xj - xl) % p
        w = yj * pow(denom, -1, p) % p
        for t in range(k):
            out[t] = (out[t] + w * q[t]) % p
    return out


def _interpolate_np(xs, ys, p):
    # same algorithm, vectorised across the k basis polynomials; every
    # product of two residues stays below 2^62 because p < 2^31
    k = len(xs)
    X = np.array(xs, dtype=np.int64)
    master = master_poly(xs, p)
    Q = np.zeros((k, k), dtype=np.int64)
    carry = np.zeros(k, dtype=np.int64)
    for t in range(k, 0, -1):
        carry = (master[t] + carry * X) % p
        Q[:, t - 1] = carry
    diff = (X[:, None] - X[None, :]) % p
    np.fill_diagonal(diff, 1)
    denom = np.ones(k, dtype=np.int64)
    for l in range(k):
        denom = denom * diff[:, l] % p
    w = np.array([y * pow(int(dj), -1, p) % p for y, dj in zip(ys, denom.tolist())], dtype=np.int64)
    return ((Q * w[:, None]) % p).sum(axis=0) % p


def interpolate_ints(xs: Sequence[int], ys: Sequence[int], p: int) -> list[int]:
    """Lagrange interpolation in O(k^2); returns trimmed coefficients."""
    k = len(xs)
    if k == 0:
        raise FieldError("need at least one point")
    if k != len(ys):
        raise FieldError("abscissae and ordinates differ in length")
    xs = [x % p for x in xs]
    ys = [y % p for y in ys]
    if len(set(xs)) != k:
        raise DuplicatePoint("abscissae must be pairwise distinct")
    if k <= 24:
        return _trim(_interpolate_small(xs, ys, p))
    return _trim([int(v) for v in _interpolate_np(xs, ys, p)])


def interpolate(points: Sequence[tuple[FieldElement, FieldElement]]) -> UniPoly:
    if not points:
        raise FieldError("need at least one point")
    p = common_modulus(e for pt in points for e in pt)
    if len(points) > p:
        raise FieldError(f"at most {p} distinct points exist mod {p}")
    xs = [pt[0].value for pt in points]
    ys = [pt[1].value for pt in points]
    return UniPoly(tuple(interpolate_ints(xs, ys, p)), p)


def solve_mod(A, b, p: int):
    """One solution of A·u = b over Z_p (free variables set to 0), or None.

    Row reduction is vectorised with numpy int64; valid because p < 2^31.
    """
    A = np.array(A, dtype=np.int64) % p
    b = np.array(b, dtype=np.int64).reshape(-1, 1) % p
    rows, cols = A.shape
    M = np.concatenate([A, b], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        factors = M[:, c].copy()
        factors[r] = 0
        M = (M - np.outer(factors, M[r]) % p) % p
        pivots.append(c)
        r += 1
    if np.any(M[r:, cols] != 0):
        return None
    u = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        u[c] = M[i, cols]
    return [int(v) for v in u]
