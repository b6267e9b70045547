"""Self-correction of a noisy oracle along random lines.

The restriction of f'(x, a, b) to a line ``inst + t*v`` is a univariate
polynomial of degree at most the circuit's total degree bound, so reading
the oracle at N points of the line and unique-decoding (Berlekamp-Welch)
recovers the value at ``t = 0`` as long as at most
``floor((N - d - 1) / 2)`` of those reads are wrong.

Machines here stand in for the list decoder's output: a list of
randomized evaluators, each to be filtered by the sumcheck verifier.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .certpoly import Instance
from .circuit import Circuit, degree_profile
from .field import FieldElement, UniPoly, common_modulus, eval_ints, interpolate_ints, master_poly, solve_mod, DuplicatePoint
from .oracles import Oracle


class DecoderConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DecoderParams:
    d: int
    num_points: int
    max_errors: int | None = None
    line_retries: int = 2

    def __post_init__(self):
        if self.d < 0:
            raise DecoderConfigError("degree bound must be nonnegative")
        if self.max_errors is None:
            object.__setattr__(self, "max_errors", max(0, (self.num_points - self.d - 1) // 2))
        if self.num_points < self.d + 1 + 2 * self.max_errors:
            raise DecoderConfigError(
                f"num_points={self.num_points} < d + 1 + 2e = {self.d + 1 + 2 * self.max_errors}")
        if self.line_retries < 0:
            raise DecoderConfigError("line_retries must be nonnegative")

    @classmethod
    def for_circuit(cls, c: Circuit, num_points: int | None = None, d: int | None = None,
                    line_retries: int = 2) -> DecoderParams:
        """Default geometry: N = 3d + 1 reads per line, radius d."""
        if d is None:
            d = degree_profile(c).total
        if num_points is None:
            num_points = 3 * d + 1
        return cls(d=d, num_points=num_points, line_retries=line_retries)

    def fits(self, p: int) -> bool:
        return p > self.num_points


# ----------------------------------------------------------- unique decoding


def _polydiv(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = list(num)
    if not den or den[-1] % p == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    lead_inv = pow(den[-1], -1, p)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [], num
    q = [0] * (len(num) - dd)
    for k in range(len(num) - 1 - dd, -1, -1):
        coef = num[k + dd] * lead_inv % p
        q[k] = coef
        if coef:
            for t, dc in enumerate(den):
                num[k + t] = (num[k + t] - coef * dc) % p
    rem = num[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def _agreements(coeffs: Sequence[int], xs, ys, p: int) -> int:
    X = np.asarray(xs, dtype=np.int64) % p
    acc = np.zeros_like(X)
    for c in reversed(coeffs):
        acc = (acc * X + c) % p
    return int(np.count_nonzero(acc == np.asarray(ys, dtype=np.int64) % p))


def decode_ints(xs: Sequence[int], ys: Sequence[int], d: int, max_errors: int, p: int,
                method: str = "gao") -> list[int] | None:
    """Unique decoding over Z_p; coefficients of the fit, or None.

    ``method`` picks Berlekamp-Welch ("bw", a linear solve) or Gao's
    partial extended Euclid ("gao", much cheaper in pure Python).  Both
    return the unique polynomial of degree <= d that agrees with all but at
    most ``max_errors`` reads, whenever it exists.
    """
    N = len(xs)
    e = max_errors
    if N != len(ys):
        raise ValueError("abscissae and ordinates differ in length")
    if N < d + 1 + 2 * e:
        raise DecoderConfigError(f"{N} points cannot correct {e} errors at degree {d}")
    if method not in ("gao", "bw"):
        raise DecoderConfigError(f"unknown decoding method {method!r}")
    xs = [x % p for x in xs]
    ys = [y % p for y in ys]
    if len(set(xs)) != N:
        raise DuplicatePoint("abscissae must be pairwise distinct")

    # cheap path: the first d+1 reads are often all clean
    guess = interpolate_ints(xs[: d + 1], ys[: d + 1], p)
    if _agreements(guess, xs, ys, p) >= N - e:
        return guess
    if e == 0:
        return None
    P = _gao(xs, ys, d, p) if method == "gao" else _berlekamp_welch(xs, ys, d, e, p)
    # Gao decodes to the full radius; enforce the requested one
    if P is None or _agreements(P, xs, ys, p) < N - e:
        return None
    return P


def _polymul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def _polysub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _gao(xs, ys, d: int, p: int) -> list[int] | None:
    N, k = len(xs), d + 1
    g0 = master_poly(xs, p).tolist()
    g1 = interpolate_ints(xs, ys, p)
    # partial extended Euclid: stop once deg r < (N + k) / 2
    r0, r1 = g0, g1
    v0, v1 = [], [1]
    while 2 * (len(r1) - 1) >= N + k:
        q, rem = _polydiv(r0, r1, p)
        r0, r1 = r1, rem
        v0, v1 = v1, _polysub(v0, _polymul(q, v1, p), p)
    P, rem = _polydiv(r1, v1, p)
    if rem:
        return None
    while P and P[-1] == 0:
        P.pop()
    return P if len(P) <= k else None


def _berlekamp_welch(xs, ys, d: int, e: int, p: int) -> list[int] | None:
    N = len(xs)
    # unknowns: Q_0..Q_{d+e}, E_0..E_{e-1}; E monic of degree e
    nq = d + e + 1
    A = np.zeros((N, nq + e), dtype=np.int64)
    rhs = np.zeros(N, dtype=np.int64)
    for i, (x, y) in enumerate(zip(xs, ys)):
        pw = 1
        powers = []
        for _ in range(max(nq, e + 1)):
            powers.append(pw)
            pw = pw * x % p
        A[i, :nq] = powers[:nq]
        A[i, nq:] = [(-y * powers[k]) % p for k in range(e)]
        rhs[i] = y * powers[e] % p
    sol = solve_mod(A, rhs, p)
    if sol is None:
        return None
    Q = sol[:nq]
    E = sol[nq:] + [1]
    P, rem = _polydiv(Q, E, p)
    if rem:
        return None
    while P and P[-1] == 0:
        P.pop()
    if len(P) - 1 > d:
        return None
    if _agreements(P, xs, ys, p) < N - e:
        return None
    return P


def unique_decode(points: Sequence[tuple[FieldElement, FieldElement]], d: int,
                  max_errors: int, method: str = "gao") -> UniPoly | None:
    p = common_modulus(e for pt in points for e in pt)
    coeffs = decode_ints([a.value for a, _ in points], [b.value for _, b in points], d, max_errors, p, method)
    return None if coeffs is None else UniPoly(tuple(coeffs), p)


# ------------------------------------------------------------ local correction


def _distinct_nonzero(p: int, k: int, rng: np.random.Generator) -> np.ndarray:
    if p <= 1 << 16:
        return rng.choice(np.arange(1, p, dtype=np.int64), size=k, replace=False)
    seen: dict[int, None] = {}
    while len(seen) < k:
        for t in rng.integers(1, p, size=k, dtype=np.int64).tolist():
            seen.setdefault(t)
    return np.array(list(seen)[:k], dtype=np.int64)


def _random_line(inst: Instance, params: DecoderParams, rng: np.random.Generator):
    p = inst.p
    base = inst.as_vector()
    v = np.zeros_like(base)
    while not v.any():
        v = rng.integers(0, p, size=base.shape[0], dtype=np.int64)
    ts = _distinct_nonzero(p, params.num_points, rng)
    pts = (base[None, :] + ts[:, None] * v[None, :]) % p
    return ts, pts


def local_correct(oracle: Oracle, c: Circuit, inst: Instance, params: DecoderParams,
                  rng: np.random.Generator) -> int | None:
    """Value of f' at ``inst`` decoded from random lines, or None to abstain."""
    p = inst.p
    if not params.fits(p):
        raise DecoderConfigError(f"p = {p} must exceed num_points = {params.num_points}")
    n, m = c.n, c.m
    for _ in range(1 + params.line_retries):
        ts, pts = _random_line(inst, params, rng)
        ys = oracle.answer_batch(pts[:, :n], pts[:, n:n + m], pts[:, n + m:], p)
        coeffs = decode_ints(ts.tolist(), ys.tolist(), params.d, params.max_errors, p)
        if coeffs is not None:
            return coeffs[0] if coeffs else 0
    return None


class CandidateMachine:
    """Randomized evaluator claiming to compute f'; None means abstain."""

    degree_bound: int

    def evaluate(self, inst: Instance, rng: np.random.Generator | None = None) -> int | None:
        raise NotImplementedError

    def evaluate_batch(self, x, A, B, p: int, rng=None) -> list[int | None]:
        """Answers for the instances (x, A[k], B[k]); override when batching pays."""
        return [self.evaluate(Instance(x, a, b, p), rng) for a, b in zip(A, B)]

    def __call__(self, inst, rng=None):
        return self.evaluate(inst, rng)

    def describe(self) -> dict:
        return {"kind": type(self).__name__}


class LineMachine(CandidateMachine):
    def __init__(self, oracle: Oracle, circuit: Circuit, params: DecoderParams, seed: int):
        self.oracle = oracle
        self.circuit = circuit
        self.params = params
        self.degree_bound = params.d
        self.seed = int(seed)
        self._rng = np.random.default_rng(self.seed)

    def evaluate(self, inst, rng=None):
        return local_correct(self.oracle, self.circuit, inst, self.params, rng or self._rng)

    def describe(self):
        return {"kind": "line", "seed": self.seed, "d": self.params.d,
                "num_points": self.params.num_points, "max_errors": self.params.max_errors,
                "line_retries": self.params.line_retries}


class DirectMachine(CandidateMachine):
    """Passes queries straight to the oracle (no correction)."""

    def __init__(self, oracle: Oracle, degree_bound: int):
        self.oracle = oracle
        self.degree_bound = degree_bound

    def evaluate(self, inst, rng=None):
        return self.oracle.answer(inst)

    def evaluate_batch(self, x, A, B, p, rng=None):
        A = np.asarray(A, dtype=np.int64)
        X = np.broadcast_to(np.asarray(x, dtype=np.int64), (A.shape[0], len(x)))
        return self.oracle.answer_batch(X, A, B, p).tolist()

    def describe(self):
        return {"kind": "direct", "d": self.degree_bound}


def candidate_machines(oracle: Oracle, c: Circuit, params: DecoderParams, count: int = 1,
                       rng: np.random.Generator | int | None = 0) -> list[CandidateMachine]:
    """``count`` line-decoding machines with independent seeds."""
    if count < 1:
        raise DecoderConfigError("count must be positive")
    rng = np.random.default_rng(rng)
    seeds = rng.integers(0, 2**63 - 1, size=count)
    return [LineMachine(oracle, c, params, int(s)) for s in seeds]
