"""Oracles for f'' and majority amplification of randomized evaluators.

Every oracle is a deterministic function of the instance.  "Correct on a
rho-fraction of instances" is realised with a keyed hash of the instance,
never with per-query coin flips, so repeated queries agree.
"""
from __future__ import annotations

import hashlib
import threading
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .certpoly import Instance, f_prime_batch
from .circuit import Circuit


class Oracle:
    """Base class: subclasses implement ``_answer_batch``.

    ``answer_batch`` takes arrays X (Q, n), A (Q, m), B (Q, m) of residues
    mod p and returns Q answers; ``queries`` counts every answered instance.
    """

    kind = "oracle"

    def __init__(self):
        self._lock = threading.Lock()
        self._queries = 0

    @property
    def queries(self) -> int:
        return self._queries

    def _count(self, k: int) -> None:
        with self._lock:
            self._queries += k

    def answer(self, inst: Instance) -> int:
        return int(self.answer_batch([inst.x], [inst.a], [inst.b], inst.p)[0])

    def answer_batch(self, X, A, B, p: int) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        A = A.reshape(A.shape[0] if A.ndim > 1 else 1, -1)
        Q = A.shape[0]
        X = np.asarray(X, dtype=np.int64).reshape(Q, -1)
        B = np.asarray(B, dtype=np.int64).reshape(Q, -1)
        self._count(Q)
        return self._answer_batch(X % p, A % p, B % p, p)

    def _answer_batch(self, X, A, B, p) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


class HonestOracle(Oracle):
    kind = "honest"

    def __init__(self, circuit: Circuit):
        super().__init__()
        self.circuit = circuit

    def _answer_batch(self, X, A, B, p):
        return f_prime_batch(self.circuit, X, A, B, p)


def honest_oracle(c: Circuit) -> HonestOracle:
    return HonestOracle(c)


class Corruption(str, Enum):
    OFFSET_BY_ONE = "offset_by_one"
    RANDOM_VALUE = "random_value"


@dataclass(frozen=True)
class NoisyOracleConfig:
    rho: float
    seed: int = 0
    corruption: Corruption = Corruption.OFFSET_BY_ONE
    # optional per-prime override of rho
    rho_by_prime: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "corruption", Corruption(self.corruption))
        for r in [self.rho, *(r for _, r in self.rho_by_prime)]:
            if not 0 <= r <= 1:
                raise ValueError(f"rho must lie in [0, 1], got {r}")

    def rho_for(self, p: int) -> float:
        return dict(self.rho_by_prime).get(p, self.rho)


def _prf(seed: int, p: int, row: np.ndarray) -> tuple[float, int]:
    h = hashlib.blake2b(row.tobytes(), digest_size=16,
                        key=int(seed & (2**64 - 1)).to_bytes(8, "little"),
                        person=int(p).to_bytes(8, "little")).digest()
    u = int.from_bytes(h[:8], "little") / 2.0**64
    return u, int.from_bytes(h[8:], "little")


class NoisyOracle(Oracle):
    kind = "noisy"

    def __init__(self, base: Oracle, cfg: NoisyOracleConfig):
        super().__init__()
        self.base = base
        self.cfg = cfg

    def is_correct_on(self, inst: Instance) -> bool:
        u, _ = _prf(self.cfg.seed, inst.p, inst.as_vector())
        return u < self.cfg.rho_for(inst.p)

    def _answer_batch(self, X, A, B, p):
        truth = self.base._answer_batch(X, A, B, p)
        rows = np.ascontiguousarray(np.concatenate([X, A, B], axis=1), dtype=np.int64)
        rho = self.cfg.rho_for(p)
        out = truth.copy()
        for q in range(rows.shape[0]):
            u, word = _prf(self.cfg.seed, p, rows[q])
            if u < rho:
                continue
            if self.cfg.corruption is Corruption.OFFSET_BY_ONE:
                out[q] = (truth[q] + 1) % p
            else:
                out[q] = word % p
        return out

    def describe(self):
        return {"kind": self.kind, "rho": self.cfg.rho, "seed": self.cfg.seed,
                "corruption": self.cfg.corruption.value,
                "rho_by_prime": [list(t) for t in self.cfg.rho_by_prime],
                "base": self.base.describe()}


def noisy_oracle(base: Oracle, cfg: NoisyOracleConfig) -> NoisyOracle:
    # rho = 0 is accepted: it models an oracle with nothing certifiable
    return NoisyOracle(base, cfg)


class ShiftedOracle(Oracle):
    """Answers base + delta: a consistent liar."""

    kind = "shifted"

    def __init__(self, base: Oracle, delta: int):
        super().__init__()
        self.base = base
        self.delta = int(delta)

    def _answer_batch(self, X, A, B, p):
        if self.delta % p == 0:
            raise ValueError(f"delta {self.delta} vanishes mod {p}")
        return (self.base._answer_batch(X, A, B, p) + self.delta) % p

    def describe(self):
        return {"kind": self.kind, "delta": self.delta, "base": self.base.describe()}


def shifted_oracle(base: Oracle, delta: int) -> ShiftedOracle:
    if int(delta) == 0:
        raise ValueError("delta must be nonzero")
    return ShiftedOracle(base, delta)


def majority_amplify(machine: Callable[[Instance, np.random.Generator], int | None], inst: Instance,
                     trials: int, rng: np.random.Generator) -> int:
    """Strict-majority answer over ``trials`` runs; 0 when no value has one."""
    if trials < 1 or trials % 2 == 0:
        raise ValueError("trials must be a positive odd integer")
    votes = Counter(machine(inst, rng) for _ in range(trials))
    value, n = votes.most_common(1)[0]
    if n * 2 > trials and value is not None:
        return int(value) % inst.p
    return 0
