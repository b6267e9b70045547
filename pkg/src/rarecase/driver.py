"""Count reconstruction across primes and the membership decision.

For every prime the driver builds candidate machines from the oracle,
asks them for f'(x, 1, 0) mod p, and keeps an answer only if the sumcheck
verifier certifies it.  Certified residues whose moduli multiply past
2^m determine the certificate count by Chinese remaindering.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .certpoly import CountResult, Instance, _guard
from .circuit import Circuit, degree_profile
from .decoder import CandidateMachine, DecoderConfigError, DecoderParams, DirectMachine, candidate_machines
from .oracles import Oracle
from .osp import OspConfig, certify


class InsufficientPrimes(RuntimeError):
    """Certified primes do not multiply past 2^m."""

    def __init__(self, msg: str, rows: list[dict], certified: list[CertifiedResidue]):
        super().__init__(msg)
        self.rows = rows
        self.certified = certified


class ReconstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class CertifiedResidue:
    p: int
    residue: int
    transcript_ref: str


def crt_combine(residues: Sequence[tuple[int, int]]) -> int:
    """Unique x in [0, prod p) with x = r (mod p) for every pair."""
    seen = set()
    x, mod = 0, 1
    for p, r in residues:
        p, r = int(p), int(r)
        if p < 2:
            raise ValueError(f"bad modulus {p}")
        if p in seen:
            raise ValueError(f"duplicate modulus {p}")
        if not 0 <= r < p:
            raise ValueError(f"residue {r} out of range for modulus {p}")
        seen.add(p)
        if math.gcd(p, mod) != 1:
            raise ValueError(f"modulus {p} is not coprime to the others")
        # x + mod*t = r (mod p)
        t = (r - x) * pow(mod, -1, p) % p
        x += mod * t
        mod *= p
    return x


@dataclass
class PipelineConfig:
    """Decoder and verifier knobs shared by every prime."""

    osp: OspConfig = field(default_factory=lambda: OspConfig(repetitions=2))
    decoder: str = "auto"  # lines | direct | auto
    d: int | None = None
    num_points: int | None = None
    line_retries: int = 2
    machines: int = 2

    def __post_init__(self):
        if self.decoder not in ("lines", "direct", "auto"):
            raise ValueError(f"unknown decoder mode {self.decoder!r}")
        if self.machines < 1:
            raise ValueError("machines must be positive")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["osp"] = asdict(self.osp)
        return out


def _machines_for(oracle: Oracle, c: Circuit, p: int, cfg: PipelineConfig, seed: int) -> list[CandidateMachine]:
    params = DecoderParams.for_circuit(c, num_points=cfg.num_points, d=cfg.d, line_retries=cfg.line_retries)
    mode = cfg.decoder
    if mode == "auto":
        mode = "lines" if params.fits(p) else "direct"
    if mode == "direct":
        return [DirectMachine(oracle, params.d)]
    if not params.fits(p):
        raise DecoderConfigError(f"line decoding needs p > num_points = {params.num_points}, got p = {p}")
    return candidate_machines(oracle, c, params, count=cfg.machines, rng=seed)


@dataclass
class Reconstruction:
    count: CountResult
    certified: list[CertifiedResidue]
    rows: list[dict]

    @property
    def queries(self) -> int:
        return sum(r["queries"] for r in self.rows)


def certify_prime(c: Circuit, x: Sequence[int], p: int, oracle: Oracle, cfg: PipelineConfig,
                  seed: int) -> tuple[dict, CertifiedResidue | None]:
    """Decode-and-certify f'(x, 1, 0) mod p; returns a report row and the residue."""
    gen = np.random.default_rng(seed)
    q0 = oracle.queries
    t0 = time.perf_counter()
    inst = Instance.counting(x, c.m, p)
    machines = _machines_for(oracle, c, p, cfg, int(gen.integers(0, 2**63 - 1)))
    row = {"p": p, "seed": seed, "status": "abstained", "residue": None, "attempts": []}
    found = None
    for k, machine in enumerate(machines):
        claim = machine.evaluate(inst, gen)
        attempt = {"machine": machine.describe(), "claim": claim}
        if claim is None:
            attempt["outcome"] = "abstained"
            row["attempts"].append(attempt)
            continue
        res = certify(machine, c, inst, cfg.osp, gen, claim=claim)
        attempt["outcome"] = "certified" if res.passed else "rejected"
        attempt["transcripts"] = [t.to_dict() for t in res.transcripts]
        row["attempts"].append(attempt)
        if res.passed:
            row["status"] = "certified"
            row["residue"] = int(claim)
            found = CertifiedResidue(p, int(claim), f"p{p}/machine{k}")
            break
        row["status"] = "rejected"
    row["queries"] = oracle.queries - q0
    row["timings_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return row, found


def _prime_seeds(primes: Sequence[int], rng) -> list[int]:
    master = np.random.default_rng(rng)
    return [int(s) for s in master.integers(0, 2**63 - 1, size=len(primes))]


def reconstruct_count(c: Circuit, x: Sequence[int], primes: Sequence[int], oracle: Oracle,
                      cfg: PipelineConfig | None = None, rng=0) -> Reconstruction:
    """Exact certificate count of x, or InsufficientPrimes."""
    _guard(c.m)
    cfg = cfg or PipelineConfig()
    primes = [int(p) for p in primes]
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    if len(x) != c.n or any(v not in (0, 1) for v in x):
        raise ValueError(f"x must be a bit vector of length {c.n}")
    rows, certified = [], []
    for p, seed in zip(primes, _prime_seeds(primes, rng)):
        row, cr = certify_prime(c, x, p, oracle, cfg, seed)
        rows.append(row)
        if cr is not None:
            certified.append(cr)
    product = math.prod(cr.p for cr in certified)
    if product <= 2**c.m:
        failed = [f"{r['p']}:{r['status']}" for r in rows if r["status"] != "certified"]
        raise InsufficientPrimes(
            f"certified product {product} does not exceed 2^{c.m}; failed primes: {', '.join(failed) or 'none'}",
            rows, certified)
    count = crt_combine([(cr.p, cr.residue) for cr in certified])
    if count > 2**c.m:
        raise ReconstructionError(f"reconstructed {count} exceeds 2^{c.m}: inconsistent residues")
    return Reconstruction(CountResult(count), certified, rows)


def decide_membership(c: Circuit, x: Sequence[int], primes: Sequence[int], oracle: Oracle,
                      cfg: PipelineConfig | None = None, rng=0) -> bool:
    return reconstruct_count(c, x, primes, oracle, cfg, rng).count.count > 0


def required_product_ok(primes: Sequence[int], m: int) -> bool:
    return math.prod(primes) > 2**m


def soundness_bound(c: Circuit, p: int) -> float:
    """2 d m / p with d the largest per-variable degree bound."""
    prof = degree_profile(c)
    return 2 * max(prof.per_z) * c.m / p
