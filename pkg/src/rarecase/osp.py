"""Oracle sumcheck verifier.

Round i (1-based) queries the machine for ``s_{i-1} = M(x, a, b)``, then
for each probe r asks ``2^{-1} M(x, a|a_i=0, b|b_i=c*r+d)`` where c, d are
the current a_i, b_i.  The probes are interpolated into h_i, which must
respect the degree bound of z_i and satisfy ``h_i(0) + h_i(1) = s_{i-1}``.
A uniform r_i then fixes ``a_i = 0, b_i = c*r_i + d``.

Once every a_i is zero, f'(x, 0, b) = 2^m g(x, b) because each summand
ignores z.  An honest machine therefore ends with
``h_m(r_m) = 2^{-1} f'(x, 0, b) = 2^{m-1} g(x, b)``, and that is what the
final check compares against, computed from one circuit evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .certpoly import Instance, _check_instance
from .circuit import Circuit, arith_eval_ints, degree_profile
from .decoder import CandidateMachine
from .field import eval_ints, interpolate_ints


class OspConfigError(ValueError):
    pass


class Verdict(str, Enum):
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"


class Reason(str, Enum):
    DEGREE_TOO_HIGH = "DegreeTooHigh"
    SUM_MISMATCH = "SumMismatch"
    FINAL_EVAL_MISMATCH = "FinalEvalMismatch"
    ABSTAIN = "Abstain"
    CROSS_ROUND_MISMATCH = "CrossRoundMismatch"


@dataclass(frozen=True)
class OspConfig:
    mode: str = "faithful"
    sample_points: int | None = None
    repetitions: int = 1
    strict_cross_round: bool = False

    def __post_init__(self):
        if self.mode not in ("faithful", "sampled"):
            raise OspConfigError(f"unknown mode {self.mode!r}")
        if self.repetitions < 1:
            raise OspConfigError("repetitions must be at least 1")


@dataclass
class RoundRecord:
    index: int
    h_coeffs: list[int]
    degree_bound: int
    s_prev: int
    probes: int
    r: int | None = None

    def to_dict(self) -> dict:
        return {"round": self.index, "h_coeffs": list(self.h_coeffs), "degree_bound": self.degree_bound,
                "s_prev": self.s_prev, "probes": self.probes, "r": self.r}


@dataclass
class ProtocolTranscript:
    p: int
    seed: int
    mode: str
    rounds: list[RoundRecord] = field(default_factory=list)
    verdict: Verdict = Verdict.REJECT
    reason: Reason | None = None
    final_value: int | None = None
    final_expected: int | None = None
    machine_calls: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    def to_dict(self) -> dict:
        return {
            "p": self.p, "seed": self.seed, "mode": self.mode,
            "rounds": [r.to_dict() for r in self.rounds],
            "verdict": self.verdict.value,
            "reason": None if self.reason is None else self.reason.value,
            "final_value": self.final_value, "final_expected": self.final_expected,
            "machine_calls": self.machine_calls, "notes": list(self.notes),
        }


def _seed_from(rng) -> int:
    if rng is None:
        raise OspConfigError("protocol randomness must be seeded")
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    return int(rng.integers(0, 2**63 - 1))


def run_osp(machine: CandidateMachine, c: Circuit, inst: Instance, cfg: OspConfig, rng,
            claim: int | None = None) -> ProtocolTranscript:
    """One execution of the verifier against ``machine`` at ``inst``.

    ``rng`` is a Generator (a seed is drawn from it) or an int seed; the
    seed is recorded so the run can be replayed exactly.  With ``claim``
    given, it replaces the machine's first answer as s_0.
    """
    _check_instance(c, inst)
    p, m = inst.p, c.m
    per_z = degree_profile(c).per_z
    seed = _seed_from(rng)
    gen = np.random.default_rng(seed)
    tr = ProtocolTranscript(p=p, seed=seed, mode=cfg.mode)
    half = pow(2, -1, p)

    if cfg.mode == "sampled":
        for i, dz in enumerate(per_z, start=1):
            k = cfg.sample_points if cfg.sample_points is not None else dz + 2
            if k < dz + 2:
                raise OspConfigError(f"sample_points must be >= {dz + 2} for z{i}")
            if k > p:
                raise OspConfigError(f"sample_points {k} exceeds p = {p}")
        tr.notes.append("sampled mode: experimental, weaker degree check")
    elif any(dz >= p for dz in per_z):
        # p points always fit a polynomial of degree <= p - 1
        tr.notes.append("degree check vacuous: p <= degree bound of some z_i")

    x = list(inst.x)
    a = list(inst.a)
    b = list(inst.b)

    def ask(aa, bb):
        tr.machine_calls += 1
        return machine.evaluate(Instance(x, aa, bb, p), gen)

    h = None
    r_prev = None
    for i in range(1, m + 1):
        j = i - 1
        if i == 1 and claim is not None:
            s_prev = int(claim) % p
        else:
            s_prev = ask(a, b)
            if s_prev is None:
                tr.reason = Reason.ABSTAIN
                return tr
        if cfg.strict_cross_round and h is not None and s_prev != 2 * eval_ints(h, r_prev, p) % p:
            tr.reason = Reason.CROSS_ROUND_MISMATCH
            return tr

        cj, dj = a[j], b[j]
        k = p if cfg.mode == "faithful" else (cfg.sample_points or per_z[j] + 2)
        rs = list(range(k))
        A = [list(a) for _ in rs]
        B = [list(b) for _ in rs]
        for r, aa, bb in zip(rs, A, B):
            aa[j] = 0
            bb[j] = (cj * r + dj) % p
        tr.machine_calls += k
        answers = machine.evaluate_batch(x, A, B, p, gen)
        if any(v is None for v in answers):
            tr.reason = Reason.ABSTAIN
            return tr
        ys = [half * int(v) % p for v in answers]
        h = interpolate_ints(rs, ys, p)
        rec = RoundRecord(index=i, h_coeffs=h, degree_bound=per_z[j], s_prev=s_prev, probes=len(rs))
        tr.rounds.append(rec)
        if len(h) - 1 > per_z[j]:
            tr.reason = Reason.DEGREE_TOO_HIGH
            return tr
        if (eval_ints(h, 0, p) + eval_ints(h, 1, p)) % p != s_prev:
            tr.reason = Reason.SUM_MISMATCH
            return tr
        r_i = int(gen.integers(0, p))
        rec.r = r_i
        r_prev = r_i
        a[j] = 0
        b[j] = (cj * r_i + dj) % p

    tr.final_value = eval_ints(h, r_prev, p)
    tr.final_expected = pow(2, m - 1, p) * arith_eval_ints(c, x, b, p) % p
    if tr.final_value == tr.final_expected:
        tr.verdict = Verdict.ACCEPT
    else:
        tr.reason = Reason.FINAL_EVAL_MISMATCH
    return tr


@dataclass
class CertifyResult:
    passed: bool
    transcripts: list[ProtocolTranscript]

    def __bool__(self):
        return self.passed

    @property
    def machine_calls(self) -> int:
        return sum(t.machine_calls for t in self.transcripts)


def certify(machine: CandidateMachine, c: Circuit, inst: Instance, cfg: OspConfig, rng,
            claim: int | None = None) -> CertifyResult:
    """Approve the machine only if it passes ``cfg.repetitions`` independent runs.

    Stops at the first rejection.
    """
    if cfg.repetitions < 1:
        raise OspConfigError("repetitions must be at least 1")
    rng = np.random.default_rng(rng)
    out = []
    for _ in range(cfg.repetitions):
        tr = run_osp(machine, c, inst, cfg, rng, claim=claim)
        out.append(tr)
        if not tr.accepted:
            return CertifyResult(False, out)
    return CertifyResult(True, out)


def check_transcript(tr: ProtocolTranscript) -> bool:
    """Recheck the stored round arithmetic of an accepted transcript."""
    p = tr.p
    prev = None
    for rec in tr.rounds:
        if len(rec.h_coeffs) - 1 > rec.degree_bound and rec.degree_bound < p:
            return False
        if (eval_ints(rec.h_coeffs, 0, p) + eval_ints(rec.h_coeffs, 1, p)) % p != rec.s_prev:
            return False
        if rec.r is None or not 0 <= rec.r < p:
            return False
        prev = rec
    if tr.accepted:
        return prev is not None and eval_ints(prev.h_coeffs, prev.r, p) == tr.final_expected
    return True
