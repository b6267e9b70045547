"""Experiment configuration and JSON reports behind the command line.

Every report echoes its configuration and seeds so it can be replayed;
wall-clock figures live only under ``timings_ms`` keys, which
``strip_timings`` removes for byte-level comparisons.
"""
from __future__ import annotations

import json
import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .certpoly import Instance, count_certificates_bruteforce, estimate_zero_fraction, linear_product, self_reduction_sides
from .circuit import Circuit, arith_eval_ints, build_cnf_verifier, degree_profile, parse_circuit, parse_dimacs
from .decoder import DirectMachine
from .driver import InsufficientPrimes, PipelineConfig, ReconstructionError, reconstruct_count, soundness_bound
from .oracles import NoisyOracleConfig, Oracle, honest_oracle, noisy_oracle, shifted_oracle
from .osp import OspConfig, run_osp
from .primes import gap_report, max_gap, primes_from, primes_in_interval

DEFAULT_FORMULA = (2, [[1, 2]])  # z1 OR z2


@dataclass
class ExperimentConfig:
    circuit: str | None = None
    circuit_format: str = "auto"
    x: str | None = None
    primes: dict = field(default_factory=lambda: {"list": [101, 103, 107]})
    oracle: dict = field(default_factory=lambda: {"kind": "honest"})
    decoder: dict = field(default_factory=dict)
    osp: dict = field(default_factory=dict)
    seed: int = 0
    out: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)

    def pipeline(self) -> PipelineConfig:
        dec = dict(self.decoder)
        osp = OspConfig(mode=self.osp.get("mode", "faithful"),
                        sample_points=self.osp.get("sample_points"),
                        repetitions=int(self.osp.get("repetitions", 2)),
                        strict_cross_round=bool(self.osp.get("strict_cross_round", False)))
        return PipelineConfig(osp=osp, decoder=dec.get("mode", "auto"), d=dec.get("d"),
                              num_points=dec.get("num_points"), line_retries=int(dec.get("line_retries", 2)),
                              machines=int(dec.get("machines", 2)))


def load_circuit(path: str | None, fmt: str = "auto", x: str | None = None) -> tuple[Circuit, tuple[int, ...]]:
    """Circuit and instance bits; DIMACS input yields the CNF verifier and its encoding."""
    if path is None:
        v, clauses = DEFAULT_FORMULA
        return build_cnf_verifier(v, clauses)
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "auto":
        fmt = "dimacs" if Path(path).suffix in (".cnf", ".dimacs") or text.lstrip().startswith(("p cnf", "c")) else "dsl"
    if fmt == "dimacs":
        v, clauses = parse_dimacs(text)
        return build_cnf_verifier(v, clauses)
    c = parse_circuit(text)
    bits = tuple(int(ch) for ch in (x or "") if ch in "01")
    if len(bits) != c.n:
        raise ValueError(f"--x must give {c.n} bits for this circuit")
    return c, bits


def select_primes(spec: dict) -> list[int]:
    if "list" in spec:
        return [int(p) for p in spec["list"]]
    if "lo" in spec and "hi" in spec:
        return [p for p in primes_in_interval(int(spec["lo"]), int(spec["hi"])) if p > 2]
    if "min_prime" in spec and "count" in spec:
        return primes_from(int(spec["min_prime"]), int(spec["count"]))
    raise ValueError("prime selection needs 'list', 'lo'/'hi' or 'min_prime'/'count'")


def build_oracle(block: dict, c: Circuit, seed: int) -> Oracle:
    kind = block.get("kind", "honest")
    base = honest_oracle(c)
    if kind == "honest":
        return base
    if kind == "noisy":
        cfg = NoisyOracleConfig(rho=float(block.get("rho", 0.95)), seed=int(block.get("seed", seed)),
                                corruption=block.get("corruption", "offset_by_one"),
                                rho_by_prime=tuple(tuple(t) for t in block.get("rho_by_prime", ())))
        return noisy_oracle(base, cfg)
    if kind == "shifted":
        return shifted_oracle(base, int(block.get("delta", 1)))
    raise ValueError(f"unknown oracle kind {kind!r}")


def circuit_summary(c: Circuit) -> dict:
    prof = degree_profile(c)
    return {"n": c.n, "m": c.m, "gates": c.size, "degree_total": prof.total, "degree_per_z": list(prof.per_z)}


def _gap_stats(primes: list[int]) -> dict:
    ps = sorted(primes)
    out = {"selected_gaps": [b - a for a, b in zip(ps, ps[1:])]}
    if len(ps) >= 2:
        try:
            out["max_gap_in_range"] = max_gap(ps[0] - 1, ps[-1] + 1)
        except ValueError:
            out["max_gap_in_range"] = None
        out["comparator"] = round(ps[0] ** 0.526, 6)
    return out


def _sz_estimate(c: Circuit, p: int, seed: int, samples: int = 2000) -> dict:
    d = degree_profile(c).total

    def g(point):
        return arith_eval_ints(c, point[: c.n], point[c.n:], p)

    frac = estimate_zero_fraction(g, p, c.n + c.m, samples, seed)
    return {"p": p, "degree_bound": d, "bound": min(1.0, d / p), "zero_fraction": float(frac), "samples": samples}


def run_demo(cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    c, x = load_circuit(cfg.circuit, cfg.circuit_format, cfg.x)
    primes = select_primes(cfg.primes)
    oracle = build_oracle(cfg.oracle, c, cfg.seed)
    pipe = cfg.pipeline()
    report = {
        "experiment": "demo", "version": __version__, "config": cfg.to_dict(),
        "pipeline": pipe.to_dict(), "circuit": circuit_summary(c), "x": "".join(map(str, x)),
        "primes": primes, "oracle": oracle.describe(),
        "notes": ["unique decoding on random lines stands in for list decoding",
                  "primes are treated uniformly; per-prime instance weighting is not modelled"],
    }
    if pipe.osp.mode == "sampled":
        report["notes"].append("sampled OSP mode is experimental")
    try:
        rec = reconstruct_count(c, x, primes, oracle, pipe, rng=cfg.seed)
        report.update(status="ok", count=str(rec.count.count), member=rec.count.count > 0,
                      per_prime=rec.rows, certified=[asdict(cr) for cr in rec.certified])
    except InsufficientPrimes as exc:
        report.update(status="insufficient_primes", count=None, member=None, per_prime=exc.rows,
                      certified=[asdict(cr) for cr in exc.certified], error=str(exc))
    except ReconstructionError as exc:
        report.update(status="inconsistent", count=None, member=None, per_prime=[], error=str(exc))
    report["seeds"] = {"master": cfg.seed, "per_prime": [r["seed"] for r in report["per_prime"]]}
    report["queries"] = {"total": oracle.queries, "per_prime": [r["queries"] for r in report["per_prime"]]}
    if c.m <= 20:
        report["brute_force_count"] = str(count_certificates_bruteforce(c, x).count)
    report["gap_statistics"] = _gap_stats(primes)
    report["schwartz_zippel"] = _sz_estimate(c, primes[0], cfg.seed) if primes else None
    report["timings_ms"] = {"total": round((time.perf_counter() - t0) * 1000, 3)}
    return report


def run_soundness(c: Circuit, x, p: int, trials: int, delta: int, seed: int,
                  osp_cfg: OspConfig | None = None) -> dict:
    """Accept rate of the verifier against a machine answering f' + delta."""
    t0 = time.perf_counter()
    osp_cfg = osp_cfg or OspConfig()
    machine = DirectMachine(shifted_oracle(honest_oracle(c), delta), degree_profile(c).total)
    rng = np.random.default_rng(seed)
    reasons = Counter()
    accepts = 0
    for _ in range(trials):
        a = rng.integers(0, p, size=c.m).tolist()
        b = rng.integers(0, p, size=c.m).tolist()
        tr = run_osp(machine, c, Instance(x, a, b, p), osp_cfg, rng)
        accepts += tr.accepted
        reasons[tr.reason.value if tr.reason else "ACCEPT"] += 1
    bound = soundness_bound(c, p)
    return {"experiment": "soundness", "version": __version__, "circuit": circuit_summary(c), "p": p,
            "delta": delta, "trials": trials, "seed": seed, "osp": asdict(osp_cfg), "accepts": accepts,
            "accept_rate": accepts / trials, "bound": bound, "within_bound": accepts / trials <= bound,
            "reasons": dict(sorted(reasons.items())),
            "timings_ms": {"total": round((time.perf_counter() - t0) * 1000, 3)}}


def run_identity(c: Circuit, p: int, samples: int, seed: int) -> dict:
    """Check both sides of the self-reduction identity on random tuples."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(samples):
        x = rng.integers(0, p, size=c.n).tolist()
        a = rng.integers(0, p, size=c.m).tolist()
        b = rng.integers(0, p, size=c.m).tolist()
        r = int(rng.integers(0, p))
        i = int(rng.integers(1, c.m + 1))
        lhs, rhs = self_reduction_sides(c, x, a, b, r, i, p)
        if lhs != rhs:
            failures.append({"sample": k, "lhs": lhs.value, "rhs": rhs.value})
    return {"experiment": "identity", "version": __version__, "circuit": circuit_summary(c), "p": p,
            "samples": samples, "seed": seed, "equal": samples - len(failures), "failures": failures,
            "timings_ms": {"total": round((time.perf_counter() - t0) * 1000, 3)}}


def run_zerofrac(degree: int, samples: int, p: int, seed: int) -> dict:
    """Zero fraction of a product of ``degree`` distinct linear factors."""
    rng = np.random.default_rng(seed)
    roots = rng.choice(p, size=degree, replace=False).tolist()
    frac = estimate_zero_fraction(linear_product(roots, p), p, 1, samples, seed + 1)
    base = degree / p
    bound = base + 3 * math.sqrt(base / samples)
    return {"experiment": "zerofrac", "version": __version__, "degree": degree, "p": p, "samples": samples,
            "seed": seed, "roots": sorted(roots), "zero_fraction": float(frac), "d_over_p": base,
            "bound": bound, "within_bound": float(frac) <= bound}


def run_primes(lo: int, hi: int, with_gap_report: bool = False, exponent: float = 0.526) -> dict:
    ps = primes_in_interval(lo, hi)
    rows = [{"p": p, "gap": (p - ps[k - 1]) if k else None, "bound": round(p ** exponent, 6)}
            for k, p in enumerate(ps)]
    out = {"experiment": "primes", "version": __version__, "lo": lo, "hi": hi, "count": len(ps), "rows": rows}
    if len(ps) >= 2:
        out["max_gap"] = max(r["gap"] for r in rows[1:])
    if with_gap_report:
        out["gap_report"] = [asdict(r) for r in gap_report(exponent=exponent)]
    return out


def strip_timings(obj):
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k != "timings_ms"}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
