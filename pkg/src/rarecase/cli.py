"""Command line entry point: ``python -m rarecase <subcommand>``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import (ExperimentConfig, dumps, load_circuit, run_demo, run_identity, run_primes,
                          run_soundness, run_zerofrac)
from .osp import OspConfig


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _demo(args) -> int:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.circuit:
        cfg.circuit = args.circuit
    if args.x is not None:
        cfg.x = args.x
    if args.primes:
        cfg.primes = {"list": [int(p) for p in args.primes.split(",")]}
    elif args.min_prime is not None:
        cfg.primes = {"min_prime": args.min_prime, "count": args.count}
    if args.oracle:
        cfg.oracle = {**cfg.oracle, "kind": args.oracle}
    if args.rho is not None:
        cfg.oracle = {**cfg.oracle, "rho": args.rho}
    if args.corruption:
        cfg.oracle = {**cfg.oracle, "corruption": args.corruption}
    if args.delta is not None:
        cfg.oracle = {**cfg.oracle, "delta": args.delta}
    if args.seed is not None:
        cfg.seed = args.seed
    if args.decoder:
        cfg.decoder = {**cfg.decoder, "mode": args.decoder}
    if args.num_points is not None:
        cfg.decoder = {**cfg.decoder, "num_points": args.num_points}
    if args.machines is not None:
        cfg.decoder = {**cfg.decoder, "machines": args.machines}
    if args.repetitions is not None:
        cfg.osp = {**cfg.osp, "repetitions": args.repetitions}
    if args.mode:
        cfg.osp = {**cfg.osp, "mode": args.mode}
    if args.out:
        cfg.out = args.out
    report = run_demo(cfg)
    _emit(report, cfg.out)
    if cfg.out:
        print(f"status={report['status']} count={report['count']} member={report['member']}", file=sys.stderr)
    return 0


def _soundness(args) -> int:
    c, x = load_circuit(args.circuit, x=args.x)
    osp = OspConfig(mode=args.mode, repetitions=1)
    _emit(run_soundness(c, x, args.p, args.trials, args.delta, args.seed, osp), args.out)
    return 0


def _identity(args) -> int:
    c, _ = load_circuit(args.circuit, x=args.x)
    report = run_identity(c, args.p, args.samples, args.seed)
    _emit(report, args.out)
    return 0 if not report["failures"] else 1


def _primes(args) -> int:
    report = run_primes(args.lo, args.hi, args.gap_report)
    if args.json or args.out:
        _emit(report, args.out)
        return 0
    print(f"# primes in ({args.lo}, {args.hi}): {report['count']}")
    print("p\tgap\tbound")
    for row in report["rows"]:
        print(f"{row['p']}\t{row['gap'] if row['gap'] is not None else '-'}\t{row['bound']:.3f}")
    for row in report.get("gap_report", []):
        print(f"# (m, 2m) m={row['m']} max_gap={row['max_gap']} m^0.526={row['bound']:.3f} "
              f"primes={row['num_primes']}")
    return 0


def _zerofrac(args) -> int:
    _emit(run_zerofrac(args.degree, args.samples, args.p, args.seed), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rarecase", description="Certified certificate counting with noisy oracles")
    sub = ap.add_subparsers(dest="cmd", required=True)

    d = sub.add_parser("demo", help="end-to-end count reconstruction and membership decision")
    d.add_argument("--config", help="JSON experiment config; flags override it")
    d.add_argument("--circuit", help="circuit DSL file or DIMACS .cnf (default: z1 OR z2)")
    d.add_argument("--x", help="instance bits for DSL circuits, e.g. 101")
    d.add_argument("--primes", help="comma-separated primes")
    d.add_argument("--min-prime", type=int)
    d.add_argument("--count", type=int, default=3)
    d.add_argument("--oracle", choices=["honest", "noisy", "shifted"])
    d.add_argument("--rho", type=float)
    d.add_argument("--corruption", choices=["offset_by_one", "random_value"])
    d.add_argument("--delta", type=int)
    d.add_argument("--decoder", choices=["auto", "lines", "direct"])
    d.add_argument("--num-points", type=int)
    d.add_argument("--machines", type=int)
    d.add_argument("--repetitions", type=int)
    d.add_argument("--mode", choices=["faithful", "sampled"])
    d.add_argument("--seed", type=int)
    d.add_argument("--out")
    d.set_defaults(func=_demo)

    s = sub.add_parser("soundness", help="accept rate against a shifted oracle")
    s.add_argument("--circuit")
    s.add_argument("--x")
    s.add_argument("--p", type=int, default=101)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--delta", type=int, default=1)
    s.add_argument("--mode", choices=["faithful", "sampled"], default="faithful")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=_soundness)

    i = sub.add_parser("identity", help="self-reduction identity on random tuples")
    i.add_argument("--circuit")
    i.add_argument("--x")
    i.add_argument("--p", type=int, default=101)
    i.add_argument("--samples", type=int, default=1000)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--out")
    i.set_defaults(func=_identity)

    pr = sub.add_parser("primes", help="primes in (lo, hi) and gap statistics")
    pr.add_argument("--lo", type=int, required=True)
    pr.add_argument("--hi", type=int, required=True)
    pr.add_argument("--gap-report", action="store_true")
    pr.add_argument("--json", action="store_true")
    pr.add_argument("--out")
    pr.set_defaults(func=_primes)

    z = sub.add_parser("zerofrac", help="zero fraction of a product of distinct linear factors")
    z.add_argument("--degree", type=int, required=True)
    z.add_argument("--samples", type=int, default=100_000)
    z.add_argument("--p", type=int, default=10007)
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--out")
    z.set_defaults(func=_zerofrac)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
