import math

import numpy as np
import pytest

from rarecase.circuit import build_cnf_verifier, parse_circuit
from rarecase.decoder import DecoderConfigError
from rarecase.driver import (InsufficientPrimes, PipelineConfig, ReconstructionError, certify_prime, crt_combine,
                             decide_membership, reconstruct_count, required_product_ok, soundness_bound)
from rarecase.oracles import NoisyOracleConfig, honest_oracle, noisy_oracle, shifted_oracle
from rarecase.osp import OspConfig

from conftest import CORPUS, ref_count


def test_crt_small():
    assert crt_combine([(3, 2), (5, 3)]) == 8
    assert crt_combine([(7, 0)]) == 0
    assert crt_combine([]) == 0


@pytest.mark.parametrize("bad", [[(3, 1), (3, 2)], [(5, 5)], [(5, -1)], [(4, 1), (6, 1)], [(1, 0)]])
def test_crt_rejects(bad):
    with pytest.raises(ValueError):
        crt_combine(bad)


def test_crt_random_against_congruences():
    rng = np.random.default_rng(0)
    pool = [q for q in range(3, 1000) if all(q % d for d in range(2, int(q**0.5) + 1))]
    for _ in range(300):
        ps = rng.choice(pool, size=int(rng.integers(1, 7)), replace=False).tolist()
        rs = [int(rng.integers(0, q)) for q in ps]
        x = crt_combine(list(zip(ps, rs)))
        assert 0 <= x < math.prod(ps)
        assert all(x % q == r for q, r in zip(ps, rs))


def test_honest_reconstruction_or2():
    c, x = build_cnf_verifier(2, [[1, 2]])
    rec = reconstruct_count(c, x, [5, 7, 11], honest_oracle(c))
    assert rec.count.count == 3
    assert [r.p for r in rec.certified] == [5, 7, 11]
    assert all(r["status"] == "certified" for r in rec.rows)
    assert decide_membership(c, x, [5, 7, 11], honest_oracle(c))


def test_unsat_formula_is_not_member():
    c, x = build_cnf_verifier(1, [[1], [-1]])
    rec = reconstruct_count(c, x, [5, 7], honest_oracle(c))
    assert rec.count.count == 0
    assert not decide_membership(c, x, [5, 7], honest_oracle(c))


def test_noisy_reconstruction_with_lines():
    c, x = build_cnf_verifier(2, [[1, 2]])
    oracle = noisy_oracle(honest_oracle(c), NoisyOracleConfig(rho=0.95, seed=2))
    rec = reconstruct_count(c, x, [101, 103, 107], oracle, rng=4)
    assert rec.count.count == 3
    assert rec.queries == oracle.queries
    assert all(a["machine"]["kind"] == "line" for r in rec.rows for a in r["attempts"])


def test_reconstruction_is_reproducible():
    c, x = build_cnf_verifier(2, [[1, 2]])
    mk = lambda: noisy_oracle(honest_oracle(c), NoisyOracleConfig(rho=0.9, seed=5))
    a = reconstruct_count(c, x, [101, 103], mk(), rng=8)
    b = reconstruct_count(c, x, [101, 103], mk(), rng=8)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "timings_ms"} for r in rows]
    assert strip(a.rows) == strip(b.rows)


def test_shifted_oracle_yields_insufficient_primes():
    c, x = build_cnf_verifier(2, [[1, 2]])
    with pytest.raises(InsufficientPrimes) as exc:
        reconstruct_count(c, x, [101, 103], shifted_oracle(honest_oracle(c), 1), rng=0)
    assert exc.value.certified == []
    assert {r["status"] for r in exc.value.rows} == {"rejected"}


def test_too_few_primes():
    c = CORPUS["random8_n0_m8"]
    with pytest.raises(InsufficientPrimes):
        reconstruct_count(c, [], [5, 7], honest_oracle(c))
    assert not required_product_ok([5, 7], 8)
    assert required_product_ok([5, 7, 11], 8)


def test_driver_input_checks():
    c, x = build_cnf_verifier(2, [[1, 2]])
    with pytest.raises(ValueError):
        reconstruct_count(c, x, [5, 5], honest_oracle(c))
    with pytest.raises(ValueError):
        reconstruct_count(c, (1, 0, 2, 0), [5, 7], honest_oracle(c))
    with pytest.raises(ValueError):
        PipelineConfig(decoder="magic")


def test_inconsistent_residues_detected(monkeypatch):
    # with the verifier switched off, a liar's residues combine past 2^m
    import rarecase.driver as drv
    from rarecase.osp import CertifyResult

    monkeypatch.setattr(drv, "certify", lambda *a, **k: CertifyResult(True, []))
    c = parse_circuit("input z 1\ng = NOT z1\noutput g")
    with pytest.raises(ReconstructionError):
        reconstruct_count(c, [], [3, 5], shifted_oracle(honest_oracle(c), 2))


def test_certify_prime_row_shape():
    c, x = build_cnf_verifier(2, [[1, 2]])
    row, cr = certify_prime(c, x, 11, honest_oracle(c), PipelineConfig(), seed=3)
    assert cr.residue == 3 and cr.p == 11
    assert set(row) == {"p", "seed", "status", "residue", "attempts", "queries", "timings_ms"}
    assert row["attempts"][0]["machine"]["kind"] == "direct"


def test_decoder_modes():
    c, x = build_cnf_verifier(2, [[1, 2]])
    cfg = PipelineConfig(decoder="direct", osp=OspConfig())
    assert reconstruct_count(c, x, [101, 103], honest_oracle(c), cfg).count.count == 3
    cfg = PipelineConfig(decoder="lines", osp=OspConfig())
    # lines need p > num_points
    with pytest.raises(DecoderConfigError):
        reconstruct_count(c, x, [5, 7], honest_oracle(c), cfg)


def test_counts_across_corpus_honest():
    for name, c in CORPUS.items():
        if c.m > 6:
            continue
        x = [1] * c.n
        rec = reconstruct_count(c, x, [101, 103], honest_oracle(c), PipelineConfig(osp=OspConfig()))
        assert rec.count.count == ref_count(c, x), name


def test_soundness_bound():
    c, _ = build_cnf_verifier(2, [[1, 2]])
    assert soundness_bound(c, 101) == pytest.approx(2 * 2 * 2 / 101)
