import numpy as np
import pytest

from rarecase.certpoly import Instance
from rarecase.circuit import arith_eval_ints, build_cnf_verifier, degree_profile
from rarecase.decoder import CandidateMachine, DecoderParams, DirectMachine, LineMachine
from rarecase.oracles import NoisyOracleConfig, honest_oracle, noisy_oracle, shifted_oracle
from rarecase.osp import OspConfig, OspConfigError, Reason, Verdict, certify, check_transcript, run_osp

from conftest import CORPUS, ref_f_prime

C = CORPUS["cnf_or2"]
X = (1, 0, 1, 0)


def honest(c=C):
    return DirectMachine(honest_oracle(c), degree_profile(c).total)


class Perturbed(CandidateMachine):
    """Honest except where ``bad(inst)`` holds; there it adds ``delta``."""

    def __init__(self, c, bad, delta=1):
        self.inner = honest(c)
        self.bad = bad
        self.delta = delta

    def evaluate(self, inst, rng=None):
        v = self.inner.evaluate(inst)
        return (v + self.delta) % inst.p if self.bad(inst) else v


def test_honest_accepts_and_transcript_rechecks():
    p = 101
    inst = Instance(X, [3, 7], [11, 2], p)
    tr = run_osp(honest(), C, inst, OspConfig(), rng=123)
    assert tr.verdict is Verdict.ACCEPT and tr.reason is None
    assert tr.seed == 123 and len(tr.rounds) == 2
    assert check_transcript(tr)
    assert tr.rounds[0].s_prev == ref_f_prime(C, list(X), [3, 7], [11, 2], p)
    # honest machines end at 2^{m-1} g(x, b)
    b_final = [r for r in (tr.rounds[0].r, tr.rounds[1].r)]
    b_final = [(3 * b_final[0] + 11) % p, (7 * b_final[1] + 2) % p]
    assert tr.final_expected == 2 * arith_eval_ints(C, list(X), b_final, p) % p
    assert tr.machine_calls == 2 + 2 * p
    d = tr.to_dict()
    assert d["verdict"] == "ACCEPT" and d["rounds"][0]["probes"] == p


def test_replay_by_seed():
    inst = Instance(X, [1, 1], [0, 0], 101)
    a = run_osp(honest(), C, inst, OspConfig(), rng=77).to_dict()
    b = run_osp(honest(), C, inst, OspConfig(), rng=77).to_dict()
    assert a == b
    c = run_osp(honest(), C, inst, OspConfig(), rng=np.random.default_rng(77)).to_dict()
    assert c["seed"] != 77


def test_unseeded_run_refused():
    with pytest.raises(OspConfigError):
        run_osp(honest(), C, Instance.counting(X, 2, 101), OspConfig(), rng=None)


def test_honest_line_machine_accepts():
    p = 101
    prm = DecoderParams.for_circuit(C)
    noisy = noisy_oracle(honest_oracle(C), NoisyOracleConfig(rho=0.95, seed=1))
    m = LineMachine(noisy, C, prm, seed=3)
    res = certify(m, C, Instance.counting(X, 2, p), OspConfig(repetitions=2), rng=0)
    assert res.passed and len(res.transcripts) == 2
    assert all(check_transcript(t) for t in res.transcripts)


def test_shifted_oracle_rejected():
    m = DirectMachine(shifted_oracle(honest_oracle(C), 1), 8)
    tr = run_osp(m, C, Instance.counting(X, 2, 101), OspConfig(), rng=5)
    assert tr.verdict is Verdict.REJECT
    assert tr.reason is Reason.FINAL_EVAL_MISMATCH


def test_wrong_claim_gives_sum_mismatch():
    tr = run_osp(honest(), C, Instance.counting(X, 2, 101), OspConfig(), rng=0, claim=4)
    assert tr.reason is Reason.SUM_MISMATCH
    tr = run_osp(honest(), C, Instance.counting(X, 2, 101), OspConfig(), rng=0, claim=3)
    assert tr.accepted


def test_high_degree_liar_rejected():
    # lies on a single probe of round 1, which bumps the interpolant to degree p - 1
    p = 101
    m = Perturbed(C, lambda inst: inst.a[0] == 0 and inst.b[0] == 50 and inst.a[1] == 1)
    tr = run_osp(m, C, Instance.counting(X, 2, p), OspConfig(), rng=0)
    assert tr.reason is Reason.DEGREE_TOO_HIGH
    assert len(tr.rounds[0].h_coeffs) - 1 > tr.rounds[0].degree_bound


def test_abstaining_machine():
    class Shy(CandidateMachine):
        def evaluate(self, inst, rng=None):
            return None

    tr = run_osp(Shy(), C, Instance.counting(X, 2, 101), OspConfig(), rng=0)
    assert tr.reason is Reason.ABSTAIN and not tr.accepted


def test_strict_cross_round():
    # the round-2 opening query coincides with round-1 probe r_1, so only an
    # inconsistent machine can split them: honest on probes, wrong on openings
    class Inconsistent(CandidateMachine):
        def __init__(self):
            self.inner = honest()

        def evaluate(self, inst, rng=None):
            return (self.inner.evaluate(inst) + 1) % inst.p

        def evaluate_batch(self, x, A, B, p, rng=None):
            return self.inner.evaluate_batch(x, A, B, p, rng)

    inst = Instance.counting(X, 2, 101)
    strict = run_osp(Inconsistent(), C, inst, OspConfig(strict_cross_round=True), rng=9, claim=3)
    assert strict.reason is Reason.CROSS_ROUND_MISMATCH
    loose = run_osp(Inconsistent(), C, inst, OspConfig(), rng=9, claim=3)
    assert loose.reason is Reason.SUM_MISMATCH
    assert len(loose.rounds) == 2


def test_sampled_mode():
    inst = Instance(X, [2, 3], [4, 5], 101)
    tr = run_osp(honest(), C, inst, OspConfig(mode="sampled"), rng=1)
    assert tr.accepted and tr.rounds[0].probes == degree_profile(C).per_z[0] + 2
    assert any("experimental" in n for n in tr.notes)
    with pytest.raises(OspConfigError):
        run_osp(honest(), C, inst, OspConfig(mode="sampled", sample_points=2), rng=1)
    with pytest.raises(OspConfigError):
        run_osp(honest(), C, Instance(X, [2, 3], [4, 5], 3), OspConfig(mode="sampled"), rng=1)


def test_config_validation():
    with pytest.raises(OspConfigError):
        OspConfig(mode="fast")
    with pytest.raises(OspConfigError):
        OspConfig(repetitions=0)


def test_small_prime_degree_check_is_vacuous_but_honest_passes():
    c, x = build_cnf_verifier(1, [[1], [1], [1], [1]])
    assert degree_profile(c).per_z == (8,)
    inst = Instance.counting(x, c.m, 5)
    tr = run_osp(honest(c), c, inst, OspConfig(), rng=2)
    assert tr.accepted
    assert any("vacuous" in n for n in tr.notes)


def test_certify_stops_at_first_rejection():
    m = DirectMachine(shifted_oracle(honest_oracle(C), 3), 8)
    res = certify(m, C, Instance.counting(X, 2, 101), OspConfig(repetitions=5), rng=0)
    assert not res.passed and len(res.transcripts) == 1
    assert res.machine_calls == res.transcripts[0].machine_calls


def test_tampered_transcript_fails_recheck():
    tr = run_osp(honest(), C, Instance(X, [3, 7], [11, 2], 101), OspConfig(), rng=4)
    assert check_transcript(tr)
    tr.rounds[1].h_coeffs = [(tr.rounds[1].h_coeffs[0] + 1) % 101] + tr.rounds[1].h_coeffs[1:]
    assert not check_transcript(tr)
