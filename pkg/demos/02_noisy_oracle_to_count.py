"""Exact certificate counts from an oracle that is wrong 5% of the time.

Run with ``python3 demos/02_noisy_oracle_to_count.py``.
"""
# %%
from rarecase import (NoisyOracleConfig, PipelineConfig, build_cnf_verifier, count_certificates_bruteforce,
                      honest_oracle, noisy_oracle, reconstruct_count)
from rarecase.decoder import DecoderParams, LineMachine
from rarecase.certpoly import Instance
from rarecase.osp import OspConfig, certify

# (z1 OR z2): three satisfying assignments
circuit, x = build_cnf_verifier(2, [[1, 2]])
oracle = noisy_oracle(honest_oracle(circuit), NoisyOracleConfig(rho=0.95, seed=1))

# %% Raw oracle answers are unreliable, but deterministic per instance.
inst = Instance.counting(x, circuit.m, 101)
print("oracle says", oracle.answer(inst), "| correct here:", oracle.is_correct_on(inst))

# %% A line machine reads 3d+1 points on a random line and decodes.
params = DecoderParams.for_circuit(circuit)
machine = LineMachine(oracle, circuit, params, seed=7)
print("decoder:", machine.describe())
print("line-decoded f'(x, 1, 0) mod 101 =", machine.evaluate(inst))

# %% The sumcheck verifier decides whether to trust the machine.
res = certify(machine, circuit, inst, OspConfig(repetitions=2), rng=0)
print("certified:", res.passed, "| machine calls:", res.machine_calls)

# %% Three primes multiply past 2^m, so the residues pin down the count.
rec = reconstruct_count(circuit, x, [101, 103, 107], oracle, PipelineConfig(), rng=3)
print("reconstructed count:", rec.count.count, "| brute force:", count_certificates_bruteforce(circuit, x).count)
for row in rec.rows:
    print(f"  p={row['p']}: {row['status']}, residue {row['residue']}, {row['queries']} queries")
