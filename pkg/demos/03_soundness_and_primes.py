"""How often a consistent liar gets through, and where the primes come from.

Run with ``python3 demos/03_soundness_and_primes.py``.
"""
# %%
from rarecase import beta_for, build_cnf_verifier, gap_report, paper_interval, primes_in_interval
from rarecase.experiments import run_soundness, run_zerofrac

circuit, x = build_cnf_verifier(2, [[1, 2]])

# %% An oracle answering f' + 1 everywhere is internally consistent;
# only the final circuit evaluation can catch it.
rep = run_soundness(circuit, x, p=101, trials=200, delta=1, seed=0)
print(f"accept rate {rep['accept_rate']:.3f} (bound {rep['bound']:.3f}), reasons {rep['reasons']}")

# %% Schwartz-Zippel in one variable: d roots out of p.
for d in (1, 4, 8):
    z = run_zerofrac(d, 20_000, 10007, seed=d)
    print(f"d={d}: zero fraction {z['zero_fraction']:.5f} vs d/p = {z['d_over_p']:.5f}")

# %% Prime intervals.
print("primes in (10, 30):", primes_in_interval(10, 30))
print("beta for alpha = c = 1:", beta_for(1, 1))
print("toy interval (n=3, beta=3, c=1):", paper_interval(3, 3, 1))
for row in gap_report(ms=(10**4, 10**5)):
    print(f"(m, 2m) with m={row.m}: max gap {row.max_gap}, m^0.526 = {row.bound:.1f}")
