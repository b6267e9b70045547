"""From a Boolean verifier to a counting polynomial.

Run with ``python3 demos/01_counting_polynomial.py``.
"""
# %%
import itertools

from rarecase import (Instance, arith_eval, count_certificates_bruteforce, degree_profile, eval_bool, f_prime_eval,
                      parse_circuit, self_reduction_sides)

circuit = parse_circuit("""
input x 1
input z 3
a = AND z1 z2
b = AND z1 z3
c = AND z2 z3
maj = OR a b c
gate = OR maj x1
output gate
""")
print("degree profile:", degree_profile(circuit))

# %% On Boolean points the arithmetised circuit is the Boolean one.
p = 101
for bits in itertools.product((0, 1), repeat=4):
    x, z = bits[:1], bits[1:]
    assert arith_eval(circuit, x, z, p).value == eval_bool(circuit, x, z)
print("arithmetisation agrees on all 16 Boolean inputs")

# %% Off the cube it is just a polynomial.
print("g(0; 2, 3, 5) mod 101 =", arith_eval(circuit, [0], [2, 3, 5], p))

# %% Summing over z at a = 1, b = 0 counts certificates.
for x in ([0], [1]):
    count = count_certificates_bruteforce(circuit, x).count
    value = f_prime_eval(circuit, Instance.counting(x, circuit.m, p))
    print(f"x={x}: {count} certificates, f'(x, 1, 0) = {value}")

# %% Fixing one certificate variable halves the sum: the self-reduction.
lhs, rhs = self_reduction_sides(circuit, [0], [4, 9, 2], [7, 1, 30], r=17, i=2, p=p)
print("self-reduction sides:", lhs, rhs)
