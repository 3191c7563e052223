#!/usr/bin/env python3
"""
Approximation exponents and a seeded fibre experiment
=====================================================
Part A: finite-horizon lower estimators for the four approximation
exponents of sqrt(2), which a badly approximable number pins near 1,
and the infinity witness a rational target produces instead of a number.

Part B: fix alpha_1 = sqrt(2), draw random alpha_2 uniformly from seeded
128-bit dyadics, and count solutions of ||n a_1|| ||n a_2|| < psi(n) up to
three horizons. With divergent psi the hit counts keep growing.
"""

from fractions import Fraction as Q

from bohrgap.bohr import BohrSpec
from bohrgap.exponents import TargetVector, exponent_report
from bohrgap.sums import gallagher_experiment, psi_family

# ─────────────────────────────────────────────────────────────────
# Part A: exponents
# ─────────────────────────────────────────────────────────────────

rep = exponent_report(TargetVector.parse(["sqrt:2"]), None, n_max=10**5, h_max=2000)
print("alpha = sqrt(2), horizon 10^5:")
for name, est in (
    ("omega  (simultaneous)", rep.omega_lower),
    ("omega_x (multiplicative)", rep.omega_times_lower),
    ("omega* (dual)", rep.omega_star_lower),
    ("omega^ (uniform inhomogeneous)", rep.omega_hat_lower),
):
    print(f"  {name:<32s} {est.value:.6f}  best witness {est.argmax}")
print(f"  transference diagnostics: {rep.flags}")

rat = exponent_report(TargetVector.parse(["rat:5/7"]), None, n_max=10**3, h_max=50,
                      x_list=(10**2, 10**3))
print("\nalpha = 5/7 (rational): exponents are infinite, so the estimators")
print("return witnesses rather than numbers:")
print(f"  omega witness n = {rat.omega_lower.infinite_witness} "
      f"(||n alpha|| = 0 exactly)")
print(f"  omega* witness vector = {rat.omega_star_lower.infinite_witness}")

# ─────────────────────────────────────────────────────────────────
# Part B: random fibres over alpha_1 = sqrt(2)
# ─────────────────────────────────────────────────────────────────

spec = BohrSpec.build(["sqrt:2"], None, 10**5, ["1"], Q(1, 20))
psi = psi_family("log", c=1.0, k=2)  # 1/(n log^2 n), divergent at k=2
res = gallagher_experiment(spec, psi, samples=40, N=10**5, seed=11)

print(f"\n40 fibres, psi(n) = 1/(n log^2 n), horizons {list(res.checkpoints)}")
print(f"  fraction of fibres with at least one hit: {res.hit_fraction}")
print(f"  median hit counts per horizon: {res.median_hits}")

r0 = res.rows[0]
print(f"  sample 0: alpha_2 bits {r0['alpha_k_bits'][:16]}..., "
      f"first hit at n = {r0['first_witness']}, hits {r0['hits']}")
worst = min(res.rows, key=lambda r: r["hits"][res.checkpoints[-1]])
print(f"  slowest fibre still hit {worst['hits'][res.checkpoints[-1]]} times")
