"""Retarded Coulomb action on loops and its Taylor expansion in the delay.

The potential is evaluated at a retarded time: the proton's position reaches
the electron at the transmission speed c_W = sqrt(2) c, so the delay
coefficient is a = 1/c_W = alpha/sqrt(2).  Expanding in a:

  * the zeroth coefficient is the unretarded action,
  * the first vanishes identically for every periodic loop,
  * the second is -integral of r'^2/r dt for the Coulomb potential,

and the second-order truncation is exactly the loop integral of the
velocity-dependent potential -(1/r)(1 + r'^2/(2 c^2)) -- the interaction term
of the Weber Lagrangian.  The leftover error is cubic in the delay.
"""

import numpy as np

from weberatom import (
    LoopSamples,
    neumann_action,
    random_loop_corpus,
    retarded_action,
    taylor_coefficient_analytic,
    taylor_coefficient_numeric,
    truncation_check_loop,
    truncation_error,
)

print("test loop r(t) = 2 + cos(2 pi t), 1024 samples\n")
loop = LoopSamples.from_function(lambda t: 2.0 + np.cos(2 * np.pi * t), 1024)

s0 = taylor_coefficient_analytic(loop, 0)
s2a = taylor_coefficient_analytic(loop, 2)
s2n = taylor_coefficient_numeric(loop, 2)
print(f"S0 (unretarded)   = {s0:.12f}   (exact: -1/sqrt(3) = {-1 / np.sqrt(3):.12f})")
print(f"S1 (numeric)      = {taylor_coefficient_numeric(loop, 1):+.3e}   (vanishes identically)")
print(f"S2 analytic       = {s2a:.10f}   (exact: -4 pi^2 (2 - sqrt(3)) = {-4 * np.pi**2 * (2 - np.sqrt(3)):.10f})")
print(f"S2 numeric        = {s2n:.10f}   (finite differences in the delay)\n")

print("S1 vanishing across a randomized loop corpus (degree-5 trig polynomials):")
for i, rnd in enumerate(random_loop_corpus(5, seed=42)):
    s1 = taylor_coefficient_numeric(rnd, 1)
    s2_dev = abs(taylor_coefficient_numeric(rnd, 2) - taylor_coefficient_analytic(rnd, 2))
    print(f"  loop {i}: |S1| = {abs(s1):.2e}, |S2 numeric - analytic| = {s2_dev:.2e}")

print("\nsecond-order truncation vs the full retarded action (cubic order):")
chk = truncation_check_loop()
print("deliberately time-asymmetric loop 2 + 0.8 cos(2 pi t) + 0.2 sin(4 pi t)")
errs = []
for alpha in (0.04, 0.02, 0.01):
    err = truncation_error(chk, alpha)
    errs.append(err)
    a = alpha / np.sqrt(2.0)
    print(f"  alpha = {alpha}: |S_pot({a:.5f}) - truncation| = {err:.3e}")
print(f"  halving ratios: {errs[0] / errs[1]:.2f}, {errs[1] / errs[2]:.2f}  (cubic order -> 8)")
print("  (for time-even loops the cubic coefficient vanishes by parity and")
print("   the ratios jump to ~16, i.e. quartic order)\n")

alpha = 0.04
full = retarded_action(chk, alpha / np.sqrt(2.0))
trunc = neumann_action(chk, alpha)
print(f"at alpha = {alpha}: S_pot = {full:.10f}, velocity-potential truncation = {trunc:.10f}")
