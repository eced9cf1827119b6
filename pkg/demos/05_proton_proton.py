"""Two protons: the critical radius, metric signature and force sign.

For like charges the velocity-dependent correction flips sign: the kinetic
metric is g_rr = 1 - alpha^2/r, which degenerates at the critical radius
rho = alpha^2.  Outside rho the metric is Riemannian and the pair repels;
inside, the metric is Minkowski and a pair released at rest accelerates
inward -- the velocity coupling beats the electrostatic repulsion.  (This is
the classical mechanism behind Weber's planetary picture of the atom: a
nucleus of like charges bound inside rho.)
"""

from weberatom import (
    IntegratorConfig,
    ModelParams,
    Pair,
    PhaseState,
    critical_radius,
    metric_components,
    pp_probe,
)

ALPHA = 0.1
params = ModelParams(alpha=ALPHA, pair=Pair.PROTON_PROTON)
rho = critical_radius(params)
print(f"alpha = {ALPHA}: critical radius rho = alpha^2 = {rho}\n")

print("metric component g_rr = 1 - alpha^2/r across the critical radius:")
for f in (0.25, 0.5, 1.0, 2.0, 4.0):
    r = f * rho
    g_rr, _ = metric_components(r, params)
    region = "minkowski" if g_rr < 0 else ("degenerate" if g_rr == 0 else "riemannian")
    print(f"  r = {f:>5.2f} rho: g_rr = {g_rr:+.4f}  ({region})")

cfg = IntegratorConfig(step=1e-7)
print("\nprobes: two protons released at rest, initial radial acceleration")
for f, label in [(2.0, "outside"), (0.5, "inside")]:
    start = PhaseState(t=0.0, r=f * rho, phi=0.0, p_r=0.0, p_phi=0.0)
    rep = pp_probe(start, ALPHA, 1e-4, cfg)
    sign = "outward (repulsive)" if rep.repulsive else "inward (attracting!)"
    print(f"  r0 = {f} rho ({rep.signature}): r_ddot = {rep.r_ddot:+.1f}  -> {sign}")

start = PhaseState(t=0.0, r=0.5 * rho, phi=0.0, p_r=0.0, p_phi=0.0)
rep = pp_probe(start, ALPHA, 1e-4, cfg)
print(f"\ninside-released pair: separation shrinks from {rep.trace.r[0]:.6f} "
      f"to {rep.trace.r[-1]:.6f} over t = {rep.trace.t[-1]:.1e}")

print("\npure Coulomb reference (alpha = 0): repulsion everywhere")
rep0 = pp_probe(start, 0.0, 1e-4, cfg)
print(f"  same start, alpha = 0: r_ddot = {rep0.r_ddot:+.1f} (outward)")

print("\na crossing of rho is a singular event; the probe reports it instead of failing:")
crossing_start = PhaseState(t=0.0, r=0.8 * rho, phi=0.0, p_r=-4.0, p_phi=0.0)
rep_x = pp_probe(crossing_start, ALPHA, 1e-3, IntegratorConfig(step=1e-6))
print(f"  outward-moving inside pair: crossed = {rep_x.crossed}, "
      f"crossing time = {rep_x.crossing_time:.2e}")
