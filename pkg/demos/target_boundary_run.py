"""Watch the predicted target-point stability boundary hold up in practice.

Runs the coupled solver just below and just above the predicted critical
step on a small grid, prints the energy traces side by side, then locates
the boundary by bisection and compares it with the prediction.

Run:  python demos/target_boundary_run.py   (about ten seconds)
"""

import numpy as np

from ibstab import SimConfig, find_critical_dt, run, stability

N, P, K, MU = 16, 2, 8.0e4, 0.01
predicted = stability.critical_dt_target(K, 1.0, 1.0 / N)
print(f"N = {N}, P = {P}, K = {K:.0e}, mu = {MU}")
print(f"predicted critical step: {predicted:.6e}")

base = SimConfig(n=N, p=P, mu=MU, k=K, steps=3000, record_every=25)

print()
print("relative energy, 5% below vs 5% above the boundary")
below = run(SimConfig(**{**base.__dict__, "dt": 0.95 * predicted}))
above = run(SimConfig(**{**base.__dict__, "dt": 1.05 * predicted}))
print("  step     below          above")
above_by_step = {int(s): r for s, _, r in above.trace}
for step, _, rel in below.trace[::12]:
    mark = above_by_step.get(int(step))
    right = f"{mark:.4e}" if mark is not None else "(blew up)"
    print(f"  {int(step):5d}   {rel:.4e}     {right}")
print(f"  below: {below.status};  above: {above.status} "
      f"at step {above.blowup_step}")

print()
print("bisecting the boundary (two random initial fields)")
result = find_critical_dt(base, 0.9 * predicted, 1.1 * predicted,
                          rel_tol=1e-3, n_seeds=2)
for seed, value in zip(result.seeds, result.per_seed):
    print(f"  seed {seed}: dt_c = {value:.6e}")
gap = abs(result.dt_critical - predicted) / predicted
print(f"  empirical {result.dt_critical:.6e} vs predicted "
      f"{predicted:.6e}  ({100 * gap:.3f}% apart)")
print()
print("the same boundary holds for any moderate viscosity: the escape")
print("mode leaves through z = -1, where the trapezoidal viscous factor")
print("cancels out of the amplification identically.")
