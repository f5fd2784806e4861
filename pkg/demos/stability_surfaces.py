"""Stability surfaces and the critical-step predictions they yield.

The leapfrog coupling is stable while a weighted lattice sum C(xi1, xi2)
stays below a threshold set by the step size. For target points the
surface peaks at the origin with the universal value 3/8; for an elastic
membrane the peak moves to a finite wavenumber pair and shrinks with the
marker density. This script prints both and turns them into time steps.

Run:  python demos/stability_surfaces.py
"""

import numpy as np

from ibstab import stability

print("target points: the surface maximum is 3/8 at the origin")
for n, p in [(16, 1), (32, 2), (32, 3)]:
    rep = stability.stability_surface_target(n, p)
    print(f"  N = {n:3d}, P = {p}:  Cmax = {rep.cmax:.10f} at {rep.argmax}")

print()
print("membrane: maxima over a grid of (N, P)")
print("  N    P   Cmax          argmax")
for n, p, cmax, x1, x2 in stability.membrane_cmax_table([16, 32, 64], [1, 2, 3]):
    print(f"  {n:3d}  {p}   {cmax:.6e}  ({x1}, {x2})")
print("  Cmax scales like 1/P^2: doubling the marker density per cell")
print("  buys a factor sqrt(2) in the step size.")

print()
print("critical steps for the benchmark parameter sets")
dtc = stability.critical_dt_target(8.0e4, 1.0, 1.0 / 32.0)
print(f"  target   K = 8e4, rho = 1, h = 1/32:        dt_c = {dtc:.6e}")
for n in (32, 64):
    dtc = stability.critical_dt_membrane(100.0, 1.0, 1.0 / n, n, 2)
    print(f"  membrane K = 100, rho = 1, h = 1/{n:2d}, P = 2: dt_c = {dtc:.6e}")
a = stability.critical_dt_membrane(100.0, 1.0, 1.0 / 32.0, 32, 2)
b = stability.critical_dt_membrane(100.0, 1.0, 1.0 / 64.0, 64, 2)
print(f"  ratio across the mesh halving: {a / b:.4f}  "
      f"(2^1.5 = {2.0 ** 1.5:.4f}, the h^(3/2) law)")

print()
print("exact lattice sums barely move the membrane maximum")
rng = np.random.default_rng(1)
eps = tuple(rng.uniform(-0.5, 0.5, size=3))
bl = stability.stability_surface_membrane(16, 2)
ex = stability.stability_surface_membrane(16, 2, mode="exact", eps=eps)
print(f"  N = 16, P = 2, offset {np.round(eps, 3)}:")
print(f"  band-limited Cmax = {bl.cmax:.8e}")
print(f"  exact sums   Cmax = {ex.cmax:.8e}   "
      f"({abs(ex.cmax - bl.cmax) / bl.cmax:.2e} relative apart)")
