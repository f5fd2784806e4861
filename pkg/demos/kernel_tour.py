"""Tour of the 4-point coupling kernel and its lattice identities.

Walks through the pointwise values, the two discrete sum rules that make
force spreading conservative, and the periodized Fourier table that the
stability analysis is built on.

Run:  python demos/kernel_tour.py
"""

import numpy as np

from ibstab import kernel

print("pointwise values")
for r in (0.0, 0.5, 1.0, 1.5, 2.0):
    print(f"  phi({r:3.1f}) = {kernel.phi(r):.10f}")

print()
print("lattice sum rules (any real offset)")
rng = np.random.default_rng(0)
for eps in rng.uniform(-1.0, 1.0, size=4):
    j = np.arange(-3, 4)
    w = kernel.phi(j + eps)
    print(f"  eps = {eps:+.4f}:  sum w = {w.sum():.15f}   "
          f"sum w^2 = {(w ** 2).sum():.15f}")
print("  (the first is always 1, the second always 3/8 = 0.375)")

print()
print("periodized Fourier coefficients on an N-point grid")
n = 16
q = np.arange(0, 9)
vals = kernel.phi_coeff(q, n)
for qi, v in zip(q, vals):
    print(f"  Phi({qi:2d}) = {v: .6e}")
print(f"  Phi(0) = 1/N and Phi({n}) = {kernel.phi_coeff(n, n):.3e}: the")
print("  transform vanishes at every full turn, which is why a flat sheet")
print("  spreads to an exactly uniform force field.")

print()
print("how much kernel energy the resolved band carries")
for n in (4, 8, 16, 64, 256):
    print(f"  R({n:3d}) = {kernel.bandlimit_ratio(n):.10f}")
print("  R stays within a tenth of a percent of 1, which is what lets the")
print("  stability surface drop the aliased tail without visible error.")
