"""Marker lattice and the two grid-coupling operations.

A planar sheet of (N*P)^2 markers sits in the periodic box, offset from
the fluid lattice by a shift eps given in units of the fluid meshwidth.
Forces on markers are spread to the fluid grid and fluid velocities are
interpolated back to markers through tensor products of the 4-point
kernel.  Both operations use the same weights, which makes them exact
adjoints of each other up to the h_B^2 / h^3 volume factors; the test
suite checks that identity to near machine precision.

Two evaluation modes exist.  The default centers every kernel at the
marker's rest position, so the weights depend only on (n, p, eps) and
factor into three one-dimensional stencils; spreading is then a pair of
small matrix products.  Passing explicit positions centers the kernels
there instead (used by the moving-membrane experiments); that path
scatters per-marker 4x4x4 stencils with a fixed accumulation order so
results are reproducible bit for bit.
"""

import numpy as np

from .kernel import phi


def _wrap_half(d, n):
    """Fold a lattice displacement into [-n/2, n/2)."""
    return d - n * np.round(d / n)


class LagrangianSheet:
    def __init__(self, n, p, eps=(0.0, 0.0, 0.0), l=1.0):
        if n < 4 or int(n) != n:
            raise ValueError("grid size must be an integer >= 4")
        if p < 1 or int(p) != p:
            raise ValueError("meshwidth ratio must be an integer >= 1")
        self.n = int(n)
        self.p = int(p)
        self.l = float(l)
        self.eps = np.asarray(eps, dtype=float)
        if self.eps.shape != (3,):
            raise ValueError("eps must be a 3-vector")
        self.h = self.l / self.n
        self.h_b = self.l / (self.n * self.p)
        m = self.n * self.p
        k1 = np.arange(m).reshape(m, 1)
        k2 = np.arange(m).reshape(1, m)
        sigma = self.eps * self.h
        self.x0 = np.empty((3, m, m))
        self.x0[0] = k1 * self.h_b + sigma[0]
        self.x0[1] = k2 * self.h_b + sigma[1]
        self.x0[2] = sigma[2]
        self._stencils = None

    @property
    def markers(self):
        return (self.n * self.p) ** 2

    def rest_stencils(self):
        """One-dimensional kernel weights against the rest lattice.

        Returns (s1, s2, w3): s1[k, j] = phi(j - k/p - eps1) with the
        argument folded periodically, likewise s2, and w3[j] the vertical
        weights.  Rows sum to one by the kernel's partition of unity.
        """
        if self._stencils is None:
            n, p = self.n, self.p
            j = np.arange(n)
            k = np.arange(n * p)
            d1 = _wrap_half(j[None, :] - k[:, None] / p - self.eps[0], n)
            d2 = _wrap_half(j[None, :] - k[:, None] / p - self.eps[1], n)
            d3 = _wrap_half(j - self.eps[2], n)
            self._stencils = (phi(d1), phi(d2), phi(d3))
        return self._stencils

    def marker_stencils(self, positions):
        """4-point index/weight stencils centered at arbitrary positions.

        positions has shape (3, NP, NP) in physical length units; the
        result is three (markers, 4) index arrays and matching weights.
        """
        x = positions.reshape(3, -1) / self.h
        offs = np.arange(4)
        idx = []
        wts = []
        for a in range(3):
            base = np.floor(x[a]).astype(np.int64) - 1
            pts = base[:, None] + offs[None, :]
            idx.append(np.mod(pts, self.n))
            wts.append(phi(pts - x[a][:, None]))
        return idx, wts


def spread(sheet, forces, positions=None):
    """Spread marker forces (force/area) to a grid body force (force/volume).

    f(x_j) = sum_k F_k phi(j1 - k1/p - eps1) phi(j2 - k2/p - eps2)
             phi(j3 - eps3) * h_b^2 / h^3

    with all kernel arguments wrapped periodically.  When positions is
    given the kernels are centered there instead of at the rest lattice.
    """
    n = sheet.n
    scale = sheet.h_b**2 / sheet.h**3
    if positions is None:
        s1, s2, w3 = sheet.rest_stencils()
        out = np.empty((3, n, n, n))
        for c in range(3):
            plane = s1.T @ forces[c] @ s2
            out[c] = plane[:, :, None] * w3[None, None, :]
        return out * scale
    idx, wts = sheet.marker_stencils(positions)
    lin = (idx[0][:, :, None, None] * n + idx[1][:, None, :, None]) * n \
        + idx[2][:, None, None, :]
    w = wts[0][:, :, None, None] * wts[1][:, None, :, None] * wts[2][:, None, None, :]
    out = np.empty((3, n, n, n))
    for c in range(3):
        acc = np.bincount(lin.ravel(),
                          weights=(forces[c].reshape(-1, 1, 1, 1) * w).ravel(),
                          minlength=n**3)
        out[c] = acc.reshape(n, n, n)
    return out * scale


def interpolate(sheet, u, positions=None):
    """Interpolate a grid velocity to the markers with the same weights
    as spread (pure phi products, no volume factor)."""
    if positions is None:
        s1, s2, w3 = sheet.rest_stencils()
        m = sheet.n * sheet.p
        out = np.empty((3, m, m))
        for c in range(3):
            out[c] = s1 @ (u[c] @ w3) @ s2.T
        return out
    idx, wts = sheet.marker_stencils(positions)
    w = wts[0][:, :, None, None] * wts[1][:, None, :, None] * wts[2][:, None, None, :]
    m = sheet.n * sheet.p
    out = np.empty((3, m, m))
    for c in range(3):
        vals = u[c][idx[0][:, :, None, None], idx[1][:, None, :, None],
                    idx[2][:, None, None, :]]
        out[c] = (vals * w).sum(axis=(1, 2, 3)).reshape(m, m)
    return out
