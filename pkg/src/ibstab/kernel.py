"""The 4-point immersed-boundary kernel and its Fourier representations.

The interaction between the Lagrangian markers and the fluid grid is built
from one scalar function ``phi``: a piecewise-algebraic bell supported on
(-2, 2) meshwidths, chosen so that its unit-spaced samples form a partition
of unity and have a constant sum of squares (3/8) for every sub-grid shift.
Those two sample identities are what make the spreading/interpolation pair
well behaved, and the constant 3/8 is what ends up in the timestep limits.

Spectral analysis of the coupled scheme needs the Fourier side of phi:

* ``phi_hat(s)``   -- continuous transform, real and even,
* ``phi_coeff(q, n)`` -- Fourier coefficient of the n-periodized kernel,
  equal to phi_hat(2*pi*q/n)/n,
* ``KernelTable``  -- a per-grid cache of those coefficients deep into the
  tail, needed by the aliasing sums in :mod:`ibstab.stability`.

phi is analytic on each unit interval of its support but only C^1 across
the breakpoints, so phi_hat decays like 1/s^3 and the coefficient tail is
long.  The point evaluators use composite Gauss-Legendre panels sized to
the oscillation; the bulk table is built in one shot from an FFT of a fine
periodized sampling, which is exact up to aliasing at the FFT length.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SUPPORT_RADIUS",
    "SAMPLE_SQUARE_SUM",
    "phi",
    "phi_hat",
    "phi_coeff",
    "bandlimit_ratio",
    "KernelTable",
    "get_table",
]

# Half-width of the kernel support, in fluid meshwidths.
SUPPORT_RADIUS = 2.0

# sum_j phi(j + e)^2 for any shift e; constant by construction of phi.
SAMPLE_SQUARE_SUM = 3.0 / 8.0


def phi(r):
    """Evaluate the 4-point kernel at ``r`` (meshwidth units), vectorized.

    Continuous and C^1 on the line, zero outside (-2, 2), even, and
    normalized so that sum_j phi(j + e) = 1 for every shift e.
    """
    r = np.asarray(r, dtype=float)
    a = np.abs(r)
    out = np.zeros_like(a)
    near = a <= 1.0
    far = (a > 1.0) & (a < 2.0)
    an = a[near]
    out[near] = (3.0 - 2.0 * an + np.sqrt(1.0 + 4.0 * an - 4.0 * an * an)) / 8.0
    af = a[far]
    out[far] = (5.0 - 2.0 * af - np.sqrt(-7.0 + 12.0 * af - 4.0 * af * af)) / 8.0
    if out.ndim == 0:
        return float(out)
    return out


# --- quadrature ------------------------------------------------------------

_GAUSS_ORDER = 24
_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(_GAUSS_ORDER)

# Max radians of oscillation per Gauss panel. 24 nodes integrate
# cos(omega*x) over a panel with omega <= _PANEL_RADIANS to well below
# 1e-15, with room for the kernel factor.
_PANEL_RADIANS = 3.0


def _cosine_moments(freqs):
    """integral_{-2}^{2} phi(r) cos(freqs * r) dr for an array of frequencies.

    Composite Gauss-Legendre on the unit intervals [0,1] and [1,2] where
    phi is analytic, each split into enough subpanels for the fastest
    oscillation present, then doubled (phi is even).
    """
    freqs = np.asarray(freqs, dtype=float)
    fmax = float(np.max(np.abs(freqs))) if freqs.size else 0.0
    splits = max(1, int(np.ceil(fmax / _PANEL_RADIANS)))
    nodes = []
    weights = []
    for lo in (0.0, 1.0):
        edges = lo + np.arange(splits + 1) / splits
        for a, b in zip(edges[:-1], edges[1:]):
            half = 0.5 * (b - a)
            nodes.append(0.5 * (a + b) + half * _GAUSS_X)
            weights.append(half * _GAUSS_W)
    x = np.concatenate(nodes)
    w = np.concatenate(weights) * phi(x)
    flat = np.atleast_1d(freqs)
    vals = 2.0 * (np.cos(np.outer(flat, x)) @ w)
    return vals.reshape(freqs.shape) if freqs.shape else float(vals[0])


def phi_hat(s):
    """Continuous Fourier transform of phi at frequency ``s``.

    integral phi(r) exp(-i s r) dr; real and even because phi is.
    phi_hat(0) = 1 and the decay is ~ 1/s^3.
    """
    return _cosine_moments(s)


def phi_coeff(q, n):
    """Fourier coefficient of the n-periodized kernel at integer mode ``q``.

    (1/n) * integral_{-2}^{2} phi(r) exp(-2*pi*i*q*r/n) dr, evaluated as a
    cosine integral.  Real, even in q, maximal at q = 0 where it equals 1/n.
    """
    n = _check_grid_size(n)
    q = np.asarray(q)
    return _cosine_moments(2.0 * np.pi * q / n) / n


def bandlimit_ratio(n):
    """Fraction of the coefficient energy carried by resolved modes.

    sum_{|p| <= n/2} phi_coeff(p, n)^2 divided by the exact total
    3/(8n).  Close to (and below) 1 for every grid size; this is what
    justifies dropping unresolved modes in the band-limited stability
    surfaces.
    """
    n = _check_grid_size(n)
    p = np.arange(-(n // 2), n // 2 + 1)
    resolved = float(np.sum(phi_coeff(p, n) ** 2))
    return resolved / (SAMPLE_SQUARE_SUM / n)


def _check_grid_size(n):
    if int(n) != n or n < 4:
        raise ValueError(f"grid size must be an integer >= 4, got {n!r}")
    return int(n)


class KernelTable:
    """Cached periodized-kernel Fourier coefficients for one grid size.

    The aliasing sums in the stability analysis touch coefficients at
    |q| up to a few hundred thousand, far beyond what per-point
    quadrature should be asked for.  ``build`` samples the n-periodized
    kernel on a fine uniform grid and takes one real FFT: the resulting
    coefficients are exact up to aliasing at the sampling length, which
    is driven below 1e-16 here.  The table keeps everything out to the
    point where the tail stays under ``tail_tol`` for good.
    """

    def __init__(self, n, coeffs, tail_tol):
        self.n = n
        self._coeffs = coeffs  # index q = 0 .. qcut
        self.tail_tol = tail_tol

    @property
    def qcut(self):
        return self._coeffs.size - 1

    @classmethod
    def build(cls, n, tail_tol=1e-15, samples=1 << 22):
        n = _check_grid_size(n)
        j = np.arange(samples)
        r = j * (n / samples)
        r -= n * np.round(r / n)  # wrap to [-n/2, n/2)
        vals = phi(r)
        coeffs = np.fft.rfft(vals).real / samples
        # keep coefficients until the magnitude stays below tail_tol
        big = np.nonzero(np.abs(coeffs) >= tail_tol)[0]
        qcut = int(big[-1]) if big.size else 0
        qcut = max(qcut, 4 * n)
        return cls(n, coeffs[: qcut + 1].copy(), tail_tol)

    def coeff(self, q):
        """phi_coeff(q, n) from the table; zero beyond the stored tail."""
        q = np.abs(np.asarray(q, dtype=np.int64))
        out = np.zeros(q.shape, dtype=float)
        inside = q <= self.qcut
        out[inside] = self._coeffs[q[inside]]
        if out.ndim == 0:
            return float(out)
        return out

    def coeff_array(self):
        """The stored coefficients for q = 0 .. qcut (read-only view)."""
        view = self._coeffs.view()
        view.flags.writeable = False
        return view


_TABLE_CACHE: dict[int, KernelTable] = {}


def get_table(n) -> KernelTable:
    """Shared per-grid-size KernelTable cache."""
    n = _check_grid_size(n)
    if n not in _TABLE_CACHE:
        _TABLE_CACHE[n] = KernelTable.build(n)
    return _TABLE_CACHE[n]
