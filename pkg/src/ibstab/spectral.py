"""Fourier machinery for the periodic grids.

Transforms use the unnormalized forward convention (the inverse carries
the 1/N^3, as numpy does), so constants lifted from the difference-operator
symbols can be used without renormalization.  The centered first difference
on a grid of spacing h has the purely imaginary symbol (i/h) sin(2 pi xi / N)
per axis, and the compact 7-point Laplacian has the real symbol
-(4/h^2) sum_a sin^2(pi xi_a / N).

The incompressibility projector is built from the gradient symbol.  At the
eight wavenumbers where every component of the sine vector vanishes (each
xi_a in {0, N/2}) the discrete gradient cannot represent any pressure
gradient, so the projector is defined to be the identity there and those
modes evolve by pure diffusion.
"""

import numpy as np


def dft3(u):
    """Forward 3D transform over the last three axes (unnormalized sum)."""
    return np.fft.fftn(u, axes=(-3, -2, -1))


def idft3(u_hat):
    """Inverse of dft3 (carries the 1/N^3)."""
    return np.fft.ifftn(u_hat, axes=(-3, -2, -1))


def dft2_boundary(f):
    """Forward 2D transform over the last two (marker lattice) axes."""
    return np.fft.fft2(f, axes=(-2, -1))


def idft2_boundary(f_hat):
    return np.fft.ifft2(f_hat, axes=(-2, -1))


def _index_grids(n, rfft=False):
    last = n // 2 + 1 if rfft else n
    x1 = np.arange(n).reshape(n, 1, 1)
    x2 = np.arange(n).reshape(1, n, 1)
    x3 = np.arange(last).reshape(1, 1, last)
    return x1, x2, x3


def _sine_factor(x, n, h):
    """sin(2 pi x / n) / h with exact zeros where the sine vanishes.

    Evaluating sin(pi) in floating point leaves a ~1e-16 residue, which
    would turn the null modes at x = n/2 into spurious near-null
    directions for the projector; mask them to exactly zero instead.
    """
    val = np.sin((2.0 * np.pi / n) * x) / h
    return np.where((2 * x) % n == 0, 0.0, val)


def gradient_symbol(n, h, rfft=False):
    """Real sine factors g of the centered difference, stacked per axis.

    The actual symbol is i*g; the i is left to the caller because every
    place it appears downstream it either cancels (projector) or pairs
    with another i (Laplacian).
    """
    x1, x2, x3 = _index_grids(n, rfft)
    g = np.empty((3, n, n, x3.shape[-1]))
    g[0] = _sine_factor(x1, n, h)
    g[1] = _sine_factor(x2, n, h)
    g[2] = _sine_factor(x3, n, h)
    return g


def laplacian_symbol(n, h, rfft=False):
    """Symbol of the 7-point Laplacian; real, nonpositive, zero only at 0."""
    x1, x2, x3 = _index_grids(n, rfft)
    w = np.pi / n
    s = np.sin(w * x1) ** 2 + np.sin(w * x2) ** 2 + np.sin(w * x3) ** 2
    return -(4.0 / h**2) * s


def projection_matrix(xi, n, h):
    """3x3 orthogonal projector onto the divergence-free subspace at one
    wavenumber triple; identity where the gradient symbol vanishes."""
    g = _sine_factor(np.asarray(xi, dtype=np.int64), n, h)
    g2 = float(g @ g)
    if g2 == 0.0:
        return np.eye(3)
    return np.eye(3) - np.outer(g, g) / g2


class OperatorSymbols:
    """Per-wavenumber operator data for one grid, precomputed once.

    Parameters
    ----------
    n : int
        Grid size per direction.
    h : float
        Mesh spacing.
    rfft : bool
        When True the arrays use the half-spectrum layout of rfftn
        (last axis length n//2 + 1); otherwise the full n^3 layout.
    """

    def __init__(self, n, h, rfft=False):
        self.n = int(n)
        self.h = float(h)
        self.rfft = bool(rfft)
        self.grad_factor = gradient_symbol(n, h, rfft)
        self.laplacian = laplacian_symbol(n, h, rfft)
        g2 = (self.grad_factor**2).sum(axis=0)
        with np.errstate(divide="ignore"):
            inv = np.where(g2 > 0.0, 1.0 / np.where(g2 > 0.0, g2, 1.0), 0.0)
        self._inv_g2 = inv

    @property
    def grad(self):
        """The complex gradient symbol i*g."""
        return 1j * self.grad_factor

    def project(self, v_hat):
        """Remove the discrete-gradient component of a spectral 3-vector
        field; acts as the identity on the null-symbol modes."""
        s = np.einsum("a...,a...->...", self.grad_factor, v_hat)
        return v_hat - self.grad_factor * (s * self._inv_g2)
