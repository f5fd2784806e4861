"""Boundary force laws and their half-step updates.

Target mode: each marker is tethered to its rest position by a stiff
spring.  Because the leapfrog update only ever needs the accumulated
spring force, positions are eliminated and the force itself is the
state, advanced by F <- F - dt*K*U.

Membrane mode: markers carry an elastic restoring force proportional to
the discrete 5-point Laplacian of their positions, F = K * lap(X) / h_b^2,
and the positions are the state, advanced by X <- X + dt*U.

Neighbor differences for the Laplacian are wrapped to the nearest
periodic image, so the seam of the rest lattice (where coordinates jump
by the box length) carries no spurious force and any rigid translation
of the flat sheet is force free.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class ForcingModel:
    kind: str                  # "target" or "membrane"
    k: float                   # stiffness
    delta_mode: str = "fixed"  # "fixed" or "moving" (membrane only)

    def __post_init__(self):
        if self.kind not in ("target", "membrane"):
            raise ValueError("forcing kind must be 'target' or 'membrane'")
        if self.k < 0.0:
            raise ValueError("stiffness must be nonnegative")
        if self.delta_mode not in ("fixed", "moving"):
            raise ValueError("delta_mode must be 'fixed' or 'moving'")
        if self.kind == "target" and self.delta_mode != "fixed":
            raise ValueError("target forcing always uses fixed kernels")


def target_force_update(f_prev, u_markers, k, dt):
    """Advance the spring forces by half a leapfrog period."""
    return f_prev - (dt * k) * u_markers


def membrane_step(x_prev, u_markers, dt):
    """Advance marker positions by half a leapfrog period."""
    return x_prev + dt * u_markers


def _seam_diff(x, axis, l):
    d = np.roll(x, -1, axis=axis) - x
    return d - l * np.round(d / l)


def membrane_force(x, k, h_b, l):
    """Elastic force per unit area from the periodic 5-point Laplacian.

    x is (3, m, m) marker positions; the forward differences along each
    lattice direction are reduced to the nearest image before the second
    difference, so affine-through-the-seam configurations (the rest
    lattice among them) give exactly zero.
    """
    out = np.zeros_like(x)
    for axis in (1, 2):
        d = _seam_diff(x, axis, l)
        out += d - np.roll(d, 1, axis=axis)
    return (k / h_b**2) * out
