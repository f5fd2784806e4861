"""Immersed-boundary coupling on periodic grids.

A small laboratory for the leapfrog immersed-boundary scheme: a
spectral incompressible-flow stepper, kernel-based marker coupling,
the two boundary force laws, and the machinery that predicts and
measures the scheme's critical time step.
"""

from .kernel import (KernelTable, bandlimit_ratio, get_table, phi, phi_coeff,
                     phi_hat)
from .spectral import (OperatorSymbols, dft2_boundary, dft3, gradient_symbol,
                       idft2_boundary, idft3, laplacian_symbol,
                       projection_matrix)
from .fluid import (FluidState, StokesSolver, advect, divergence, energy,
                    project_divergence_free, stokes_step)
from .coupling import LagrangianSheet, interpolate, spread
from .forcing import (ForcingModel, membrane_force, membrane_step,
                      target_force_update)
from .stability import (StabilityReport, alias_sum_boundary, alias_sum_fluid,
                        critical_dt_membrane, critical_dt_target,
                        fold_wavenumber, membrane_cmax_table,
                        stability_surface_membrane, stability_surface_target)
from .harness import (CriticalDtResult, RunVerdict, SimConfig,
                      find_critical_dt, membrane_demo, parse_config,
                      poiseuille_experiment, run)

__version__ = "0.1.0"
