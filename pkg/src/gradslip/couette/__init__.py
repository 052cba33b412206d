"""Unsteady Couette flow: moment chain, Navier-Stokes variants and asymptotics."""

from .system import (CouetteSystem, build_couette, KnudsenBasis, couette_knudsen_basis,
                     slip_matrix, couette_slip_constants)
from .solvers import (CosineWall, TabulatedWall, SOLVERS, CouetteRun, CouetteProfile,
                      solve_moment_couette, ns_bc_coefficients, solve_ns_couette, run_couette,
                      l2_norm, profile_difference, fitted_slope, upwind_split, ErrorReport,
                      error_report)
from .asymptotic import AsymptoticCouette, build_asymptotic_couette, heat_value, heat_flux
from .spectral import (MappedGrid, mapped_grid, lgl, moment_reference, ns_reference,
                       default_length, layer_quadrature, SpectralSolution)
