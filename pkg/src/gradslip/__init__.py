"""Grad-type moment equations, their wall boundary conditions and the slip
coefficients obtained from half-space Knudsen-layer problems."""

from .moment_core import (MomentBasis, MomentSystem, build_basis, build_system,
                          MacroState, moments_to_macro)
from .boundary_ops import (assemble_S, assemble_Mo, assemble_E, build_bc, BoundaryOperator,
                           wall_vector, check_maximal_positive, check_strict_dissipativity)
from .half_space import (generalized_eigen, solve_half_space, solve_elemental,
                         slip_coefficients, reference_coefficients, SlipCoefficientSet,
                         ns_slip_bc, REFERENCE_BGK)
from .general_slip_bc import slip_bc_records, specialize_couette

__version__ = "0.1.0"
