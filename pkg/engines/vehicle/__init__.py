"""Vehicle parameters, added mass, force sources and the 6-DOF equations of motion."""

from .added_mass import added_mass_terms, derive_added_mass, rigid_body_terms
from .coefficients import COEFFICIENT_COLUMNS, AnalyticCoefficients, CoefficientProvider
from .forces import aero_hydro_forces, restoring_forces, thrust_forces
from .params import AddedMassSet, BodyState6DOF, ForceMoment, VehicleParams
from .six_dof import SixDofModel, SixDofOptions, six_dof_derivative

__all__ = [
    "AddedMassSet",
    "AnalyticCoefficients",
    "BodyState6DOF",
    "COEFFICIENT_COLUMNS",
    "CoefficientProvider",
    "ForceMoment",
    "SixDofModel",
    "SixDofOptions",
    "VehicleParams",
    "added_mass_terms",
    "aero_hydro_forces",
    "derive_added_mass",
    "restoring_forces",
    "rigid_body_terms",
    "six_dof_derivative",
]
