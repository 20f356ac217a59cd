"""Longitudinal-plane fluid force terms shared by both phase models."""

from typing import Tuple

import numpy as np

from engines.environment import dynamic_pressure
from engines.errors import SingularityError
from engines.vehicle import CoefficientProvider, VehicleParams


def longitudinal_fluid_forces(
    provider: CoefficientProvider,
    params: VehicleParams,
    rho,
    u: np.ndarray,
    w: np.ndarray,
    q: np.ndarray,
    mach,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(X, Z, M) from the coefficients at (alpha = atan2(w, u), beta = 0), rates scaled by d/(2u)."""
    if np.any(np.asarray(u) <= 0.0):
        raise SingularityError(f"forward velocity must be positive for d/(2u) normalization, min u = {np.min(u):.4g}")
    Q = dynamic_pressure(rho, np.hypot(u, w))
    alpha = np.arctan2(w, u)
    block = provider.coefficients(alpha, 0.0, mach)
    rate = params.diameter / (2.0 * u) * q
    qa = Q * params.reference_area
    X = qa * (block[0, 0] + block[0, 2] * rate)
    Z = qa * (block[2, 0] + block[2, 2] * rate)
    M = qa * params.diameter * (block[4, 0] + block[4, 2] * rate)
    return X, Z, M
