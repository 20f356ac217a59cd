"""Added-mass derivation and the mass/Coriolis matrices of the rigid body and the fluid."""

import logging
from typing import Literal, Optional, Tuple

import numpy as np

from engines.errors import ParameterError
from .params import AddedMassSet, VehicleParams

logger = logging.getLogger(__name__)

MomentReference = Literal["cb", "cg"]


def skew(vector: np.ndarray) -> np.ndarray:
    """Cross-product matrix S(a) such that S(a) b = a x b."""
    a1, a2, a3 = vector
    return np.array([
        [0.0, -a3, a2],
        [a3, 0.0, -a1],
        [-a2, a1, 0.0],
    ])


def axial_added_mass_factor(length: float, diameter: float) -> float:
    """Lamb's k1 factor for a prolate spheroid with semi-axes (L/2, d/2)."""
    a = length / 2.0
    b = diameter / 2.0
    if b >= a:
        raise ParameterError(f"axial added mass needs a slender body (L > d), got L={length}, d={diameter}")
    e = np.sqrt(1.0 - (b / a) ** 2)
    alpha_0 = 2.0 * (1.0 - e**2) / e**3 * (0.5 * np.log((1.0 + e) / (1.0 - e)) - e)
    return float(alpha_0 / (2.0 - alpha_0))


def sectional_radius(params: VehicleParams, s: np.ndarray) -> np.ndarray:
    """Hull radius at distance ``s`` aft of the nose tip (ellipsoidal nose, then cylinder)."""
    radius = params.diameter / 2.0
    l_n = params.nose_length
    in_nose = s < l_n
    nose = radius * np.sqrt(np.clip(1.0 - ((l_n - s) / l_n) ** 2, 0.0, None))
    return np.where(in_nose, nose, radius)


def derive_added_mass(
    params: VehicleParams,
    rho: float,
    moment_reference: MomentReference = "cb",
    axial_coefficient: Optional[float] = None,
    strips: int = 1000,
) -> AddedMassSet:
    """Estimate every added-mass derivative of a finless body of revolution.

    The axial term comes from the prolate-spheroid approximation of the hull. The
    heave/sway terms integrate the 2-D sectional added mass rho*pi*r(s)^2 along the
    hull by the midpoint rule, and the coupling and rotary terms use the first and
    second moments of that distribution about ``moment_reference``.

    Args:
        params: Vehicle geometry
        rho: Fluid density (kg/m^3)
        moment_reference: Point the strip moments are taken about ("cb" or "cg")
        axial_coefficient: Optional k1 override for the axial term
        strips: Number of integration strips

    Returns:
        AddedMassSet with the Table-style pairings applied
    """
    if not np.isfinite(rho) or rho <= 0:
        raise ParameterError(f"fluid density must be positive, got {rho}")
    if strips < 1:
        raise ParameterError(f"strip count must be positive, got {strips}")
    if moment_reference not in ("cb", "cg"):
        raise ParameterError(f"unknown moment reference '{moment_reference}', expected 'cb' or 'cg'")

    a = params.length / 2.0
    b = params.diameter / 2.0
    k1 = axial_added_mass_factor(params.length, params.diameter) if axial_coefficient is None else axial_coefficient
    if k1 < 0:
        raise ParameterError(f"axial added-mass coefficient must be non-negative, got {k1}")
    x_udot = -k1 * rho * (4.0 / 3.0) * np.pi * a * b**2

    ds = params.length / strips
    s = (np.arange(strips) + 0.5) * ds
    m_a = rho * np.pi * sectional_radius(params, s) ** 2
    reference = params.cb_position[0] if moment_reference == "cb" else params.cg_position[0]
    xi = s - reference  # positive aft

    s0 = float(np.sum(m_a) * ds)
    s1 = float(np.sum(xi * m_a) * ds)
    s2 = float(np.sum(xi**2 * m_a) * ds)

    added = AddedMassSet(
        x_udot=float(x_udot),
        y_vdot=-s0,
        z_wdot=-s0,
        z_qdot=s1,
        m_wdot=s1,
        y_rdot=-s1,
        n_vdot=-s1,
        m_qdot=-s2,
        n_rdot=-s2,
        k_pdot=0.0,
    )
    logger.info(
        f"Added mass derived (rho={rho}, ref={moment_reference}): "
        f"X_udot={added.x_udot:.4f}, Z_wdot={added.z_wdot:.2f}, Z_qdot={added.z_qdot:.3f}, M_qdot={added.m_qdot:.2f}"
    )
    return added


def added_mass_terms(added: AddedMassSet, nu: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Return (M_A, C_A(nu)); C_A is skew-symmetric for every nu."""
    u, v, w, p, q, r = np.asarray(nu, dtype=float)
    a1 = added.x_udot * u
    a2 = added.y_vdot * v + added.y_rdot * r
    a3 = added.z_wdot * w + added.z_qdot * q
    b1 = added.k_pdot * p
    b2 = added.m_wdot * w + added.m_qdot * q
    b3 = added.n_vdot * v + added.n_rdot * r

    c_a = np.array([
        [0.0, 0.0, 0.0, 0.0, -a3, a2],
        [0.0, 0.0, 0.0, a3, 0.0, -a1],
        [0.0, 0.0, 0.0, -a2, a1, 0.0],
        [0.0, -a3, a2, 0.0, -b3, b2],
        [a3, 0.0, -a1, b3, 0.0, -b1],
        [-a2, a1, 0.0, -b2, b1, 0.0],
    ])
    return added.mass_matrix(), c_a


def rigid_body_terms(params: VehicleParams, nu: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Return (M_RB, C_RB(nu)) for a body frame with its origin at the cg."""
    nu = np.asarray(nu, dtype=float)
    inertia = np.diag(params.inertia)
    m_rb = np.diag([params.mass] * 3 + list(params.inertia))

    s_lin = skew(nu[:3])
    c_rb = np.zeros((6, 6))
    c_rb[:3, 3:] = -params.mass * s_lin
    c_rb[3:, :3] = -params.mass * s_lin
    c_rb[3:, 3:] = -skew(inertia @ nu[3:])
    return m_rb, c_rb
