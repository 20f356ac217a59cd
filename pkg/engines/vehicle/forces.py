"""Force and moment sources acting on the vehicle, all in the body frame."""

import numpy as np

from engines.errors import DomainError, SingularityError
from .coefficients import CoefficientProvider
from .params import ForceMoment, Scalar


def restoring_forces(W: Scalar, B: Scalar, x_b: float, phi: Scalar, theta: Scalar) -> ForceMoment:
    """Gravity and buoyancy with the cb a distance ``x_b`` ahead of the cg. Pass B = 0 in air."""
    if np.any(np.asarray(W) < 0) or np.any(np.asarray(B) < 0):
        raise DomainError(f"weight and buoyancy must be non-negative, got W={W}, B={B}")
    s_theta, c_theta = np.sin(theta), np.cos(theta)
    s_phi, c_phi = np.sin(phi), np.cos(phi)
    return ForceMoment(
        X=(B - W) * s_theta,
        Y=(W - B) * c_theta * s_phi,
        Z=(W - B) * c_theta * c_phi,
        L=0.0 * s_theta,
        M=x_b * B * c_theta * c_phi,
        N=-x_b * B * c_theta * s_phi,
    )


def thrust_forces(
    T: Scalar,
    theta_T: Scalar,
    psi_T: Scalar,
    l_x: float,
    small_angle: bool = False,
) -> ForceMoment:
    """Deflected thrust applied at (l_x, 0, 0) relative to the cg."""
    if np.any(np.asarray(T) < 0):
        raise DomainError(f"thrust must be non-negative, got {T}")
    if small_angle:
        return ForceMoment(
            X=T * np.ones_like(np.asarray(theta_T, dtype=float)),
            Y=T * psi_T,
            Z=-T * theta_T,
            L=0.0 * T,
            M=T * l_x * theta_T,
            N=T * l_x * psi_T,
        )
    c_psi = np.cos(psi_T)
    return ForceMoment(
        X=T * np.cos(theta_T) * c_psi,
        Y=T * np.sin(psi_T),
        Z=-T * np.sin(theta_T) * c_psi,
        L=0.0 * T,
        M=T * l_x * np.sin(theta_T) * c_psi,
        N=T * l_x * np.sin(psi_T),
    )


def rate_factor(d: float, speed: Scalar, p: Scalar, q: Scalar, r: Scalar) -> Scalar:
    """d / (2 V), zero where the speed vanishes and the rates do too."""
    speed = np.asarray(speed, dtype=float)
    rates_present = (np.asarray(p) != 0) | (np.asarray(q) != 0) | (np.asarray(r) != 0)
    if np.any((speed <= 0) & rates_present):
        raise SingularityError("rate normalization d/(2V) undefined at zero speed with nonzero rates")
    safe = np.where(speed > 0, speed, 1.0)
    factor = np.where(speed > 0, d / (2.0 * safe), 0.0)
    return float(factor) if factor.ndim == 0 else factor


def aero_hydro_forces(
    provider: CoefficientProvider,
    Q: Scalar,
    A: float,
    d: float,
    V: Scalar,
    alpha: Scalar,
    beta: Scalar,
    mach: Scalar,
    p: Scalar,
    q: Scalar,
    r: Scalar,
) -> ForceMoment:
    """Coefficient forces QA[Cx, Cy, Cz, dCl, dCm, dCn].

    ``V`` is the speed used to normalize the rates; each coefficient is
    C_i0 + (C_ip p + C_iq q + C_ir r) d / (2V).
    """
    k = rate_factor(d, V, p, q, r)
    block = provider.coefficients(alpha, beta, mach)
    total = block[:, 0] + (block[:, 1] * p + block[:, 2] * q + block[:, 3] * r) * k
    qa = Q * A
    return ForceMoment(
        X=qa * total[0],
        Y=qa * total[1],
        Z=qa * total[2],
        L=qa * d * total[3],
        M=qa * d * total[4],
        N=qa * d * total[5],
    )
