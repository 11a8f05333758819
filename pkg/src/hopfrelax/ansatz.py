"""Initial field configurations of prescribed Hopf charge.

The generator lifts each point of space to the unit three-sphere through a
radial profile, winds the phase of one complex coordinate Q times, and
projects back to the target two-sphere. The result is a toroidally
symmetric unit-vector field whose preimage of the antipode of the vacuum is
a single closed ring, linking number Q, with the supercurrent started at
zero (the decoupled sector is minimized by C = 0).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .lattice import DirectorField, LatticeSpec, OneFormField

__all__ = ["AnsatzParams", "hopfion_ansatz", "vacuum"]

VACUUM = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class AnsatzParams:
    charge: int
    core_radius: float = 1.0
    profile_sharpness: float = 2.0


def vacuum(spec: LatticeSpec) -> tuple[DirectorField, OneFormField]:
    """The trivial sector: phi everywhere at the vacuum vector, C = 0."""
    return DirectorField.uniform(spec, VACUUM), OneFormField.zeros(spec)


def hopfion_ansatz(
    spec: LatticeSpec, params: AnsatzParams
) -> tuple[DirectorField, OneFormField]:
    """Unit-vector field of Hopf charge params.charge, plus C = 0.

    Construction: with f(r) = pi * exp(-(r / core_radius)^sharpness),

        z2 = cos f + i (x3 / r) sin f
        z1 = (rho / r) sin f * exp(i q theta),   rho^2 = x1^2 + x2^2

    and phi = -(2 Re(z1 conj z2), 2 Im(z1 conj z2), |z1|^2 - |z2|^2), the
    overall sign chosen so phi -> (0, 0, 1) far from the core. The phase
    winding q = -charge makes the computed invariant equal +charge with this
    orientation convention. The core ring sits at f(r) = pi/2 in the x3 = 0
    plane, radius core_radius * ln(2)^(1/sharpness).
    """
    if params.charge == 0:
        raise ValueError("charge must be nonzero; use vacuum() for the trivial sector")
    if abs(params.charge) > 3:
        warnings.warn(
            f"charge {params.charge} is outside the tested range |Q| <= 3",
            stacklevel=2,
        )
    if params.core_radius <= 0 or params.profile_sharpness <= 0:
        raise ValueError("core_radius and profile_sharpness must be positive")
    if params.core_radius > spec.edge / 4:
        raise ValueError(
            f"core_radius {params.core_radius} too large for box edge {spec.edge}: "
            "the profile must decay to vacuum before the boundary "
            "(need core_radius <= edge / 4)"
        )

    x, y, z = spec.grids()
    r = np.sqrt(x**2 + y**2 + z**2)
    r_safe = np.where(r > 0.0, r, 1.0)
    f = np.pi * np.exp(-((r / params.core_radius) ** params.profile_sharpness))
    sf = np.sin(f)
    cf = np.cos(f)

    z2 = cf + 1j * (z / r_safe) * sf
    amp = (np.sqrt(x**2 + y**2) / r_safe) * sf
    theta = np.arctan2(y, x)
    z1 = amp * np.exp(-1j * params.charge * theta)

    w = z1 * np.conj(z2)
    values = np.empty(spec.shape + (3,))
    values[..., 0] = -2.0 * w.real
    values[..., 1] = -2.0 * w.imag
    values[..., 2] = np.abs(z2) ** 2 - np.abs(amp) ** 2

    phi = DirectorField(spec, values, VACUUM.copy())
    phi.normalize()
    phi.clamp_boundary()
    phi.validate()
    return phi, OneFormField.zeros(spec)
