"""The interpolating energy functional and its exact discrete gradient.

The family, parametrized by the supercurrent coupling alpha in [0, 1], is

    E = 1/8 |dphi|^2 + 1/8 |phi*w|^2 + alpha/2 <dC, phi*w>
        + 1/2 |dC|^2 + 1/2 |C|^2

with all norms discrete L^2 (h^3-weighted). At alpha = 0 it splits into the
pure sigma-model-with-Skyrme-term energy for phi plus a decoupled massive
(Proca) energy for C; at alpha = 1 the C coupling is fully switched on.

Discretization: dphi and dC use one-sided differences with Dirichlet
ghosts. The pulled-back area form phi*w is the geodesic plaquette flux
(lattice.geodesic_flux). A stencil cross-product pullback loses the
winding barrier at desk resolutions, because near-antipodal neighbours
make it vanish exactly where the continuum density diverges; the plaquette
flux instead walls off unwinding behind a ~4 pi defect cliff, and it is
the same two-form whose helicity the charge diagnostic integrates.

The gradient is the exact derivative of this discrete sum, h^3 measure
factor included. The phi component is projected to the tangent space of
the target sphere at each site, and both components vanish on the frozen
boundary shell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .lattice import (
    DirectorField,
    OneFormField,
    boundary_mask,
    forward_diff,
    geodesic_flux,
    padded_with_vacuum,
)

__all__ = [
    "EnergyBreakdown",
    "GradientPair",
    "evaluate",
    "evaluate_decomposed",
    "gradient",
    "evaluate_with_gradient",
]

# cyclic index triples (dual component k, axis i, axis j), 0-based
_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))

# the fused kernels compute the identical sums in one sweep; flip off via
# HOPFRELAX_NO_NUMBA or for path-equality tests
use_fused_kernels = kernels.HAVE_NUMBA


@dataclass(frozen=True)
class EnergyBreakdown:
    """The five terms of the energy at a given alpha, plus their sum.

    dirichlet, pullback, dc_sq and c_sq are nonnegative; cross carries the
    sign of <dC, phi*w>.
    """

    dirichlet: float
    pullback: float
    cross: float
    dc_sq: float
    c_sq: float
    alpha: float
    total: float


@dataclass
class GradientPair:
    """Site-wise derivative of the discrete energy: grad_phi tangent to the
    sphere at each site, grad_c unconstrained; both zero on the boundary."""

    grad_phi: np.ndarray
    grad_c: np.ndarray


def _check_inputs(phi: DirectorField, c: OneFormField, alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if phi.lattice != c.lattice:
        raise ValueError("phi and c live on different lattices")


def _phi_diffs(phi: DirectorField):
    return [forward_diff(phi, a) for a in (1, 2, 3)]


def _curl(c: OneFormField) -> np.ndarray:
    dc = [forward_diff(c, a) for a in (1, 2, 3)]
    g = np.empty_like(c.values)
    g[..., 0] = dc[1][..., 2] - dc[2][..., 1]
    g[..., 1] = dc[2][..., 0] - dc[0][..., 2]
    g[..., 2] = dc[0][..., 1] - dc[1][..., 0]
    return g


def _breakdown(s_dphi, s_ff, s_gf, s_gg, s_cc, alpha, spacing) -> EnergyBreakdown:
    h3 = spacing**3
    dirichlet = 0.125 * h3 * s_dphi
    pullback = 0.125 * h3 * s_ff
    cross = 0.5 * alpha * h3 * s_gf
    dc_sq = 0.5 * h3 * s_gg
    c_sq = 0.5 * h3 * s_cc
    total = dirichlet + pullback + cross + dc_sq + c_sq
    return EnergyBreakdown(dirichlet, pullback, cross, dc_sq, c_sq, alpha, total)


def evaluate(phi: DirectorField, c: OneFormField, alpha: float) -> EnergyBreakdown:
    """Five-term breakdown of the discrete energy. Pure and deterministic."""
    _check_inputs(phi, c, alpha)
    if use_fused_kernels:
        sums = kernels.energy_sums(
            phi.values, c.values, phi.vacuum, phi.lattice.spacing
        )
        return _breakdown(*sums, alpha, phi.lattice.spacing)
    dp = _phi_diffs(phi)
    f = geodesic_flux(phi).values
    g = _curl(c)
    s_dphi = float(np.sum(dp[0] * dp[0]) + np.sum(dp[1] * dp[1]) + np.sum(dp[2] * dp[2]))
    s_ff = float(np.sum(f * f))
    s_gf = float(np.sum(g * f))
    s_gg = float(np.sum(g * g))
    s_cc = float(np.sum(c.values * c.values))
    return _breakdown(s_dphi, s_ff, s_gf, s_gg, s_cc, alpha, phi.lattice.spacing)


def evaluate_decomposed(phi: DirectorField, c: OneFormField, alpha: float):
    """Completed-square rearrangement of the same energy:

        1/8 |dphi|^2,  (1-alpha)/8 |phi*w|^2,  (1-alpha)/2 |dC|^2,
        alpha/2 |dC + 1/2 phi*w|^2,  1/2 |C|^2.

    All five entries are nonnegative and their sum equals evaluate(...).total
    up to roundoff; the identity is the module's key self-check.
    """
    _check_inputs(phi, c, alpha)
    dp = _phi_diffs(phi)
    f = geodesic_flux(phi).values
    g = _curl(c)
    h3 = phi.lattice.spacing**3
    s_dphi = float(np.sum(dp[0] * dp[0]) + np.sum(dp[1] * dp[1]) + np.sum(dp[2] * dp[2]))
    r = g + 0.5 * f
    t1 = 0.125 * h3 * s_dphi
    t2 = 0.125 * (1.0 - alpha) * h3 * float(np.sum(f * f))
    t3 = 0.5 * (1.0 - alpha) * h3 * float(np.sum(g * g))
    t4 = 0.5 * alpha * h3 * float(np.sum(r * r))
    t5 = 0.5 * h3 * float(np.sum(c.values * c.values))
    return t1, t2, t3, t4, t5


def _adjoint_diff(w: np.ndarray, axis0: int, spacing: float) -> np.ndarray:
    """Adjoint of the forward difference under the plain site sum:
    (w(y - e_a) - w(y)) / h, zero-padded before the near face."""
    out = -w.copy()
    to = [slice(None)] * w.ndim
    frm = [slice(None)] * w.ndim
    to[axis0] = slice(1, None)
    frm[axis0] = slice(None, -1)
    out[tuple(to)] += w[tuple(frm)]
    out /= spacing
    return out


def _quad_corner_gradients(p0, p1, p2, p3):
    """Derivatives of the spherical quadrilateral area with respect to its
    four corners, as ambient vectors. The quad is split into the triangles
    (p0 p1 p2) and (p0 p2 p3); each contributes
    2 atan2(N, D) with N = a.(b x c) and D = 1 + a.b + b.c + c.a."""

    def dots(a, b):
        return np.einsum("...i,...i->...", a, b)

    n1 = dots(p0, np.cross(p1, p2))
    d1 = 1.0 + dots(p0, p1) + dots(p1, p2) + dots(p2, p0)
    n2 = dots(p0, np.cross(p2, p3))
    d2 = 1.0 + dots(p0, p2) + dots(p2, p3) + dots(p3, p0)
    w1 = (2.0 / (n1 * n1 + d1 * d1))[..., None]
    w2 = (2.0 / (n2 * n2 + d2 * d2))[..., None]
    n1e = n1[..., None]
    d1e = d1[..., None]
    n2e = n2[..., None]
    d2e = d2[..., None]
    g0 = w1 * (d1e * np.cross(p1, p2) - n1e * (p1 + p2)) + w2 * (
        d2e * np.cross(p2, p3) - n2e * (p2 + p3)
    )
    g1 = w1 * (d1e * np.cross(p2, p0) - n1e * (p0 + p2))
    g2 = w1 * (d1e * np.cross(p0, p1) - n1e * (p0 + p1)) + w2 * (
        d2e * np.cross(p3, p0) - n2e * (p0 + p3)
    )
    g3 = w2 * (d2e * np.cross(p0, p2) - n2e * (p0 + p2))
    return g0, g1, g2, g3


def evaluate_with_gradient(phi: DirectorField, c: OneFormField, alpha: float):
    """Energy breakdown plus its exact gradient, sharing one stencil pass."""
    _check_inputs(phi, c, alpha)
    lattice = phi.lattice
    h = lattice.spacing
    if use_fused_kernels:
        sums, grad_phi, grad_c = kernels.energy_gradient_sums(
            phi.values, c.values, phi.vacuum, h, alpha
        )
        breakdown = _breakdown(*sums, alpha, h)
        p = phi.values
        grad_phi -= np.einsum("...i,...i->...", grad_phi, p)[..., None] * p
        mask = boundary_mask(lattice)
        grad_phi[mask] = 0.0
        grad_c[mask] = 0.0
        return breakdown, GradientPair(grad_phi, grad_c)

    h3 = h**3
    n = lattice.n_points
    dp = _phi_diffs(phi)
    f = geodesic_flux(phi).values
    g = _curl(c)
    p = phi.values

    s_dphi = float(np.sum(dp[0] * dp[0]) + np.sum(dp[1] * dp[1]) + np.sum(dp[2] * dp[2]))
    s_ff = float(np.sum(f * f))
    s_gf = float(np.sum(g * f))
    s_gg = float(np.sum(g * g))
    s_cc = float(np.sum(c.values * c.values))
    breakdown = _breakdown(s_dphi, s_ff, s_gf, s_gg, s_cc, alpha, h)

    # dE/dF and dE/dG in dual storage
    v = 0.25 * h3 * f + (0.5 * alpha * h3) * g
    w = (0.5 * alpha * h3) * f + h3 * g

    # phi, Dirichlet part: slot field per difference axis, then adjoints
    grad_phi = np.zeros_like(p)
    for a in range(3):
        grad_phi += _adjoint_diff((0.25 * h3) * dp[a], a, h)

    # phi, flux part: scatter the quad-corner derivatives of every plaquette
    pad = padded_with_vacuum(phi)
    gpad = np.zeros_like(pad)
    eye = np.eye(3, dtype=int)

    def view(arr, d):
        return arr[d[0] : d[0] + n, d[1] : d[1] + n, d[2] : d[2] + n]

    for k, i, j in _CYCLIC:
        c0 = (0, 0, 0)
        c1 = tuple(eye[i])
        c2 = tuple(eye[i] + eye[j])
        c3 = tuple(eye[j])
        g0, g1, g2, g3 = _quad_corner_gradients(
            view(pad, c0), view(pad, c1), view(pad, c2), view(pad, c3)
        )
        vk = (v[..., k] / h**2)[..., None]
        view(gpad, c0)[...] += vk * g0
        view(gpad, c1)[...] += vk * g1
        view(gpad, c2)[...] += vk * g2
        view(gpad, c3)[...] += vk * g3
    grad_phi += gpad[:n, :n, :n]

    # c: mass term plus the curl adjoint
    cslots = [np.zeros_like(p) for _ in range(3)]
    for k, i, j in _CYCLIC:
        cslots[i][..., j] += w[..., k]
        cslots[j][..., i] -= w[..., k]
    grad_c = h3 * c.values
    for a in range(3):
        grad_c += _adjoint_diff(cslots[a], a, h)

    # tangent projection and frozen boundary
    grad_phi -= np.einsum("...i,...i->...", grad_phi, p)[..., None] * p
    mask = boundary_mask(lattice)
    grad_phi[mask] = 0.0
    grad_c[mask] = 0.0
    return breakdown, GradientPair(grad_phi, grad_c)


def gradient(phi: DirectorField, c: OneFormField, alpha: float) -> GradientPair:
    """Exact gradient of the discrete energy (h^3 measure included)."""
    return evaluate_with_gradient(phi, c, alpha)[1]
