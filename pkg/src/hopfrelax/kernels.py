"""Fused single-pass kernels for the hot path of the minimizer.

These reproduce exactly the sums and gradients defined in energy.py (one-
sided differences for dphi and dC, geodesic plaquette flux for phi*w),
restructured as one sweep over sites with contributions scattered to the
affected neighbours. Loops are sequential, so every reduction has a fixed
lexicographic order and results are reproducible bit-for-bit run to run
and independent of thread count. The numpy implementations in energy.py
remain the reference; equality of the two paths is asserted in the tests.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["HAVE_NUMBA", "energy_sums", "energy_gradient_sums"]

HAVE_NUMBA = False
if not os.environ.get("HOPFRELAX_NO_NUMBA"):
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        HAVE_NUMBA = False

if HAVE_NUMBA:

    @njit(cache=True, fastmath=False)
    def _energy_sums_impl(phi, c, vacuum, h):
        n = phi.shape[0]
        inv_h = 1.0 / h
        inv_h2 = inv_h * inv_h
        vx, vy, vz = vacuum[0], vacuum[1], vacuum[2]
        s_dphi = 0.0
        s_ff = 0.0
        s_gf = 0.0
        s_gg = 0.0
        s_cc = 0.0
        for i in range(n):
            ilast = i == n - 1
            for j in range(n):
                jlast = j == n - 1
                for k in range(n):
                    klast = k == n - 1
                    p0x = phi[i, j, k, 0]
                    p0y = phi[i, j, k, 1]
                    p0z = phi[i, j, k, 2]
                    c0x = c[i, j, k, 0]
                    c0y = c[i, j, k, 1]
                    c0z = c[i, j, k, 2]
                    # neighbour values along +x, +y, +z (ghost = Dirichlet)
                    if ilast:
                        axx, axy, axz = vx, vy, vz
                        cxx, cxy, cxz = 0.0, 0.0, 0.0
                    else:
                        axx = phi[i + 1, j, k, 0]
                        axy = phi[i + 1, j, k, 1]
                        axz = phi[i + 1, j, k, 2]
                        cxx = c[i + 1, j, k, 0]
                        cxy = c[i + 1, j, k, 1]
                        cxz = c[i + 1, j, k, 2]
                    if jlast:
                        ayx, ayy, ayz = vx, vy, vz
                        cyx, cyy, cyz = 0.0, 0.0, 0.0
                    else:
                        ayx = phi[i, j + 1, k, 0]
                        ayy = phi[i, j + 1, k, 1]
                        ayz = phi[i, j + 1, k, 2]
                        cyx = c[i, j + 1, k, 0]
                        cyy = c[i, j + 1, k, 1]
                        cyz = c[i, j + 1, k, 2]
                    if klast:
                        azx, azy, azz = vx, vy, vz
                        czx, czy, czz = 0.0, 0.0, 0.0
                    else:
                        azx = phi[i, j, k + 1, 0]
                        azy = phi[i, j, k + 1, 1]
                        azz = phi[i, j, k + 1, 2]
                        czx = c[i, j, k + 1, 0]
                        czy = c[i, j, k + 1, 1]
                        czz = c[i, j, k + 1, 2]
                    # diagonal corners of the three forward plaquettes
                    if jlast or klast:
                        dyzx, dyzy, dyzz = vx, vy, vz
                    else:
                        dyzx = phi[i, j + 1, k + 1, 0]
                        dyzy = phi[i, j + 1, k + 1, 1]
                        dyzz = phi[i, j + 1, k + 1, 2]
                    if ilast or klast:
                        dzxx, dzxy, dzxz = vx, vy, vz
                    else:
                        dzxx = phi[i + 1, j, k + 1, 0]
                        dzxy = phi[i + 1, j, k + 1, 1]
                        dzxz = phi[i + 1, j, k + 1, 2]
                    if ilast or jlast:
                        dxyx, dxyy, dxyz = vx, vy, vz
                    else:
                        dxyx = phi[i + 1, j + 1, k, 0]
                        dxyy = phi[i + 1, j + 1, k, 1]
                        dxyz = phi[i + 1, j + 1, k, 2]

                    dx0 = (axx - p0x) * inv_h
                    dx1 = (axy - p0y) * inv_h
                    dx2 = (axz - p0z) * inv_h
                    dy0 = (ayx - p0x) * inv_h
                    dy1 = (ayy - p0y) * inv_h
                    dy2 = (ayz - p0z) * inv_h
                    dz0 = (azx - p0x) * inv_h
                    dz1 = (azy - p0y) * inv_h
                    dz2 = (azz - p0z) * inv_h
                    s_dphi += (
                        dx0 * dx0 + dx1 * dx1 + dx2 * dx2
                        + dy0 * dy0 + dy1 * dy1 + dy2 * dy2
                        + dz0 * dz0 + dz1 * dz1 + dz2 * dz2
                    )

                    # curl components (D_i C_j - D_j C_i), cyclic storage
                    dcxy = (cxy - c0y) * inv_h  # D_x C_y
                    dcxz = (cxz - c0z) * inv_h
                    dcyx = (cyx - c0x) * inv_h
                    dcyz = (cyz - c0z) * inv_h
                    dczx = (czx - c0x) * inv_h
                    dczy = (czy - c0y) * inv_h
                    g0 = dcyz - dczy
                    g1 = dczx - dcxz
                    g2 = dcxy - dcyx

                    # plaquette fluxes: k=0 -> (y, z), k=1 -> (z, x), k=2 -> (x, y)
                    # quad (p0, p_i, p_diag, p_j), area = two triangles
                    # k = 0
                    cx0 = ayy * dyzz - ayz * dyzy
                    cx1 = ayz * dyzx - ayx * dyzz
                    cx2 = ayx * dyzy - ayy * dyzx
                    n1 = p0x * cx0 + p0y * cx1 + p0z * cx2
                    d1 = (
                        1.0
                        + p0x * ayx + p0y * ayy + p0z * ayz
                        + ayx * dyzx + ayy * dyzy + ayz * dyzz
                        + dyzx * p0x + dyzy * p0y + dyzz * p0z
                    )
                    cx0 = dyzy * azz - dyzz * azy
                    cx1 = dyzz * azx - dyzx * azz
                    cx2 = dyzx * azy - dyzy * azx
                    n2 = p0x * cx0 + p0y * cx1 + p0z * cx2
                    d2 = (
                        1.0
                        + p0x * dyzx + p0y * dyzy + p0z * dyzz
                        + dyzx * azx + dyzy * azy + dyzz * azz
                        + azx * p0x + azy * p0y + azz * p0z
                    )
                    b0 = (2.0 * math.atan2(n1, d1) + 2.0 * math.atan2(n2, d2)) * inv_h2
                    # k = 1
                    cx0 = azy * dzxz - azz * dzxy
                    cx1 = azz * dzxx - azx * dzxz
                    cx2 = azx * dzxy - azy * dzxx
                    n1 = p0x * cx0 + p0y * cx1 + p0z * cx2
                    d1 = (
                        1.0
                        + p0x * azx + p0y * azy + p0z * azz
                        + azx * dzxx + azy * dzxy + azz * dzxz
                        + dzxx * p0x + dzxy * p0y + dzxz * p0z
                    )
                    cx0 = dzxy * axz - dzxz * axy
                    cx1 = dzxz * axx - dzxx * axz
                    cx2 = dzxx * axy - dzxy * axx
                    n2 = p0x * cx0 + p0y * cx1 + p0z * cx2
                    d2 = (
                        1.0
                        + p0x * dzxx + p0y * dzxy + p0z * dzxz
                        + dzxx * axx + dzxy * axy + dzxz * axz
                        + axx * p0x + axy * p0y + axz * p0z
                    )
                    b1 = (2.0 * math.atan2(n1, d1) + 2.0 * math.atan2(n2, d2)) * inv_h2
                    # k = 2
                    cx0 = axy * dxyz - axz * dxyy
                    cx1 = axz * dxyx - axx * dxyz
                    cx2 = axx * dxyy - axy * dxyx
                    n1 = p0x * cx0 + p0y * cx1 + p0z * cx2
                    d1 = (
                        1.0
                        + p0x * axx + p0y * axy + p0z * axz
                        + axx * dxyx + axy * dxyy + axz * dxyz
                        + dxyx * p0x + dxyy * p0y + dxyz * p0z
                    )
                    cx0 = dxyy * ayz - dxyz * ayy
                    cx1 = dxyz * ayx - dxyx * ayz
                    cx2 = dxyx * ayy - dxyy * ayx
                    n2 = p0x * cx0 + p0y * cx1 + p0z * cx2
                    d2 = (
                        1.0
                        + p0x * dxyx + p0y * dxyy + p0z * dxyz
                        + dxyx * ayx + dxyy * ayy + dxyz * ayz
                        + ayx * p0x + ayy * p0y + ayz * p0z
                    )
                    b2 = (2.0 * math.atan2(n1, d1) + 2.0 * math.atan2(n2, d2)) * inv_h2

                    s_ff += b0 * b0 + b1 * b1 + b2 * b2
                    s_gf += g0 * b0 + g1 * b1 + g2 * b2
                    s_gg += g0 * g0 + g1 * g1 + g2 * g2
                    s_cc += c0x * c0x + c0y * c0y + c0z * c0z
        return s_dphi, s_ff, s_gf, s_gg, s_cc

    @njit(cache=True, inline="always")
    def _scatter_quad(
        gphi, n, h2term,
        i0, j0, k0, i1, j1, k1, i2, j2, k2, i3, j3, k3,
        p0x, p0y, p0z, p1x, p1y, p1z, p2x, p2y, p2z, p3x, p3y, p3z,
    ):
        """Add h2term * d(quad area)/d(corner) to the four corner sites."""
        # triangle (p0, p1, p2)
        x12x = p1y * p2z - p1z * p2y
        x12y = p1z * p2x - p1x * p2z
        x12z = p1x * p2y - p1y * p2x
        n1 = p0x * x12x + p0y * x12y + p0z * x12z
        d1 = (
            1.0
            + p0x * p1x + p0y * p1y + p0z * p1z
            + p1x * p2x + p1y * p2y + p1z * p2z
            + p2x * p0x + p2y * p0y + p2z * p0z
        )
        # triangle (p0, p2, p3)
        x23x = p2y * p3z - p2z * p3y
        x23y = p2z * p3x - p2x * p3z
        x23z = p2x * p3y - p2y * p3x
        n2 = p0x * x23x + p0y * x23y + p0z * x23z
        d2 = (
            1.0
            + p0x * p2x + p0y * p2y + p0z * p2z
            + p2x * p3x + p2y * p3y + p2z * p3z
            + p3x * p0x + p3y * p0y + p3z * p0z
        )
        w1 = 2.0 * h2term / (n1 * n1 + d1 * d1)
        w2 = 2.0 * h2term / (n2 * n2 + d2 * d2)

        # corner 0 (in both triangles)
        gx = w1 * (d1 * x12x - n1 * (p1x + p2x)) + w2 * (d2 * x23x - n2 * (p2x + p3x))
        gy = w1 * (d1 * x12y - n1 * (p1y + p2y)) + w2 * (d2 * x23y - n2 * (p2y + p3y))
        gz = w1 * (d1 * x12z - n1 * (p1z + p2z)) + w2 * (d2 * x23z - n2 * (p2z + p3z))
        gphi[i0, j0, k0, 0] += gx
        gphi[i0, j0, k0, 1] += gy
        gphi[i0, j0, k0, 2] += gz
        # corner 1
        if i1 < n and j1 < n and k1 < n:
            x20x = p2y * p0z - p2z * p0y
            x20y = p2z * p0x - p2x * p0z
            x20z = p2x * p0y - p2y * p0x
            gphi[i1, j1, k1, 0] += w1 * (d1 * x20x - n1 * (p0x + p2x))
            gphi[i1, j1, k1, 1] += w1 * (d1 * x20y - n1 * (p0y + p2y))
            gphi[i1, j1, k1, 2] += w1 * (d1 * x20z - n1 * (p0z + p2z))
        # corner 2 (in both triangles)
        if i2 < n and j2 < n and k2 < n:
            x01x = p0y * p1z - p0z * p1y
            x01y = p0z * p1x - p0x * p1z
            x01z = p0x * p1y - p0y * p1x
            x30x = p3y * p0z - p3z * p0y
            x30y = p3z * p0x - p3x * p0z
            x30z = p3x * p0y - p3y * p0x
            gphi[i2, j2, k2, 0] += w1 * (d1 * x01x - n1 * (p0x + p1x)) + w2 * (
                d2 * x30x - n2 * (p0x + p3x)
            )
            gphi[i2, j2, k2, 1] += w1 * (d1 * x01y - n1 * (p0y + p1y)) + w2 * (
                d2 * x30y - n2 * (p0y + p3y)
            )
            gphi[i2, j2, k2, 2] += w1 * (d1 * x01z - n1 * (p0z + p1z)) + w2 * (
                d2 * x30z - n2 * (p0z + p3z)
            )
        # corner 3
        if i3 < n and j3 < n and k3 < n:
            x02x = p0y * p2z - p0z * p2y
            x02y = p0z * p2x - p0x * p2z
            x02z = p0x * p2y - p0y * p2x
            gphi[i3, j3, k3, 0] += w2 * (d2 * x02x - n2 * (p0x + p2x))
            gphi[i3, j3, k3, 1] += w2 * (d2 * x02y - n2 * (p0y + p2y))
            gphi[i3, j3, k3, 2] += w2 * (d2 * x02z - n2 * (p0z + p2z))

    @njit(cache=True, fastmath=False)
    def _energy_gradient_sums_impl(phi, c, vacuum, h, alpha, gphi, gc):
        n = phi.shape[0]
        inv_h = 1.0 / h
        inv_h2 = inv_h * inv_h
        h3 = h * h * h
        cf = 0.25 * h3
        ca = 0.5 * alpha * h3
        vx, vy, vz = vacuum[0], vacuum[1], vacuum[2]
        s_dphi = 0.0
        s_ff = 0.0
        s_gf = 0.0
        s_gg = 0.0
        s_cc = 0.0
        for i in range(n):
            ilast = i == n - 1
            for j in range(n):
                jlast = j == n - 1
                for k in range(n):
                    klast = k == n - 1
                    p0x = phi[i, j, k, 0]
                    p0y = phi[i, j, k, 1]
                    p0z = phi[i, j, k, 2]
                    c0x = c[i, j, k, 0]
                    c0y = c[i, j, k, 1]
                    c0z = c[i, j, k, 2]
                    if ilast:
                        axx, axy, axz = vx, vy, vz
                        cxx, cxy, cxz = 0.0, 0.0, 0.0
                    else:
                        axx = phi[i + 1, j, k, 0]
                        axy = phi[i + 1, j, k, 1]
                        axz = phi[i + 1, j, k, 2]
                        cxx = c[i + 1, j, k, 0]
                        cxy = c[i + 1, j, k, 1]
                        cxz = c[i + 1, j, k, 2]
                    if jlast:
                        ayx, ayy, ayz = vx, vy, vz
                        cyx, cyy, cyz = 0.0, 0.0, 0.0
                    else:
                        ayx = phi[i, j + 1, k, 0]
                        ayy = phi[i, j + 1, k, 1]
                        ayz = phi[i, j + 1, k, 2]
                        cyx = c[i, j + 1, k, 0]
                        cyy = c[i, j + 1, k, 1]
                        cyz = c[i, j + 1, k, 2]
                    if klast:
                        azx, azy, azz = vx, vy, vz
                        czx, czy, czz = 0.0, 0.0, 0.0
                    else:
                        azx = phi[i, j, k + 1, 0]
                        azy = phi[i, j, k + 1, 1]
                        azz = phi[i, j, k + 1, 2]
                        czx = c[i, j, k + 1, 0]
                        czy = c[i, j, k + 1, 1]
                        czz = c[i, j, k + 1, 2]
                    if jlast or klast:
                        dyzx, dyzy, dyzz = vx, vy, vz
                    else:
                        dyzx = phi[i, j + 1, k + 1, 0]
                        dyzy = phi[i, j + 1, k + 1, 1]
                        dyzz = phi[i, j + 1, k + 1, 2]
                    if ilast or klast:
                        dzxx, dzxy, dzxz = vx, vy, vz
                    else:
                        dzxx = phi[i + 1, j, k + 1, 0]
                        dzxy = phi[i + 1, j, k + 1, 1]
                        dzxz = phi[i + 1, j, k + 1, 2]
                    if ilast or jlast:
                        dxyx, dxyy, dxyz = vx, vy, vz
                    else:
                        dxyx = phi[i + 1, j + 1, k, 0]
                        dxyy = phi[i + 1, j + 1, k, 1]
                        dxyz = phi[i + 1, j + 1, k, 2]

                    # Dirichlet sums + slot adjoint scatter
                    dx0 = (axx - p0x) * inv_h
                    dx1 = (axy - p0y) * inv_h
                    dx2 = (axz - p0z) * inv_h
                    dy0 = (ayx - p0x) * inv_h
                    dy1 = (ayy - p0y) * inv_h
                    dy2 = (ayz - p0z) * inv_h
                    dz0 = (azx - p0x) * inv_h
                    dz1 = (azy - p0y) * inv_h
                    dz2 = (azz - p0z) * inv_h
                    s_dphi += (
                        dx0 * dx0 + dx1 * dx1 + dx2 * dx2
                        + dy0 * dy0 + dy1 * dy1 + dy2 * dy2
                        + dz0 * dz0 + dz1 * dz1 + dz2 * dz2
                    )
                    cfh = cf * inv_h
                    gphi[i, j, k, 0] -= cfh * (dx0 + dy0 + dz0)
                    gphi[i, j, k, 1] -= cfh * (dx1 + dy1 + dz1)
                    gphi[i, j, k, 2] -= cfh * (dx2 + dy2 + dz2)
                    if not ilast:
                        gphi[i + 1, j, k, 0] += cfh * dx0
                        gphi[i + 1, j, k, 1] += cfh * dx1
                        gphi[i + 1, j, k, 2] += cfh * dx2
                    if not jlast:
                        gphi[i, j + 1, k, 0] += cfh * dy0
                        gphi[i, j + 1, k, 1] += cfh * dy1
                        gphi[i, j + 1, k, 2] += cfh * dy2
                    if not klast:
                        gphi[i, j, k + 1, 0] += cfh * dz0
                        gphi[i, j, k + 1, 1] += cfh * dz1
                        gphi[i, j, k + 1, 2] += cfh * dz2

                    # curl of c
                    dcxy = (cxy - c0y) * inv_h
                    dcxz = (cxz - c0z) * inv_h
                    dcyx = (cyx - c0x) * inv_h
                    dcyz = (cyz - c0z) * inv_h
                    dczx = (czx - c0x) * inv_h
                    dczy = (czy - c0y) * inv_h
                    g0 = dcyz - dczy
                    g1 = dczx - dcxz
                    g2 = dcxy - dcyx

                    # plaquette fluxes (same quads as the energy kernel)
                    x0 = ayy * dyzz - ayz * dyzy
                    x1 = ayz * dyzx - ayx * dyzz
                    x2 = ayx * dyzy - ayy * dyzx
                    n1 = p0x * x0 + p0y * x1 + p0z * x2
                    d1 = (
                        1.0
                        + p0x * ayx + p0y * ayy + p0z * ayz
                        + ayx * dyzx + ayy * dyzy + ayz * dyzz
                        + dyzx * p0x + dyzy * p0y + dyzz * p0z
                    )
                    x0 = dyzy * azz - dyzz * azy
                    x1 = dyzz * azx - dyzx * azz
                    x2 = dyzx * azy - dyzy * azx
                    n2 = p0x * x0 + p0y * x1 + p0z * x2
                    d2 = (
                        1.0
                        + p0x * dyzx + p0y * dyzy + p0z * dyzz
                        + dyzx * azx + dyzy * azy + dyzz * azz
                        + azx * p0x + azy * p0y + azz * p0z
                    )
                    b0 = (2.0 * math.atan2(n1, d1) + 2.0 * math.atan2(n2, d2)) * inv_h2

                    x0 = azy * dzxz - azz * dzxy
                    x1 = azz * dzxx - azx * dzxz
                    x2 = azx * dzxy - azy * dzxx
                    n1 = p0x * x0 + p0y * x1 + p0z * x2
                    d1 = (
                        1.0
                        + p0x * azx + p0y * azy + p0z * azz
                        + azx * dzxx + azy * dzxy + azz * dzxz
                        + dzxx * p0x + dzxy * p0y + dzxz * p0z
                    )
                    x0 = dzxy * axz - dzxz * axy
                    x1 = dzxz * axx - dzxx * axz
                    x2 = dzxx * axy - dzxy * axx
                    n2 = p0x * x0 + p0y * x1 + p0z * x2
                    d2 = (
                        1.0
                        + p0x * dzxx + p0y * dzxy + p0z * dzxz
                        + dzxx * axx + dzxy * axy + dzxz * axz
                        + axx * p0x + axy * p0y + axz * p0z
                    )
                    b1 = (2.0 * math.atan2(n1, d1) + 2.0 * math.atan2(n2, d2)) * inv_h2

                    x0 = axy * dxyz - axz * dxyy
                    x1 = axz * dxyx - axx * dxyz
                    x2 = axx * dxyy - axy * dxyx
                    n1 = p0x * x0 + p0y * x1 + p0z * x2
                    d1 = (
                        1.0
                        + p0x * axx + p0y * axy + p0z * axz
                        + axx * dxyx + axy * dxyy + axz * dxyz
                        + dxyx * p0x + dxyy * p0y + dxyz * p0z
                    )
                    x0 = dxyy * ayz - dxyz * ayy
                    x1 = dxyz * ayx - dxyx * ayz
                    x2 = dxyx * ayy - dxyy * ayx
                    n2 = p0x * x0 + p0y * x1 + p0z * x2
                    d2 = (
                        1.0
                        + p0x * dxyx + p0y * dxyy + p0z * dxyz
                        + dxyx * ayx + dxyy * ayy + dxyz * ayz
                        + ayx * p0x + ayy * p0y + ayz * p0z
                    )
                    b2 = (2.0 * math.atan2(n1, d1) + 2.0 * math.atan2(n2, d2)) * inv_h2

                    s_ff += b0 * b0 + b1 * b1 + b2 * b2
                    s_gf += g0 * b0 + g1 * b1 + g2 * b2
                    s_gg += g0 * g0 + g1 * g1 + g2 * g2
                    s_cc += c0x * c0x + c0y * c0y + c0z * c0z

                    v0 = cf * b0 + ca * g0
                    v1 = cf * b1 + ca * g1
                    v2 = cf * b2 + ca * g2
                    w0 = ca * b0 + h3 * g0
                    w1_ = ca * b1 + h3 * g1
                    w2_ = ca * b2 + h3 * g2

                    # flux gradients: quad corners are (x, x+e_i, x+e_i+e_j, x+e_j)
                    _scatter_quad(
                        gphi, n, v0 * inv_h2,
                        i, j, k, i, j + 1, k, i, j + 1, k + 1, i, j, k + 1,
                        p0x, p0y, p0z, ayx, ayy, ayz, dyzx, dyzy, dyzz, azx, azy, azz,
                    )
                    _scatter_quad(
                        gphi, n, v1 * inv_h2,
                        i, j, k, i, j, k + 1, i + 1, j, k + 1, i + 1, j, k,
                        p0x, p0y, p0z, azx, azy, azz, dzxx, dzxy, dzxz, axx, axy, axz,
                    )
                    _scatter_quad(
                        gphi, n, v2 * inv_h2,
                        i, j, k, i + 1, j, k, i + 1, j + 1, k, i, j + 1, k,
                        p0x, p0y, p0z, axx, axy, axz, dxyx, dxyy, dxyz, ayx, ayy, ayz,
                    )

                    # c gradient: mass term + curl slot adjoints with
                    # T_x = (0, w2, -w1), T_y = (-w2, 0, w0), T_z = (w1, -w0, 0);
                    # gc -= (T_x + T_y + T_z)/h at x and gc += T_a/h at x + e_a
                    gc[i, j, k, 0] += h3 * c0x + inv_h * (w2_ - w1_)
                    gc[i, j, k, 1] += h3 * c0y + inv_h * (w0 - w2_)
                    gc[i, j, k, 2] += h3 * c0z + inv_h * (w1_ - w0)
                    if not ilast:
                        gc[i + 1, j, k, 1] += inv_h * w2_
                        gc[i + 1, j, k, 2] -= inv_h * w1_
                    if not jlast:
                        gc[i, j + 1, k, 0] -= inv_h * w2_
                        gc[i, j + 1, k, 2] += inv_h * w0
                    if not klast:
                        gc[i, j, k + 1, 0] += inv_h * w1_
                        gc[i, j, k + 1, 1] -= inv_h * w0
        return s_dphi, s_ff, s_gf, s_gg, s_cc


def energy_sums(phi_values, c_values, vacuum, spacing):
    """Raw unweighted lattice sums (|dphi|^2, |B|^2, G.B, |G|^2, |C|^2)."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba kernels unavailable")
    return _energy_sums_impl(phi_values, c_values, vacuum, spacing)


def energy_gradient_sums(phi_values, c_values, vacuum, spacing, alpha):
    """Raw sums plus the unprojected gradient arrays (h^3 included)."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba kernels unavailable")
    gphi = np.zeros_like(phi_values)
    gc = np.zeros_like(c_values)
    sums = _energy_gradient_sums_impl(
        phi_values, c_values, vacuum, spacing, alpha, gphi, gc
    )
    return sums, gphi, gc
