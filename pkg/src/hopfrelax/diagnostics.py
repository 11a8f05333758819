"""Topological and variational measurements on field configurations.

* Hopf invariant through the helicity pairing Q = (1/16 pi^2) sum A.B h^3,
  where B is the dual of the pulled-back area form and A solves the
  discrete curl equation in a divergence-free gauge (Fourier solve on the
  box treated as periodic; the localized B makes the wrap-around
  negligible).
* Core ring of the soliton: the zero set of (phi_1, phi_2) inside the
  phi_3 < 0 region, traced cell-by-cell with a conforming five-tetrahedra
  decomposition and linear interpolation, then linked into polylines.
* Dilation response of the energy terms: closed-form profile E(lambda),
  the virial E'(1) normalized by the total energy, and the squared L^2
  norm of dC + phi*w / 2 whose vanishing signals instability to shrinking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .energy import EnergyBreakdown
from .lattice import (
    DirectorField,
    LatticeSpec,
    OneFormField,
    TwoFormField,
    boundary_mask,
    exterior_derivative,
    geodesic_flux,
    l2_inner,
)

__all__ = [
    "HopfPotential",
    "CoreCurve",
    "geodesic_flux",
    "hopf_potential",
    "hopf_charge",
    "coulomb_divergence",
    "potential_residual",
    "core_curve",
    "derrick_profile",
    "derrick_ratio",
    "instability_norm",
]

MIN_RELIABLE_CORE_CELLS = 3.0  # rings shorter than this many spacings are noise


@dataclass
class HopfPotential:
    """Vector potential A with discrete curl A matching the pullback dual,
    in the gauge where the (periodic) backward-difference divergence vanishes."""

    lattice: LatticeSpec
    values: np.ndarray


@dataclass
class CoreCurve:
    """Polyline through the preimage of the antipode of the vacuum.

    points holds the ordered vertices (closed curves repeat the first point
    at the end); fragments collects any unlinked leftover chains. A curve
    shorter than a few lattice spacings, or one that failed to close, is
    flagged unreliable.
    """

    points: np.ndarray
    closed: bool
    length: float
    reliable: bool
    fragments: list = field(default_factory=list)


def _require_vacuum_boundary(phi: DirectorField, tol: float = 1e-6) -> None:
    shell = phi.values[boundary_mask(phi.lattice)]
    worst = float(np.max(np.abs(shell - phi.vacuum))) if shell.size else 0.0
    if worst > tol:
        raise ValueError(
            f"field does not equal its vacuum on the boundary shell "
            f"(max deviation {worst:.3e}); the invariant needs compactly "
            "supported curvature"
        )


def _solve_curl(b: np.ndarray, spec: LatticeSpec) -> np.ndarray:
    """Divergence-free A with lattice curl A = mean-free part of b, via the
    forward-difference symbol kappa_a = (e^{i k_a h} - 1)/h on the
    periodified box."""
    n, h = spec.n_points, spec.spacing
    b = b - b.mean(axis=(0, 1, 2), keepdims=True)
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
    kappa_1d = (np.exp(1j * k * h) - 1.0) / h
    kappa = [
        kappa_1d.reshape(-1, 1, 1),
        kappa_1d.reshape(1, -1, 1),
        kappa_1d.reshape(1, 1, -1),
    ]
    denom = sum(np.abs(ka) ** 2 for ka in kappa)
    denom[0, 0, 0] = 1.0

    bh = [np.fft.fftn(b[..., a]) for a in range(3)]
    kc = [np.conj(ka) for ka in kappa]
    ah = [
        -(kc[1] * bh[2] - kc[2] * bh[1]) / denom,
        -(kc[2] * bh[0] - kc[0] * bh[2]) / denom,
        -(kc[0] * bh[1] - kc[1] * bh[0]) / denom,
    ]
    for comp in ah:
        comp[0, 0, 0] = 0.0
    return np.stack([np.fft.ifftn(comp).real for comp in ah], axis=-1)


def hopf_potential(phi: DirectorField) -> HopfPotential:
    """Solve curl A = B for the geodesic flux B of phi.

    Because B is exactly closed, its mean-free part is reproduced by the
    lattice curl of A to roundoff, and the gauge condition
    conj(kappa) . A_hat = 0 holds exactly.
    """
    b = geodesic_flux(phi).values
    return HopfPotential(phi.lattice, _solve_curl(b, phi.lattice))


def coulomb_divergence(potential: HopfPotential) -> float:
    """Sup norm of the periodic backward-difference divergence of A;
    vanishes to roundoff in the gauge used by hopf_potential."""
    a = potential.values
    h = potential.lattice.spacing
    div = np.zeros(a.shape[:3])
    for ax in range(3):
        div += (a[..., ax] - np.roll(a[..., ax], 1, axis=ax)) / h
    return float(np.max(np.abs(div)))


def potential_residual(potential: HopfPotential, phi: DirectorField) -> float:
    """Relative L^2 defect of the curl equation: the periodic forward
    difference curl of A against the mean-free geodesic flux of phi."""
    a = potential.values
    h = potential.lattice.spacing
    b = geodesic_flux(phi).values
    b = b - b.mean(axis=(0, 1, 2), keepdims=True)

    def pdiff(arr, ax):
        return (np.roll(arr, -1, axis=ax) - arr) / h

    curl = np.empty_like(a)
    curl[..., 0] = pdiff(a[..., 2], 1) - pdiff(a[..., 1], 2)
    curl[..., 1] = pdiff(a[..., 0], 2) - pdiff(a[..., 2], 0)
    curl[..., 2] = pdiff(a[..., 1], 0) - pdiff(a[..., 0], 1)
    return float(np.sqrt(np.sum((curl - b) ** 2) / np.sum(b**2)))


def hopf_charge(phi: DirectorField) -> float:
    """Helicity pairing (1/16 pi^2) sum A.B h^3 with B the geodesic flux;
    near-integer for resolved localized fields, reported unrounded."""
    _require_vacuum_boundary(phi)
    b = geodesic_flux(phi).values
    a = _solve_curl(b, phi.lattice)
    h3 = phi.lattice.cell_volume
    return float(np.sum(a * b)) * h3 / (16.0 * np.pi**2)


# ---------------------------------------------------------------------------
# core-curve extraction

# cube corners by (dx, dy, dz) bit triples
_CORNERS = np.array(
    [
        (0, 0, 0),
        (1, 0, 0),
        (0, 1, 0),
        (1, 1, 0),
        (0, 0, 1),
        (1, 0, 1),
        (0, 1, 1),
        (1, 1, 1),
    ]
)
_A, _B, _C, _D, _E, _F, _G, _H = range(8)
# five tetrahedra per cube; the odd set is the even one reflected in x so
# face diagonals agree across neighbouring cells
_TETS_EVEN = (
    (_A, _B, _D, _F),
    (_A, _C, _D, _G),
    (_A, _E, _F, _G),
    (_D, _F, _G, _H),
    (_A, _D, _F, _G),
)
_TETS_ODD = (
    (_B, _A, _C, _E),
    (_B, _D, _C, _H),
    (_B, _F, _E, _H),
    (_C, _E, _H, _G),
    (_B, _C, _E, _H),
)
_FACES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))


def _face_zero(pos, u, v, w):
    """Zero of the linear interpolant of (u, v) on a triangle, or None.

    pos: (3,3) vertex coordinates; u, v, w: length-3 vertex values (w is
    carried along for interpolation).
    """
    m00 = u[1] - u[0]
    m01 = u[2] - u[0]
    m10 = v[1] - v[0]
    m11 = v[2] - v[0]
    det = m00 * m11 - m01 * m10
    if det == 0.0:
        return None
    l1 = (-u[0] * m11 + v[0] * m01) / det
    l2 = (u[0] * m10 - v[0] * m00) / det
    l0 = 1.0 - l1 - l2
    if l0 < 0.0 or l1 < 0.0 or l2 < 0.0:
        return None
    point = l0 * pos[0] + l1 * pos[1] + l2 * pos[2]
    winterp = l0 * w[0] + l1 * w[1] + l2 * w[2]
    return point, winterp


def _candidate_cells(u, v, w3):
    """Cells whose corner values allow a joint zero of (u, v) with w3 < 0."""
    n = u.shape[0]

    def corner_stack(arr):
        return np.stack(
            [
                arr[dx : dx + n - 1, dy : dy + n - 1, dz : dz + n - 1]
                for dx, dy, dz in _CORNERS
            ]
        )

    su = corner_stack(u)
    sv = corner_stack(v)
    sw = corner_stack(w3)
    mask = (
        (su.min(axis=0) <= 0.0)
        & (su.max(axis=0) >= 0.0)
        & (sv.min(axis=0) <= 0.0)
        & (sv.max(axis=0) >= 0.0)
        & (sw.min(axis=0) < 0.0)
    )
    return np.argwhere(mask)


def _extract_segments(phi: DirectorField):
    spec = phi.lattice
    h = spec.spacing
    # deterministic tie-break: shift the first component off exact zeros
    u = phi.values[..., 0] + 1e-12
    v = phi.values[..., 1]
    w3 = phi.values[..., 2]
    cells = _candidate_cells(u, v, w3)
    if cells.size == 0:
        return []

    origin = np.asarray(spec.origin)
    segments = []
    for ci, cj, ck in cells:
        tets = _TETS_ODD if (ci + cj + ck) & 1 else _TETS_EVEN
        idx = _CORNERS + (ci, cj, ck)
        pos = origin + h * idx
        uu = u[idx[:, 0], idx[:, 1], idx[:, 2]]
        vv = v[idx[:, 0], idx[:, 1], idx[:, 2]]
        ww = w3[idx[:, 0], idx[:, 1], idx[:, 2]]
        for tet in tets:
            tet = list(tet)
            hits = []
            for fa, fb, fc in _FACES:
                tri = (tet[fa], tet[fb], tet[fc])
                res = _face_zero(
                    pos[list(tri)],
                    uu[list(tri)],
                    vv[list(tri)],
                    ww[list(tri)],
                )
                if res is not None:
                    hits.append(res)
            if len(hits) < 2:
                continue
            # deduplicate coincident face hits (zeros on shared edges)
            pts = [hits[0]]
            for cand in hits[1:]:
                if all(
                    np.linalg.norm(cand[0] - kept[0]) > 1e-9 * h for kept in pts
                ):
                    pts.append(cand)
            if len(pts) != 2:
                continue
            (p0, w0), (p1, w1) = pts
            if 0.5 * (w0 + w1) < 0.0:
                segments.append((p0, p1))
    return segments


def _link_segments(segments, h):
    """Merge coincident endpoints and walk the resulting graph into chains.

    Returns (chains, closed_flags); each chain is an (M, 3) array.
    """
    pts = np.array([p for seg in segments for p in seg])
    tree = cKDTree(pts)
    pairs = tree.query_pairs(r=1e-6 * h)
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    node_of = [find(i) for i in range(len(pts))]
    label = {}
    coords = []
    for i, r in enumerate(node_of):
        if r not in label:
            label[r] = len(coords)
            coords.append(pts[i])
        node_of[i] = label[r]
    coords = np.array(coords)

    edges = []
    seen = set()
    adj = {}
    for s in range(len(segments)):
        a, b = node_of[2 * s], node_of[2 * s + 1]
        if a == b or (min(a, b), max(a, b)) in seen:
            continue
        seen.add((min(a, b), max(a, b)))
        eid = len(edges)
        edges.append((a, b))
        adj.setdefault(a, []).append((eid, b))
        adj.setdefault(b, []).append((eid, a))

    used = [False] * len(edges)
    chains = []
    closed_flags = []
    for start_eid in range(len(edges)):
        if used[start_eid]:
            continue
        used[start_eid] = True
        a, b = edges[start_eid]
        chain = [a, b]
        # extend forward from b, then backward from a
        for endpoint, append in ((b, True), (a, False)):
            node = endpoint
            prev_len = -1
            while prev_len != len(chain):
                prev_len = len(chain)
                options = [
                    (eid, other)
                    for eid, other in adj.get(node, [])
                    if not used[eid]
                ]
                if len(adj.get(node, [])) != 2 or not options:
                    break
                eid, other = options[0]
                used[eid] = True
                if append:
                    chain.append(other)
                else:
                    chain.insert(0, other)
                node = other
                if node == (chain[0] if append else chain[-1]):
                    break
            if chain[0] == chain[-1] and len(chain) > 2:
                break
        is_cycle = chain[0] == chain[-1] and len(chain) > 2
        chains.append(coords[chain])
        closed_flags.append(is_cycle)
    return chains, closed_flags


def _polyline_length(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def core_curve(phi: DirectorField) -> CoreCurve:
    """Trace the zero ring of (phi_1, phi_2) in the phi_3 < 0 region.

    Returns the longest closed polyline; an open chain whose loose ends sit
    within two lattice spacings is snapped shut. If nothing closes, the
    longest fragment is returned with closed = False and the remaining
    pieces in fragments, signalling that the core is no longer resolved.
    """
    h = phi.lattice.spacing
    segments = _extract_segments(phi)
    if not segments:
        return CoreCurve(np.zeros((0, 3)), False, 0.0, False)

    chains, closed_flags = _link_segments(segments, h)
    candidates = []
    leftovers = []
    for pts, is_cycle in zip(chains, closed_flags):
        if is_cycle:
            candidates.append(pts)
        elif len(pts) > 2 and np.linalg.norm(pts[0] - pts[-1]) <= 2.0 * h:
            candidates.append(np.vstack([pts, pts[0]]))
        else:
            leftovers.append(pts)

    if candidates:
        lengths = [_polyline_length(p) for p in candidates]
        best = int(np.argmax(lengths))
        points = candidates.pop(best)
        length = lengths.pop(best)
        leftovers.extend(candidates)
        reliable = length >= MIN_RELIABLE_CORE_CELLS * h
        return CoreCurve(points, True, length, reliable, leftovers)

    lengths = [_polyline_length(p) for p in leftovers]
    best = int(np.argmax(lengths))
    points = leftovers.pop(best)
    return CoreCurve(points, False, lengths[best], False, leftovers)


# ---------------------------------------------------------------------------
# dilation diagnostics


def derrick_profile(terms: EnergyBreakdown, lam: float) -> float:
    """Energy of the configuration rescaled by spatial dilation lambda,
    from the stored term values alone:

        E(lam) = dirichlet / lam + lam * (pullback + cross + dc_sq) + c_sq / lam
    """
    if not lam > 0.0:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    return (
        terms.dirichlet / lam
        + lam * terms.pullback
        + lam * terms.cross
        + lam * terms.dc_sq
        + terms.c_sq / lam
    )


def derrick_ratio(terms: EnergyBreakdown) -> float:
    """Virial E'(1) normalized by the total energy.

    Zero for a critical point on all of space, nonnegative for a genuine
    minimizer in a finite box; negative values flag shrinking instability,
    i.e. a discretization artifact for a box minimizer.
    """
    if not terms.total > 0.0:
        raise ValueError(
            "Derrick ratio undefined for non-positive total energy "
            f"({terms.total}); the vacuum has no dilation response"
        )
    virial = (
        -terms.dirichlet + terms.pullback + terms.cross + terms.dc_sq - terms.c_sq
    )
    return virial / terms.total


def instability_norm(phi: DirectorField, c: OneFormField) -> float:
    """Squared L^2 norm of dC + phi*w / 2, with phi*w discretized by the
    same plaquette flux as the energy (so the C = 0 value equals twice the
    energy's quartic term exactly). Configurations annihilating this can
    be dilated to arbitrarily low energy at full coupling."""
    f = geodesic_flux(phi)
    g = exterior_derivative(c)
    r = TwoFormField(phi.lattice, g.values + 0.5 * f.values)
    return l2_inner(r, r)
