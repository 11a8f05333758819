"""Cubic-lattice field containers and discrete differential operators.

Fields live on an N^3 grid of spacing h. The outermost shell of sites
carries Dirichlet data: the director field equals its vacuum vector there
and one-forms vanish. Forward differences extend every field past the far
faces by a ghost layer holding those same Dirichlet values, so fields are
effectively continued to all of space by constants.

Two-forms are antisymmetric and stored as their dual 3-vector
(F_23, F_31, F_12); cross products and curls then map onto the storage
directly and no redundant components are kept.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticeSpec",
    "DirectorField",
    "OneFormField",
    "TwoFormField",
    "boundary_mask",
    "forward_diff",
    "pullback_two_form",
    "geodesic_flux",
    "exterior_derivative",
    "l2_inner",
    "l2_norm_sq",
]

DEFAULT_VACUUM = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry of a cubic grid: N points per axis including both boundary
    planes, so the physical box edge is (N - 1) * spacing."""

    n_points: int
    spacing: float
    origin: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.n_points < 4:
            raise ValueError(f"n_points must be >= 4, got {self.n_points}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.origin is None:
            half = -0.5 * self.edge
            object.__setattr__(self, "origin", (half, half, half))
        else:
            object.__setattr__(
                self, "origin", tuple(float(v) for v in self.origin)
            )
            if len(self.origin) != 3:
                raise ValueError("origin must have three components")

    @property
    def edge(self) -> float:
        return (self.n_points - 1) * self.spacing

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_points, self.n_points, self.n_points)

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    def axis_coords(self, axis0: int) -> np.ndarray:
        """Physical coordinates of the grid planes along 0-based axis."""
        return self.origin[axis0] + self.spacing * np.arange(self.n_points)

    def grids(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Meshgrid of site coordinates, ij indexing."""
        return np.meshgrid(*(self.axis_coords(a) for a in range(3)), indexing="ij")


@functools.lru_cache(maxsize=16)
def _boundary_mask(n: int) -> np.ndarray:
    m = np.zeros((n, n, n), dtype=bool)
    m[0, :, :] = m[-1, :, :] = True
    m[:, 0, :] = m[:, -1, :] = True
    m[:, :, 0] = m[:, :, -1] = True
    m.setflags(write=False)
    return m


def boundary_mask(spec: LatticeSpec) -> np.ndarray:
    """Boolean mask of the outermost shell of sites (read-only, cached)."""
    return _boundary_mask(spec.n_points)


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass
class DirectorField:
    """Unit 3-vector field phi: every site value lies on the target sphere
    and the boundary shell equals the vacuum vector exactly."""

    lattice: LatticeSpec
    values: np.ndarray
    vacuum: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_VACUUM))

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=float)
        self.vacuum = _as_vec3(self.vacuum)
        if self.values.shape != self.lattice.shape + (3,):
            raise ValueError(
                f"values shape {self.values.shape} does not match lattice "
                f"{self.lattice.shape + (3,)}"
            )

    @classmethod
    def uniform(cls, lattice: LatticeSpec, vacuum=DEFAULT_VACUUM) -> "DirectorField":
        vac = _as_vec3(vacuum)
        values = np.broadcast_to(vac, lattice.shape + (3,)).copy()
        return cls(lattice, values, vac)

    def normalize(self) -> None:
        self.values /= np.linalg.norm(self.values, axis=-1, keepdims=True)

    def clamp_boundary(self) -> None:
        self.values[boundary_mask(self.lattice)] = self.vacuum

    def copy(self) -> "DirectorField":
        return DirectorField(self.lattice, self.values.copy(), self.vacuum.copy())

    def validate(self) -> None:
        norms = np.linalg.norm(self.values, axis=-1)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > 1e-12:
            raise ValueError(f"director field is not unit norm (max deviation {worst:.3e})")
        shell = self.values[boundary_mask(self.lattice)]
        if shell.size and np.any(shell != self.vacuum):
            raise ValueError("boundary shell does not equal the vacuum vector exactly")


@dataclass
class OneFormField:
    """One-form with components (C_1, C_2, C_3) at each site; identically
    zero on the boundary shell."""

    lattice: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=float)
        if self.values.shape != self.lattice.shape + (3,):
            raise ValueError(
                f"values shape {self.values.shape} does not match lattice "
                f"{self.lattice.shape + (3,)}"
            )

    @classmethod
    def zeros(cls, lattice: LatticeSpec) -> "OneFormField":
        return cls(lattice, np.zeros(lattice.shape + (3,)))

    def clamp_boundary(self) -> None:
        self.values[boundary_mask(self.lattice)] = 0.0

    def copy(self) -> "OneFormField":
        return OneFormField(self.lattice, self.values.copy())

    def validate(self) -> None:
        shell = self.values[boundary_mask(self.lattice)]
        if shell.size and np.any(shell != 0.0):
            raise ValueError("one-form boundary shell is not exactly zero")


@dataclass
class TwoFormField:
    """Antisymmetric two-form stored as the dual vector (F_23, F_31, F_12)."""

    lattice: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=float)
        if self.values.shape != self.lattice.shape + (3,):
            raise ValueError(
                f"values shape {self.values.shape} does not match lattice "
                f"{self.lattice.shape + (3,)}"
            )


def _diff_array(values: np.ndarray, axis0: int, spacing: float, ghost) -> np.ndarray:
    """(f(x + h e_a) - f(x)) / h with a constant ghost plane past the far face."""
    shape = list(values.shape)
    shape[axis0] = 1
    plane = np.broadcast_to(np.asarray(ghost, dtype=float), shape)
    return np.diff(values, axis=axis0, append=plane) / spacing


def forward_diff(field, axis: int, *, spacing: float | None = None, boundary=None) -> np.ndarray:
    """One-sided difference along axis in {1, 2, 3}.

    For DirectorField / OneFormField inputs the ghost value past the far
    face is the field's own Dirichlet datum (vacuum vector / zero). Raw
    ndarrays need an explicit ``spacing``; ``boundary`` defaults to 0.
    """
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis!r}")
    ax = axis - 1
    if isinstance(field, DirectorField):
        return _diff_array(field.values, ax, field.lattice.spacing, field.vacuum)
    if isinstance(field, OneFormField):
        return _diff_array(field.values, ax, field.lattice.spacing, 0.0)
    values = np.asarray(field, dtype=float)
    if spacing is None:
        raise ValueError("spacing is required for raw array input")
    ghost = 0.0 if boundary is None else boundary
    return _diff_array(values, ax, spacing, ghost)


def pullback_two_form(phi: DirectorField) -> TwoFormField:
    """Area form of the target sphere pulled back through phi.

    Component k of the dual storage is phi . (d_i phi x d_j phi) for
    (k,i,j) cyclic, built from forward differences.
    """
    d = [forward_diff(phi, a) for a in (1, 2, 3)]
    p = phi.values
    out = np.empty_like(p)
    out[..., 0] = np.einsum("...i,...i->...", p, np.cross(d[1], d[2]))
    out[..., 1] = np.einsum("...i,...i->...", p, np.cross(d[2], d[0]))
    out[..., 2] = np.einsum("...i,...i->...", p, np.cross(d[0], d[1]))
    return TwoFormField(phi.lattice, out)


def _spherical_quad_area(p0, p1, p2, p3):
    """Signed area of the geodesic quadrilateral (p0 p1 p2 p3) on the unit
    sphere, split into two triangles; arrays broadcast over sites."""

    def tri(a, b, c):
        num = np.einsum("...i,...i->...", a, np.cross(b, c))
        den = (
            1.0
            + np.einsum("...i,...i->...", a, b)
            + np.einsum("...i,...i->...", b, c)
            + np.einsum("...i,...i->...", c, a)
        )
        return 2.0 * np.arctan2(num, den)

    return tri(p0, p1, p2) + tri(p0, p2, p3)


def padded_with_vacuum(phi: DirectorField) -> np.ndarray:
    """phi.values extended by one ghost plane of vacuum past each far face."""
    n = phi.lattice.n_points
    pad = np.empty((n + 1, n + 1, n + 1, 3))
    pad[:] = phi.vacuum
    pad[:n, :n, :n] = phi.values
    return pad


def geodesic_flux(phi: DirectorField) -> TwoFormField:
    """Pulled-back area form evaluated plaquette-wise: component k holds the
    signed spherical area swept by phi around the forward (i, j) plaquette
    at each site, divided by h^2.

    Unlike the stencil pullback this two-form is exactly closed on the
    lattice: the six faces of any cube sum to a multiple of 4 pi, zero
    wherever the field is resolved. Winding can therefore only change by
    paying for a near-singular defect, and the helicity built from this
    flux is near-integer already on coarse grids. Agrees with
    pullback_two_form to O(h).
    """
    spec = phi.lattice
    n, h = spec.n_points, spec.spacing
    pad = padded_with_vacuum(phi)

    def take(d):
        return pad[d[0] : d[0] + n, d[1] : d[1] + n, d[2] : d[2] + n]

    eye = np.eye(3, dtype=int)
    out = np.empty(spec.shape + (3,))
    for k, i, j in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        out[..., k] = (
            _spherical_quad_area(
                take((0, 0, 0)), take(eye[i]), take(eye[i] + eye[j]), take(eye[j])
            )
            / h**2
        )
    return TwoFormField(spec, out)


def exterior_derivative(c: OneFormField) -> TwoFormField:
    """dC with components (d_2 C_3 - d_3 C_2, d_3 C_1 - d_1 C_3, d_1 C_2 - d_2 C_1),
    i.e. the forward-difference curl of the component vector."""
    d = [forward_diff(c, a) for a in (1, 2, 3)]
    out = np.empty_like(c.values)
    out[..., 0] = d[1][..., 2] - d[2][..., 1]
    out[..., 1] = d[2][..., 0] - d[0][..., 2]
    out[..., 2] = d[0][..., 1] - d[1][..., 0]
    return TwoFormField(c.lattice, out)


def l2_inner(a, b) -> float:
    """Discrete L^2 pairing: sum over sites of the componentwise dot, times h^3.

    The reduction is numpy's fixed-shape pairwise sum, so the result is
    bit-reproducible for equal shapes regardless of thread count.
    """
    if type(a) is not type(b):
        raise ValueError(f"mismatched field kinds: {type(a).__name__} vs {type(b).__name__}")
    if a.values.shape != b.values.shape:
        raise ValueError(f"shape mismatch: {a.values.shape} vs {b.values.shape}")
    if a.lattice != b.lattice:
        raise ValueError("fields live on different lattices")
    return float(np.sum(a.values * b.values)) * a.lattice.cell_volume


def l2_norm_sq(a) -> float:
    return l2_inner(a, a)
