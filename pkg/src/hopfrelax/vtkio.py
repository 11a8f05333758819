"""Legacy-ASCII structured-points volume writer.

One file carries everything an external viewer needs to reproduce the
standard soliton pictures: the full director vector field, the third
component alone (its zero isosurface bounds the soliton core), and the
supercurrent magnitude for transverse slices.
"""

from __future__ import annotations

import numpy as np

from .lattice import LatticeSpec

__all__ = ["write_structured_points"]


def _flatten_x_fastest(values: np.ndarray) -> np.ndarray:
    """Reorder an (N, N, N, ...) site array to the x-fastest point order."""
    axes = (2, 1, 0) + tuple(range(3, values.ndim))
    return values.transpose(axes).reshape(-1, *values.shape[3:])


def write_structured_points(path, lattice: LatticeSpec, phi_values, c_values, title="hopfrelax state") -> None:
    n = lattice.n_points
    h = lattice.spacing
    phi_flat = _flatten_x_fastest(np.asarray(phi_values))
    cmag_flat = _flatten_x_fastest(np.linalg.norm(np.asarray(c_values), axis=-1))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"{title}\n")
        fh.write("ASCII\n")
        fh.write("DATASET STRUCTURED_POINTS\n")
        fh.write(f"DIMENSIONS {n} {n} {n}\n")
        fh.write(f"ORIGIN {lattice.origin[0]:.17g} {lattice.origin[1]:.17g} {lattice.origin[2]:.17g}\n")
        fh.write(f"SPACING {h:.17g} {h:.17g} {h:.17g}\n")
        fh.write(f"POINT_DATA {n**3}\n")
        fh.write("VECTORS phi double\n")
        np.savetxt(fh, phi_flat, fmt="%.10g")
        fh.write("SCALARS phi3 double 1\n")
        fh.write("LOOKUP_TABLE default\n")
        np.savetxt(fh, phi_flat[:, 2], fmt="%.10g")
        fh.write("SCALARS c_magnitude double 1\n")
        fh.write("LOOKUP_TABLE default\n")
        np.savetxt(fh, cmag_flat, fmt="%.10g")
