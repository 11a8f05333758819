import numpy as np
import pytest
from hypothesis import settings

from hopfrelax.lattice import DirectorField, LatticeSpec, OneFormField, boundary_mask

settings.register_profile("numeric", deadline=None, max_examples=50)
settings.load_profile("numeric")


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_director(spec: LatticeSpec, rng, amplitude=0.6, vacuum=(0.0, 0.0, 1.0)) -> DirectorField:
    """Random unit-vector field pinned to vacuum on the boundary shell."""
    vac = np.asarray(vacuum, dtype=float)
    values = vac + amplitude * rng.standard_normal(spec.shape + (3,))
    phi = DirectorField(spec, values, vac.copy())
    phi.normalize()
    phi.clamp_boundary()
    return phi


def random_one_form(spec: LatticeSpec, rng, amplitude=0.5) -> OneFormField:
    values = amplitude * rng.standard_normal(spec.shape + (3,))
    c = OneFormField(spec, values)
    c.clamp_boundary()
    return c


def random_tangent(phi: DirectorField, rng, amplitude=1.0) -> np.ndarray:
    """Random perturbation tangent to the sphere at each site, zero on the boundary."""
    delta = amplitude * rng.standard_normal(phi.values.shape)
    delta -= np.einsum("...i,...i->...", delta, phi.values)[..., None] * phi.values
    delta[boundary_mask(phi.lattice)] = 0.0
    return delta


@pytest.fixture
def spec8():
    return LatticeSpec(8, 0.5)


@pytest.fixture
def spec12():
    return LatticeSpec(12, 0.4)
