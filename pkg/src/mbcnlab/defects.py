"""Diagonal defect operators: polarization V, twist W, and the
whole-system polarization trace.

V multiplies each occupied site (x, y) of its region by
exp(1i * 2*pi * s * (y - y_origin) / ell_y); W multiplies by
exp(1i * theta) per particle in its region. Both are diagonal in the
occupation basis, hence unitary phase vectors.
"""

from dataclasses import dataclass

import numpy as np

from .basis import FockState
from .errors import GeometryMismatchError, ValidationError
from .lattice import Region


@dataclass(frozen=True)
class DefectSpec:
    s: int
    region: Region
    ell_y: int
    y_origin: int

    def __post_init__(self):
        if self.s < 1:
            raise ValidationError(f"flux-insertion period s must be >= 1, got {self.s}")
        if self.ell_y < 1:
            raise ValidationError(f"ell_y must be >= 1, got {self.ell_y}")


def make_defect_spec(geometry, region, s, v_span="region"):
    """DefectSpec for the protocol path.

    v_span selects the denominator of the V phase: "region" uses the
    region height with y measured from the region's bottom row, "system"
    uses the full lattice height with absolute y.
    """
    if v_span == "region":
        return DefectSpec(s=s, region=region, ell_y=region.extent[1], y_origin=region.origin[1])
    if v_span == "system":
        return DefectSpec(s=s, region=region, ell_y=geometry.n_y, y_origin=0)
    raise ValidationError(f"v_span must be 'region' or 'system', got {v_span!r}")


def v_site_exponents(spec):
    """Per-region-site V phase exponents (radians), region site order."""
    return np.array(
        [2.0 * np.pi * spec.s * (y - spec.y_origin) / spec.ell_y for (x, y) in spec.region.site_coords()]
    )


def _diagonal_phases(basis, sites, exponents):
    """exp(1i * sum_occupied exponents) over all basis configurations."""
    configs = basis.configurations
    total = np.zeros(basis.dimension, dtype=np.float64)
    for s, e in zip(sites, exponents):
        total += e * ((configs >> s) & 1)
    return np.exp(1j * total)


def v_phase_vector(geometry, basis, spec):
    sites = spec.region.sites(geometry)
    return _diagonal_phases(basis, sites, v_site_exponents(spec))


def apply_V(geometry, state, spec):
    """Polarization defect applied to a state; diagonal and unitary."""
    return FockState(state.basis, state.amplitudes * v_phase_vector(geometry, state.basis, spec))


def w_phase_vector(geometry, basis, region, theta):
    sites = region.sites(geometry)
    return _diagonal_phases(basis, sites, np.full(len(sites), theta))


def apply_W(geometry, state, region, theta):
    """Twist defect exp(1i * theta * N_region); diagonal, 2*pi-periodic."""
    return FockState(state.basis, state.amplitudes * w_phase_vector(geometry, state.basis, region, theta))


def resta_T(geometry, state, s):
    """<psi| prod_{x,y} exp(1i*2*pi*s*y*n(x,y)/n_y) |psi| over the whole lattice.

    The phase winding of this trace under x-flux threading is the
    polarization route to the Chern number; it needs a cycle in x, so open
    boundaries are rejected.
    """
    if geometry.boundary == "open":
        raise GeometryMismatchError("whole-system polarization requires cylinder-x or torus")
    spec = DefectSpec(
        s=s,
        region=Region((0, 0), (geometry.n_x, geometry.n_y)),
        ell_y=geometry.n_y,
        y_origin=0,
    )
    phases = v_phase_vector(geometry, state.basis, spec)
    return complex(np.vdot(state.amplitudes, phases * state.amplitudes))
