"""Sector unitaries of region ensembles and the 2-design frame potential.

The quench ensemble is number conserving, so its 2-design quality is
assessed sector by sector: the region is treated as a standalone open
lattice, the quench steps are exponentiated densely in one fixed-particle
sector, and the frame potential

    F2 = E_{U,V} |Tr(U^dag V)|^4        (Haar value 2 for dim >= 2)

is estimated over independent sample pairs. A delta ensemble (eta = 0)
gives dim^4, far above the Haar value.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.stats import unitary_group

from .basis import OccupationBasis
from .errors import CapacityError, ValidationError
from .hamiltonians import QuenchSpec, build_quench_step
from .lattice import LatticeGeometry, Region
from .rng import NS_FRAME, NS_HAAR, stream

MAX_DESIGN_REGION_SITES = 12


@dataclass(frozen=True)
class EnsembleSpec:
    """Unitary ensemble on one particle-number sector of a rectangular region."""

    kind: str                 # "quench" or "haar"
    region_shape: tuple       # (l_x, l_y)
    n_particles: int
    J: float = 1.0
    delta: float = 1.0
    t_step: float = 1.0
    eta: int = 20

    def __post_init__(self):
        if self.kind not in ("quench", "haar"):
            raise ValidationError(f"unknown ensemble kind {self.kind!r}")
        lx, ly = self.region_shape
        if lx * ly > MAX_DESIGN_REGION_SITES:
            raise CapacityError(
                f"region of {lx * ly} sites exceeds dense-unitary budget "
                f"({MAX_DESIGN_REGION_SITES} sites)"
            )
        if not (0 <= self.n_particles <= lx * ly):
            raise ValidationError("sector particle number outside [0, region size]")

    def sector_dimension(self):
        from math import comb

        lx, ly = self.region_shape
        return comb(lx * ly, self.n_particles)


def local_quench_sector_unitary(spec, seed):
    """Dense sector unitary of one quench draw on the standalone region."""
    lx, ly = spec.region_shape
    geom = LatticeGeometry(lx, ly, "open")
    basis = OccupationBasis(geom.n_sites, spec.n_particles)
    qspec = QuenchSpec(
        region=Region((0, 0), (lx, ly)),
        J=spec.J,
        delta=spec.delta,
        t_step=spec.t_step,
        eta=spec.eta,
        seed=seed,
    )
    u = np.eye(basis.dimension, dtype=np.complex128)
    for k in range(spec.eta):
        h = build_quench_step(geom, basis, qspec, k).matrix.toarray()
        lam, s = np.linalg.eigh(h)
        u = (s * np.exp(-1j * spec.t_step * lam)) @ s.conj().T @ u
    return u


def sample_sector_unitary(spec, seed):
    if spec.kind == "quench":
        return local_quench_sector_unitary(spec, seed)
    d = spec.sector_dimension()
    if d == 1:
        rng = stream(seed, NS_HAAR)
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(d, random_state=stream(seed, NS_HAAR))


@dataclass
class FramePotentialResult:
    estimate: float
    haar_value: float
    n_samples: int
    sector_dimension: int

    @property
    def relative_deviation(self):
        return abs(self.estimate - self.haar_value) / self.haar_value


def frame_potential_check(ensemble_spec, n_samples, seed=0):
    """Monte Carlo 2-design frame potential of a sector ensemble.

    Averages |Tr(U_i^dag U_j)|^4 over all ordered sample pairs i != j.
    """
    if n_samples < 2:
        raise ValidationError("need at least two samples for pair averaging")
    d = ensemble_spec.sector_dimension()
    flat = np.empty((n_samples, d * d), dtype=np.complex128)
    base = stream(seed, NS_FRAME).integers(0, 2**62)
    for i in range(n_samples):
        flat[i] = sample_sector_unitary(ensemble_spec, int(base) + i).reshape(-1)
    gram = flat.conj() @ flat.T  # gram[i, j] = Tr(U_i^dag U_j)
    mags4 = np.abs(gram) ** 4
    np.fill_diagonal(mags4, 0.0)
    est = float(mags4.sum() / (n_samples * (n_samples - 1)))
    haar = 2.0 if d >= 2 else 1.0
    return FramePotentialResult(est, haar, n_samples, d)
