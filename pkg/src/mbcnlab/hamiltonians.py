"""Sparse Hermitian operators in the fixed-N occupation basis.

Two families: the magnetic (Hofstadter) tunneling Hamiltonian with
selectable boundary and twist angles, and the disordered hopping
Hamiltonians of the random quench, supported on one rectangular region.

Gauge convention (Landau): +y hops from column x carry exp(-i*flux*(x - gauge_origin)).
On periodic-x lattices the wrap-around +x hop at row y carries the
compensating phase exp(+i*flux*n_x*y) so every plaquette encloses the same
flux; twist angles multiply boundary-crossing hops by exp(+i*theta).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .basis import FockState
from .errors import FluxCommensurabilityError, ValidationError
from .lattice import Region
from .rng import NS_QUENCH, stream

HERMITICITY_TOL = 1e-12


@dataclass
class SparseOperator:
    """CSR operator acting within one particle-number sector."""

    basis: object
    matrix: sp.csr_matrix
    hermitian: bool = True

    def matvec(self, vec):
        return self.matrix.dot(vec)

    def apply(self, state):
        return FockState(state.basis, self.matrix.dot(state.amplitudes))

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def hermiticity_defect(self):
        d = self.matrix - self.matrix.getH()
        return 0.0 if d.nnz == 0 else float(np.abs(d.data).max())


@dataclass(frozen=True)
class HofstadterSpec:
    J: float = 1.0
    flux: float = 0.0  # flux per plaquette, radians
    theta_x: float = 0.0
    theta_y: float = 0.0
    gauge_origin: int = 0

    @classmethod
    def from_flux_fraction(cls, p, q, **kw):
        return cls(flux=2.0 * np.pi * p / q, **kw)

    def with_twist(self, theta_x=None, theta_y=None):
        return HofstadterSpec(
            J=self.J,
            flux=self.flux,
            theta_x=self.theta_x if theta_x is None else theta_x,
            theta_y=self.theta_y if theta_y is None else theta_y,
            gauge_origin=self.gauge_origin,
        )


@dataclass(frozen=True)
class QuenchSpec:
    """Random quench drive on one region: hopping J plus Gaussian on-site
    disorder of standard deviation delta, redrawn each step."""

    region: Region
    J: float = 1.0
    delta: float = 1.0
    t_step: float = 1.0
    eta: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.eta < 0:
            raise ValidationError(f"quench depth must be >= 0, got {self.eta}")

    def with_seed(self, seed):
        return QuenchSpec(self.region, self.J, self.delta, self.t_step, self.eta, seed)


def validate_hofstadter(geometry, spec):
    if geometry.boundary == "open" and (spec.theta_x != 0.0 or spec.theta_y != 0.0):
        raise ValidationError("twist angles require periodic boundaries")
    if geometry.boundary == "cylinder-x" and spec.theta_y != 0.0:
        raise ValidationError("theta_y twist requires a torus")
    if geometry.boundary == "torus":
        quanta = spec.flux * geometry.n_sites / (2.0 * np.pi)
        if abs(quanta - round(quanta)) > 1e-9:
            raise FluxCommensurabilityError(
                f"flux {spec.flux:.6f} threads {quanta:.6f} quanta through the "
                f"{geometry.n_x}x{geometry.n_y} torus; must be an integer"
            )


def hofstadter_bonds(geometry, spec):
    """(from_site, to_site, amplitude) for each directed hop of H; the
    reverse hops are implied by hermiticity."""
    validate_hofstadter(geometry, spec)
    bonds = []
    for i, j, x, y, crosses in geometry.x_bonds():
        t = 1.0 + 0.0j
        if crosses:
            t *= np.exp(1j * (spec.flux * geometry.n_x * y + spec.theta_x))
        bonds.append((i, j, t))
    for i, j, x, y, crosses in geometry.y_bonds():
        t = np.exp(-1j * spec.flux * (x - spec.gauge_origin))
        if crosses:
            t *= np.exp(1j * spec.theta_y)
        bonds.append((i, j, t))
    return bonds


def _hopping_matrix(basis, bonds, scale, diagonal=None):
    """Assemble sum_b scale * (t_b a^dag_to a_from + h.c.) + diag in CSR form.

    Column order inside each row is made canonical (sort_indices) so the
    floating-point accumulation order is reproducible.
    """
    configs = basis.configurations
    dim = basis.dimension
    rows, cols, vals = [], [], []
    for i, j, t in bonds:
        for (src, dst, amp) in ((i, j, scale * t), (j, i, scale * np.conj(t))):
            # hop src -> dst : need src occupied, dst empty
            occ_src = (configs >> src) & 1
            occ_dst = (configs >> dst) & 1
            sel = np.nonzero((occ_src == 1) & (occ_dst == 0))[0]
            if sel.size == 0:
                continue
            new = configs[sel] ^ ((1 << src) | (1 << dst))
            rows.append(basis.index_of(new))
            cols.append(sel)
            vals.append(np.full(sel.size, amp, dtype=np.complex128))
    if diagonal is not None:
        idx = np.arange(dim)
        rows.append(idx)
        cols.append(idx)
        vals.append(np.asarray(diagonal, dtype=np.complex128))
    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        vals = np.concatenate(vals)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    m.sum_duplicates()
    m.sort_indices()
    return m


def build_hofstadter(geometry, basis, spec):
    """Magnetic tunneling Hamiltonian; hardcore constraint via the basis."""
    if basis.n_sites != geometry.n_sites:
        raise ValidationError("basis site count does not match geometry")
    bonds = hofstadter_bonds(geometry, spec)
    m = _hopping_matrix(basis, bonds, scale=-spec.J)
    op = SparseOperator(basis, m, hermitian=True)
    defect = op.hermiticity_defect()
    if defect > HERMITICITY_TOL:
        raise ValidationError(f"hermiticity defect {defect:.2e} exceeds {HERMITICITY_TOL}")
    return op


def quench_disorder(spec, k, n_region_sites):
    """Disorder vector of step k, region site order; reproducible from
    (seed, k) alone."""
    rng = stream(spec.seed, NS_QUENCH, k)
    return rng.normal(0.0, spec.delta, size=n_region_sites)


def region_bonds(geometry, region):
    """Nearest-neighbor bonds with both endpoints inside the region."""
    region.check_inside(geometry)
    x0, y0 = region.origin
    lx, ly = region.extent
    bonds = []
    for dy in range(ly):
        for dx in range(lx - 1):
            bonds.append((geometry.site_index(x0 + dx, y0 + dy), geometry.site_index(x0 + dx + 1, y0 + dy)))
    for dy in range(ly - 1):
        for dx in range(lx):
            bonds.append((geometry.site_index(x0 + dx, y0 + dy), geometry.site_index(x0 + dx, y0 + dy + 1)))
    return bonds


def build_quench_step(geometry, basis, spec, k):
    """Quench Hamiltonian of step k: region-internal hopping plus fresh
    on-site disorder; support strictly inside the region."""
    if basis.n_sites != geometry.n_sites:
        raise ValidationError("basis site count does not match geometry")
    sites = spec.region.sites(geometry)
    disorder = quench_disorder(spec, k, len(sites))
    configs = basis.configurations
    diag = np.zeros(basis.dimension, dtype=np.float64)
    for d, s in zip(disorder, sites):
        diag += d * ((configs >> s) & 1)
    bonds = [(i, j, 1.0 + 0.0j) for i, j in region_bonds(geometry, spec.region)]
    m = _hopping_matrix(basis, bonds, scale=-spec.J, diagonal=diag)
    op = SparseOperator(basis, m, hermitian=True)
    defect = op.hermiticity_defect()
    if defect > HERMITICITY_TOL:
        raise ValidationError(f"hermiticity defect {defect:.2e} exceeds {HERMITICITY_TOL}")
    return op
