"""Two-copy SWAP correlator of a defect-dressed state: exact evaluation.

The fast path never materializes the doubled Hilbert space. With the state
split over the R1 bipartition into sector blocks psi_k (region row r,
complement column c), the correlator is

    T(theta) = sum_k sum_{r,r'} vbar(r) v(r') |C_k[r, r']|^2,
    C_k[r, r'] = sum_c e^{i theta N2(c)} psibar_k(r, c) psi_k(r', c),

with v the polarization phases on R1 patterns and N2 the particle count
of the complement pattern inside R2. The doubled-space construction below
is kept as the independent correctness referee; `placement` selects which
copy carries the +theta twist weight ("protocol" matches the statistical
estimator's convention, "printed" is its complex conjugate).
"""

import numpy as np

from .basis import popcounts
from .bipartite import RegionBipartition
from .defects import v_phase_vector, v_site_exponents
from .errors import CapacityError, RegionError, ValidationError
from .lattice import require_disjoint

ORACLE_MAX_SQUARED_DIM = 10_000_000


def _region_pattern_phases(defect_spec, patterns):
    """V phases evaluated on region-local occupation patterns."""
    exps = v_site_exponents(defect_spec)
    total = np.zeros(patterns.shape, dtype=np.float64)
    for j, e in enumerate(exps):
        total += e * ((patterns >> j) & 1)
    return np.exp(1j * total)


def _r2_counts_in_complement(split, r2_sites):
    pos = {s: i for i, s in enumerate(split.complement_sites)}
    mask = 0
    for s in r2_sites:
        mask |= 1 << pos[s]
    return {k: popcounts(split.complement_patterns[k] & mask) for k in split.sectors}


def swap_correlator(geometry, state, r1, r2, defect_spec, thetas, max_elements=200_000_000):
    """T(theta) on a grid, via per-sector reduced-operator contraction."""
    r1.check_inside(geometry)
    r2.check_inside(geometry)
    require_disjoint(r1, r2)
    if defect_spec.region != r1:
        raise ValidationError("polarization defect must be supported on R1")
    split = RegionBipartition(geometry, state.basis, r1, max_elements=max_elements)
    blocks = split.split(state.amplitudes)
    v_by_k = {k: _region_pattern_phases(defect_spec, split.region_patterns[k]) for k in split.sectors}
    n2_by_k = _r2_counts_in_complement(split, r2.sites(geometry))

    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    out = np.zeros(thetas.size, dtype=np.complex128)
    for it, theta in enumerate(thetas):
        acc = 0.0 + 0.0j
        for k in split.sectors:
            psi = blocks[k]
            w = np.exp(1j * theta * n2_by_k[k])
            corr = (psi.conj() * w) @ psi.T
            v = v_by_k[k]
            acc += v.conj() @ (np.abs(corr) ** 2 @ v)
        out[it] = acc
    return out


def swap_r1_configs(a, b, r1_mask):
    """Exchange the R1 occupations of a configuration pair."""
    keep = ~r1_mask
    return (a & keep) | (b & r1_mask), (b & keep) | (a & r1_mask)


def doubled_space_oracle(geometry, state, r1, r2, defect_spec, theta, placement="protocol"):
    """T(theta) by explicit two-copy construction.

    Builds |psi> x |psi>, applies the diagonal defect phases on each copy
    and the explicit R1-swap permutation, and contracts. Only feasible for
    tiny systems: (basis dimension)^2 is capped.
    """
    if placement not in ("protocol", "printed"):
        raise ValidationError(f"unknown placement {placement!r}")
    r1.check_inside(geometry)
    r2.check_inside(geometry)
    require_disjoint(r1, r2)
    if defect_spec.region != r1:
        raise ValidationError("polarization defect must be supported on R1")
    basis = state.basis
    if basis.dimension ** 2 > ORACLE_MAX_SQUARED_DIM:
        raise CapacityError(
            f"doubled space of {basis.dimension}^2 exceeds {ORACLE_MAX_SQUARED_DIM}"
        )
    configs = basis.configurations
    psi = state.amplitudes
    v_full = v_phase_vector(geometry, basis, defect_spec)
    r2_sites = r2.sites(geometry)
    r2_mask_full = 0
    for s in r2_sites:
        r2_mask_full |= 1 << s
    n2_full = popcounts(configs & r2_mask_full)
    w_full = np.exp(1j * theta * n2_full)
    if placement == "printed":
        w_full = w_full.conj()

    r1_mask = 0
    for s in r1.sites(geometry):
        r1_mask |= 1 << s
    k_of = popcounts(configs & r1_mask)

    # ket: W_A V_A |psi,psi>, bra diag: conj(v_A) * conj(w_B)
    ket_a = w_full * v_full * psi
    bra_a = (v_full.conj() * psi.conj())
    bra_b = (w_full.conj() * psi.conj())

    total = 0.0 + 0.0j
    for ia in range(basis.dimension):
        sel = np.nonzero(k_of == k_of[ia])[0]
        if sel.size == 0:
            continue
        b_cfg = configs[sel]
        a_swapped, b_swapped = swap_r1_configs(int(configs[ia]), b_cfg, r1_mask)
        ia_new = basis.index_of(a_swapped)
        ib_new = basis.index_of(b_swapped)
        total += bra_a[ia] * np.sum(bra_b[sel] * ket_a[ia_new] * psi[ib_new])
    return complex(total)
