"""Bipartition of a fixed-N state over (region, complement) site sets.

Total-number conservation makes the state block-diagonal over the region
particle number k: the configurations with k particles inside the region
are exactly the product of all k-particle region patterns with all
(N - k)-particle complement patterns. `split` reshapes the flat amplitude
vector into one (region x complement) matrix per k; `merge` is its
inverse.
"""

from math import comb

import numpy as np

from .basis import pattern_codes, popcounts
from .errors import CapacityError


def _sub_masks(n_bits, k):
    """All n_bits-wide masks with k bits set, ascending (tiny helper bases)."""
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    out = np.empty(comb(n_bits, k), dtype=np.int64)
    x = (1 << k) - 1
    limit = 1 << n_bits
    i = 0
    while x < limit:
        out[i] = x
        i += 1
        u = x & -x
        v = x + u
        x = v | (((x ^ v) // u) >> 2)
    return out


class RegionBipartition:
    """Index maps between a fixed-N basis and its region/complement blocks."""

    def __init__(self, geometry, basis, region, max_elements=200_000_000):
        self.geometry = geometry
        self.basis = basis
        self.region = region
        self.region_sites = region.sites(geometry)
        in_region = set(self.region_sites)
        self.complement_sites = [s for s in range(geometry.n_sites) if s not in in_region]
        n1 = len(self.region_sites)
        nc = len(self.complement_sites)
        n = basis.n_particles

        configs = basis.configurations
        r_codes = pattern_codes(configs, self.region_sites)
        c_codes = pattern_codes(configs, self.complement_sites)
        k_of = popcounts(r_codes)

        self.sectors = [k for k in range(max(0, n - nc), min(n, n1) + 1)]
        total = sum(comb(n1, k) * comb(nc, n - k) for k in self.sectors)
        if total != basis.dimension:
            raise AssertionError("bipartition does not tile the basis")
        if total > max_elements:
            raise CapacityError(
                f"bipartition of dimension {total} exceeds element budget {max_elements}"
            )

        self.region_patterns = {}
        self.complement_patterns = {}
        self._block_source = {}
        for k in self.sectors:
            rp = _sub_masks(n1, k)
            cp = _sub_masks(nc, n - k)
            self.region_patterns[k] = rp
            self.complement_patterns[k] = cp
            sel = np.nonzero(k_of == k)[0]
            rows = np.searchsorted(rp, r_codes[sel])
            cols = np.searchsorted(cp, c_codes[sel])
            src = np.empty(rp.size * cp.size, dtype=np.int64)
            src[rows * cp.size + cols] = sel
            self._block_source[k] = src

    def sector_dims(self):
        return {k: self.region_patterns[k].size for k in self.sectors}

    def split(self, amplitudes):
        """{k: (d_region x d_complement) block matrix} of a flat vector."""
        blocks = {}
        for k in self.sectors:
            rp = self.region_patterns[k]
            cp = self.complement_patterns[k]
            blocks[k] = amplitudes[self._block_source[k]].reshape(rp.size, cp.size)
        return blocks

    def merge(self, blocks):
        """Inverse of split."""
        out = np.empty(self.basis.dimension, dtype=np.complex128)
        for k in self.sectors:
            out[self._block_source[k]] = blocks[k].reshape(-1)
        return out

    def apply_region_operator(self, amplitudes, blocks_by_k):
        """Apply a region-supported, number-conserving operator given by its
        dense sector blocks (U_k acts on the region index)."""
        split = self.split(amplitudes)
        return self.merge({k: blocks_by_k[k] @ split[k] for k in self.sectors})
