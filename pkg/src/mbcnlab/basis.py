"""Fixed-number hardcore-boson occupation basis and state vectors.

A configuration is a bitmask over linear site indices (bit i set = site i
occupied). The basis stores all C(n_sites, n_particles) masks in ascending
integer order, which coincides with the combinatorial-number-system
ranking: rank({s_1 < ... < s_N}) = sum_j C(s_j, j). rank/unrank are pure
arithmetic, no hash table.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import (
    CapacityError,
    InvalidConfigurationError,
    InvalidParticleNumberError,
)

MAX_BASIS_DIMENSION = 50_000_000  # configuration store guard (int64 masks)


def _gosper_masks(n_sites, n_particles):
    """All n_sites-bit masks with n_particles bits set, ascending."""
    if n_particles == 0:
        return np.zeros(1, dtype=np.int64)
    dim = comb(n_sites, n_particles)
    out = np.empty(dim, dtype=np.int64)
    x = (1 << n_particles) - 1
    limit = 1 << n_sites
    i = 0
    while x < limit:
        out[i] = x
        i += 1
        u = x & -x
        v = x + u
        x = v | (((x ^ v) // u) >> 2)
    assert i == dim
    return out


class OccupationBasis:
    """Enumerated fixed-N configurations with bidirectional ranking."""

    def __init__(self, n_sites, n_particles):
        if n_sites < 0 or n_particles < 0 or n_particles > n_sites:
            raise InvalidParticleNumberError(
                f"cannot place {n_particles} hardcore bosons on {n_sites} sites"
            )
        if n_sites > 62:
            raise CapacityError(f"{n_sites} sites exceed the 62-bit mask width")
        dim = comb(n_sites, n_particles)
        if dim > MAX_BASIS_DIMENSION:
            raise CapacityError(f"basis dimension {dim} exceeds store limit {MAX_BASIS_DIMENSION}")
        self.n_sites = n_sites
        self.n_particles = n_particles
        self.dimension = dim
        self._configs = _gosper_masks(n_sites, n_particles)
        self._configs.setflags(write=False)

    def __repr__(self):
        return f"OccupationBasis(n_sites={self.n_sites}, n_particles={self.n_particles}, dim={self.dimension})"

    @property
    def configurations(self):
        """All configurations, ascending; read-only view."""
        return self._configs

    def unrank(self, index):
        """Configuration bitmask at a given rank (combinatorial number system)."""
        if not (0 <= index < self.dimension):
            raise InvalidConfigurationError(f"rank {index} outside [0, {self.dimension})")
        mask = 0
        rem = index
        for j in range(self.n_particles, 0, -1):
            # largest c with C(c, j) <= rem
            c = j - 1
            while comb(c + 1, j) <= rem:
                c += 1
            mask |= 1 << c
            rem -= comb(c, j)
        return mask

    def rank(self, config):
        """Rank of a configuration bitmask; inverse of unrank."""
        config = int(config)
        if config < 0 or config >= (1 << self.n_sites):
            raise InvalidConfigurationError(f"mask {config:#x} uses sites outside the lattice")
        if config.bit_count() != self.n_particles:
            raise InvalidConfigurationError(
                f"mask has {config.bit_count()} particles, basis holds {self.n_particles}"
            )
        r = 0
        j = 0
        m = config
        while m:
            site = (m & -m).bit_length() - 1
            j += 1
            r += comb(site, j)
            m &= m - 1
        return r

    def index_of(self, configs):
        """Vectorized rank lookup via binary search on the sorted store."""
        idx = np.searchsorted(self._configs, configs)
        return idx


def occupied_sites(config):
    """Occupied site indices of a mask, ascending."""
    sites = []
    m = int(config)
    while m:
        sites.append((m & -m).bit_length() - 1)
        m &= m - 1
    return sites


def region_mask(sites):
    """Bitmask with the given linear site indices set."""
    m = 0
    for s in sites:
        m |= 1 << s
    return m


def particles_in_region(config, sites):
    """Number of occupied sites of `config` among `sites`."""
    return (int(config) & region_mask(sites)).bit_count()


def restrict(config, sites):
    """Occupation pattern of `config` on `sites`, packed in site-list order.

    Bit j of the result is the occupation of sites[j].
    """
    c = int(config)
    out = 0
    for j, s in enumerate(sites):
        out |= ((c >> s) & 1) << j
    return out


def pattern_codes(configs, sites):
    """Vectorized `restrict` over an array of configuration masks."""
    configs = np.asarray(configs)
    out = np.zeros(configs.shape, dtype=np.int64)
    for j, s in enumerate(sites):
        out |= ((configs >> s) & 1) << j
    return out


def popcounts(codes):
    """Vectorized bit_count for int64 arrays."""
    codes = np.asarray(codes).astype(np.uint64)
    counts = np.zeros(codes.shape, dtype=np.int64)
    while codes.any():
        counts += (codes & np.uint64(1)).astype(np.int64)
        codes >>= np.uint64(1)
    return counts


@dataclass
class FockState:
    """Complex amplitude vector over an occupation basis."""

    basis: OccupationBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.basis.dimension,):
            raise InvalidConfigurationError(
                f"amplitude vector length {self.amplitudes.shape} != basis dimension {self.basis.dimension}"
            )

    @classmethod
    def from_configuration(cls, basis, config):
        amps = np.zeros(basis.dimension, dtype=np.complex128)
        amps[basis.rank(config)] = 1.0
        return cls(basis, amps)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def copy(self):
        return FockState(self.basis, self.amplitudes.copy())

    def normalized(self):
        n = self.norm()
        if n == 0.0:
            raise InvalidConfigurationError("cannot normalize the zero vector")
        return FockState(self.basis, self.amplitudes / n)
