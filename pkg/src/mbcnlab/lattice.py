"""Square-lattice geometry, site indexing convention and rectangular regions.

Sites live on an n_x x n_y grid. The linear index convention used by every
module is

    site = x + n_x * y,          x in [0, n_x), y in [0, n_y),

i.e. x varies fastest. Boundary conditions only change the neighbor
relation, never the site count.
"""

from dataclasses import dataclass

from .errors import RegionError, ValidationError

BOUNDARIES = ("open", "cylinder-x", "torus")


@dataclass(frozen=True)
class LatticeGeometry:
    n_x: int
    n_y: int
    boundary: str = "open"

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValidationError(f"lattice sides must be >= 1, got {self.n_x}x{self.n_y}")
        if self.boundary not in BOUNDARIES:
            raise ValidationError(f"unknown boundary {self.boundary!r}, expected one of {BOUNDARIES}")

    @property
    def n_sites(self):
        return self.n_x * self.n_y

    def site_index(self, x, y):
        if not (0 <= x < self.n_x and 0 <= y < self.n_y):
            raise ValidationError(f"site ({x}, {y}) outside {self.n_x}x{self.n_y} lattice")
        return x + self.n_x * y

    def site_xy(self, index):
        if not (0 <= index < self.n_sites):
            raise ValidationError(f"site index {index} out of range")
        return index % self.n_x, index // self.n_x

    @property
    def periodic_x(self):
        return self.boundary in ("cylinder-x", "torus")

    @property
    def periodic_y(self):
        return self.boundary == "torus"

    def x_bonds(self):
        """Yield (from_site, to_site, x, y, crosses) for every +x hop."""
        for y in range(self.n_y):
            for x in range(self.n_x - 1):
                yield self.site_index(x, y), self.site_index(x + 1, y), x, y, False
            if self.periodic_x and self.n_x >= 2:
                yield self.site_index(self.n_x - 1, y), self.site_index(0, y), self.n_x - 1, y, True

    def y_bonds(self):
        """Yield (from_site, to_site, x, y, crosses) for every +y hop."""
        for y in range(self.n_y - 1):
            for x in range(self.n_x):
                yield self.site_index(x, y), self.site_index(x, y + 1), x, y, False
        if self.periodic_y and self.n_y >= 2:
            for x in range(self.n_x):
                yield self.site_index(x, self.n_y - 1), self.site_index(x, 0), x, self.n_y - 1, True


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle of sites; does not wrap around boundaries."""

    origin: tuple
    extent: tuple

    def __post_init__(self):
        x0, y0 = self.origin
        lx, ly = self.extent
        if lx < 1 or ly < 1:
            raise RegionError(f"region extent must be >= 1, got {self.extent}")
        if x0 < 0 or y0 < 0:
            raise RegionError(f"region origin must be nonnegative, got {self.origin}")

    @property
    def n_sites(self):
        return self.extent[0] * self.extent[1]

    def check_inside(self, geometry):
        x0, y0 = self.origin
        lx, ly = self.extent
        if x0 + lx > geometry.n_x or y0 + ly > geometry.n_y:
            raise RegionError(
                f"region {self.origin}+{self.extent} does not fit in "
                f"{geometry.n_x}x{geometry.n_y} lattice"
            )

    def sites(self, geometry):
        """Linear site indices in region order: x fastest, then y."""
        self.check_inside(geometry)
        x0, y0 = self.origin
        lx, ly = self.extent
        return [geometry.site_index(x0 + dx, y0 + dy) for dy in range(ly) for dx in range(lx)]

    def site_coords(self):
        """Region-order (x, y) lattice coordinates of the region's sites."""
        x0, y0 = self.origin
        lx, ly = self.extent
        return [(x0 + dx, y0 + dy) for dy in range(ly) for dx in range(lx)]

    def contains(self, x, y):
        x0, y0 = self.origin
        lx, ly = self.extent
        return x0 <= x < x0 + lx and y0 <= y < y0 + ly

    def overlaps(self, other):
        x0, y0 = self.origin
        lx, ly = self.extent
        a0, b0 = other.origin
        la, lb = other.extent
        return x0 < a0 + la and a0 < x0 + lx and y0 < b0 + lb and b0 < y0 + ly


def require_disjoint(r1, r2):
    if r1.overlaps(r2):
        raise RegionError(f"regions must be disjoint: {r1} overlaps {r2}")


def default_regions(geometry, l1, l2, ly):
    """R1 and R2 adjacent along x, jointly centered in the lattice."""
    total = l1 + l2
    if total > geometry.n_x or ly > geometry.n_y:
        raise RegionError(
            f"regions {l1}+{l2} wide, {ly} tall do not fit in "
            f"{geometry.n_x}x{geometry.n_y}"
        )
    x0 = (geometry.n_x - total) // 2
    y0 = (geometry.n_y - ly) // 2
    r1 = Region((x0, y0), (l1, ly))
    r2 = Region((x0 + l1, y0), (l2, ly))
    return r1, r2
