"""Background medium, inhomogeneities, sensor curve, incident directions, and imaging grid."""

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ConfigurationError

EPS0 = 8.8541878128e-12  # F/m
MU0 = 4e-7 * math.pi  # H/m


class SmallScattererWarning(UserWarning):
    """An inhomogeneity violates alpha < lambda/2."""


@dataclass(frozen=True)
class Background:
    wavelength: float
    eps0: float = EPS0
    mu0: float = MU0

    def __post_init__(self):
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise ConfigurationError(f"wavelength must be positive, got {self.wavelength}")
        if self.eps0 <= 0 or self.mu0 <= 0:
            raise ConfigurationError("eps0 and mu0 must be positive")

    @classmethod
    def from_frequency(cls, frequency, eps0=EPS0, mu0=MU0):
        if frequency <= 0:
            raise ConfigurationError(f"frequency must be positive, got {frequency}")
        return cls(wavelength=1.0 / (frequency * math.sqrt(eps0 * mu0)), eps0=eps0, mu0=mu0)

    @property
    def k0(self):
        return 2.0 * math.pi / self.wavelength

    @property
    def angular_frequency(self):
        return self.k0 / math.sqrt(self.eps0 * self.mu0)

    @property
    def frequency(self):
        return self.angular_frequency / (2.0 * math.pi)

    def wavenumber_in(self, eps):
        return self.angular_frequency * math.sqrt(eps * self.mu0)


@dataclass(frozen=True)
class Inhomogeneity:
    center: tuple
    radius: float
    eps: float
    shape_area_factor: float = math.pi  # |B| for the unit disk

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != 2:
            raise ConfigurationError("inhomogeneity center must be a 2D point")
        if not self.radius > 0:
            raise ConfigurationError(f"radius must be positive, got {self.radius}")
        if not self.eps > 0:
            raise ConfigurationError(f"permittivity must be positive, got {self.eps}")

    def is_small(self, wavelength):
        return self.radius < wavelength / 2


@dataclass(frozen=True)
class Scene:
    background: Background
    inhomogeneities: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "inhomogeneities", tuple(self.inhomogeneities))
        for a, b in combinations(self.inhomogeneities, 2):
            if a.center == b.center:
                raise ConfigurationError(f"two inhomogeneities share the center {a.center}")
        lam = self.background.wavelength
        for m, inc in enumerate(self.inhomogeneities, 1):
            if not inc.is_small(lam):
                warnings.warn(
                    f"inhomogeneity {m} has radius {inc.radius} >= lambda/2 = {lam / 2}; "
                    "the small-scatterer expansion does not hold",
                    SmallScattererWarning,
                    stacklevel=3,
                )

    @classmethod
    def with_disks(cls, wavelength, disks, eps0=EPS0):
        """Build from ``(center, radius, relative_permittivity)`` triples."""
        bg = Background(wavelength, eps0=eps0)
        return cls(bg, tuple(Inhomogeneity(c, a, er * eps0) for c, a, er in disks))

    @property
    def centers(self):
        return np.array([inc.center for inc in self.inhomogeneities], dtype=float).reshape(-1, 2)

    @property
    def radii(self):
        return np.array([inc.radius for inc in self.inhomogeneities], dtype=float)

    @property
    def permittivities(self):
        return np.array([inc.eps for inc in self.inhomogeneities], dtype=float)

    @property
    def min_separation(self):
        """d0: smallest pairwise center distance (inf for fewer than two)."""
        c = self.centers
        if len(c) < 2:
            return math.inf
        return min(math.dist(a, b) for a, b in combinations(c, 2))

    def small_flags(self):
        return [inc.is_small(self.background.wavelength) for inc in self.inhomogeneities]

    def fingerprint(self):
        """Short stable hash used to tag maps."""
        parts = [repr(self.background)] + [repr(inc) for inc in self.inhomogeneities]
        return hashlib.sha1("|".join(parts).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class SensorArray:
    positions: np.ndarray
    descriptor: dict = field(default_factory=lambda: {"kind": "explicit"})

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float).reshape(-1, 2)
        if len(pos) < 1:
            raise ConfigurationError("sensor array needs at least one position")
        if len(np.unique(pos, axis=0)) != len(pos):
            raise ConfigurationError("sensor positions must be distinct")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    def __len__(self):
        return len(self.positions)

    def encloses(self, points):
        """Even-odd point-in-polygon test against the closed sensor curve."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if self.descriptor.get("kind") == "circle":
            c = np.asarray(self.descriptor.get("center", (0.0, 0.0)))
            return np.hypot(*(pts - c).T) < self.descriptor["radius"]
        poly = self.positions
        if len(poly) < 3:
            return np.zeros(len(pts), dtype=bool)
        x, y = pts[:, 0:1], pts[:, 1:2]
        x1, y1 = poly[:, 0], poly[:, 1]
        x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
        crosses = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        return np.count_nonzero(crosses & (x < xint), axis=1) % 2 == 1


def make_circle_array(radius, count, start_angle=0.0, center=(0.0, 0.0)):
    """``count`` sensors evenly spaced on a circle, the first at ``start_angle``."""
    if not (math.isfinite(radius) and radius > 0):
        raise ConfigurationError(f"circle radius must be positive, got {radius}")
    if int(count) != count or count < 1:
        raise ConfigurationError(f"sensor count must be a positive integer, got {count}")
    theta = start_angle + 2.0 * np.pi * np.arange(count) / count
    pos = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
    desc = {
        "kind": "circle",
        "radius": float(radius),
        "start_angle": float(start_angle),
        "count": int(count),
        "center": tuple(map(float, center)),
    }
    return SensorArray(pos, desc)


@dataclass(frozen=True)
class IncidentSet:
    directions: np.ndarray
    descriptor: dict = field(default_factory=lambda: {"kind": "explicit"})

    def __post_init__(self):
        d = np.array(self.directions, dtype=float).reshape(-1, 2)
        if len(d) < 1:
            raise ConfigurationError("need at least one incident direction")
        norms = np.hypot(d[:, 0], d[:, 1])
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ConfigurationError("incident directions must be unit vectors")
        d.setflags(write=False)
        object.__setattr__(self, "directions", d)

    def __len__(self):
        return len(self.directions)

    def subset(self, indices):
        return IncidentSet(self.directions[list(indices)], {"kind": "explicit"})


def make_direction_set(count, start_angle=0.0):
    if int(count) != count or count < 1:
        raise ConfigurationError(f"direction count must be a positive integer, got {count}")
    theta = start_angle + 2.0 * np.pi * np.arange(count) / count
    d = np.column_stack([np.cos(theta), np.sin(theta)])
    return IncidentSet(d, {"kind": "even", "count": int(count), "start_angle": float(start_angle)})


@dataclass(frozen=True)
class ImagingGrid:
    """Square grid of cell centers.

    Row 0 is the top row (largest y); points are enumerated row-major.
    """

    center: tuple
    side: float
    h: float
    rows: int
    cols: int

    @property
    def xs(self):
        return self.center[0] + (np.arange(self.cols) - (self.cols - 1) / 2) * self.h

    @property
    def ys(self):
        return self.center[1] - (np.arange(self.rows) - (self.rows - 1) / 2) * self.h

    @property
    def shape(self):
        return (self.rows, self.cols)

    def points(self):
        """(rows*cols, 2) array of cell centers, row-major."""
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.column_stack([gx.ravel(), gy.ravel()])

    def index_of(self, point):
        """(row, col) of the cell whose center is nearest to ``point``."""
        col = int(np.clip(np.rint((point[0] - self.xs[0]) / self.h), 0, self.cols - 1))
        row = int(np.clip(np.rint((self.ys[0] - point[1]) / self.h), 0, self.rows - 1))
        return row, col

    def point_at(self, row, col):
        return (float(self.xs[col]), float(self.ys[row]))


def make_grid(center, side, h):
    """Grid of spacing ``h`` whose cells tile a square of the given side.

    The cell count per axis is ``round(side / h)`` (at least 1); the spacing is
    kept exactly ``h`` and the grid is centered on ``center``.
    """
    if not (math.isfinite(side) and side > 0):
        raise ConfigurationError(f"grid side must be positive, got {side}")
    if not (math.isfinite(h) and 0 < h):
        raise ConfigurationError(f"cell size must be positive, got {h}")
    if h > side:
        raise ConfigurationError(f"cell size {h} exceeds grid side {side}")
    n = max(1, int(round(side / h)))
    return ImagingGrid(tuple(map(float, center)), float(side), float(h), n, n)


def check_grid_inside(grid, sensors):
    """Raise if any grid point lies outside the region enclosed by the sensors."""
    inside = sensors.encloses(grid.points())
    if not np.all(inside):
        raise ConfigurationError(
            f"{np.count_nonzero(~inside)} grid points lie outside the measurement curve"
        )
