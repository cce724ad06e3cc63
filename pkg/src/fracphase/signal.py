"""
Uniform-grid complex signals, inner products and probability densities.

All integrals use the trapezoid rule on the uniform grid. For smooth,
rapidly decaying integrands this is spectrally accurate.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricGridError, FracPhaseError, GridMismatchError

DEFAULT_HALFWIDTH = 12.0
DEFAULT_POINTS = 1024

# roundoff slack tolerated before a negative density entry is an error
NEGATIVE_SLACK = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x0, x0 + dx, ..., x0 + (n_points - 1) dx``."""

    x0: float
    dx: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.x0) and np.isfinite(self.dx)):
            raise FracPhaseError("grid parameters must be finite")
        if self.dx <= 0:
            raise FracPhaseError(f"grid spacing must be positive, got {self.dx}")
        if self.n_points < 2:
            raise FracPhaseError("a grid needs at least two points")

    @classmethod
    def symmetric(cls, halfwidth=DEFAULT_HALFWIDTH, n_points=DEFAULT_POINTS):
        """Grid on ``[-halfwidth, halfwidth]`` with both endpoints included."""
        dx = 2.0 * halfwidth / (n_points - 1)
        return cls(-halfwidth, dx, int(n_points))

    @classmethod
    def from_points(cls, x, rtol=1e-9):
        """Recover a grid from its sample positions, checking uniformity."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise FracPhaseError("need a 1-D array of at least two positions")
        dx = (x[-1] - x[0]) / (x.size - 1)
        grid = cls(float(x[0]), float(dx), int(x.size))
        if not np.allclose(x, grid.x, rtol=0, atol=rtol * max(1.0, np.abs(x).max())):
            raise FracPhaseError("sample positions are not uniformly spaced")
        return grid

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(self.n_points)

    @property
    def x_end(self):
        return self.x0 + self.dx * (self.n_points - 1)

    @property
    def halfwidth(self):
        """Largest r such that ``[-r, r]`` lies inside the grid."""
        return min(-self.x0, self.x_end)

    @property
    def is_symmetric(self):
        return abs(self.x0 + self.x_end) <= 1e-9 * max(1.0, abs(self.x0))

    def same_as(self, other):
        return (
            self.n_points == other.n_points
            and np.isclose(self.x0, other.x0, rtol=1e-12, atol=1e-12)
            and np.isclose(self.dx, other.dx, rtol=1e-12, atol=0)
        )

    def require_symmetric(self):
        if not self.is_symmetric:
            raise AsymmetricGridError(
                f"grid [{self.x0}, {self.x_end}] is not symmetric about 0"
            )

    def trapezoid_weights(self):
        w = np.full(self.n_points, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w


def _check_same_grid(a, b):
    if not a.same_as(b):
        raise GridMismatchError(f"grids differ: {a} vs {b}")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Complex samples of a signal on a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise FracPhaseError(
                f"expected {self.grid.n_points} samples, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.x

    def norm(self):
        return float(np.sqrt(inner_product(self, self).real))

    def density(self):
        return IntensityProfile(self.grid, np.abs(self.values) ** 2)

    def scaled(self, factor):
        return SampledSignal(self.grid, factor * self.values)

    def reflected(self):
        """Samples of ``x -> psi(-x)``; the grid must be symmetric."""
        self.grid.require_symmetric()
        return SampledSignal(self.grid, self.values[::-1].copy())


@dataclass(frozen=True, eq=False)
class IntensityProfile:
    """Nonnegative density on a uniform grid.

    Entries down to ``-NEGATIVE_SLACK`` are clamped to zero; anything more
    negative is rejected unless ``clamp=True`` is passed to
    :meth:`from_values`.
    """

    grid: Grid
    density: np.ndarray

    def __post_init__(self):
        density = np.asarray(self.density, dtype=float)
        if density.shape != (self.grid.n_points,):
            raise FracPhaseError(
                f"expected {self.grid.n_points} density values, got {density.shape}"
            )
        if np.any(density < -NEGATIVE_SLACK):
            raise FracPhaseError(
                f"density has negative entries (min {density.min():.3e})"
            )
        object.__setattr__(self, "density", np.maximum(density, 0.0))

    @classmethod
    def from_values(cls, grid, values, clamp=False):
        values = np.asarray(values, dtype=float)
        if clamp:
            values = np.maximum(values, 0.0)
        return cls(grid, values)

    @property
    def x(self):
        return self.grid.x

    def total(self):
        return trapezoid(self.density, self.grid)

    def mean(self):
        return trapezoid(self.x * self.density, self.grid)


def trapezoid(values, grid):
    """Trapezoid integral of samples on ``grid``."""
    return np.dot(grid.trapezoid_weights(), values)


def inner_product(phi, psi):
    """``<phi, psi>``, conjugate-linear in ``phi`` and linear in ``psi``."""
    _check_same_grid(phi.grid, psi.grid)
    return complex(trapezoid(np.conj(phi.values) * psi.values, phi.grid))


def total_variation_distance(p, q):
    """Half the L1 distance between two densities on a common grid."""
    _check_same_grid(p.grid, q.grid)
    return float(0.5 * trapezoid(np.abs(p.density - q.density), p.grid))


def sup_difference(p, q):
    _check_same_grid(p.grid, q.grid)
    return float(np.max(np.abs(p.density - q.density)))


def phase_aligned(psi, reference):
    """Multiply ``psi`` by the unit phase that best matches ``reference``."""
    overlap = inner_product(psi, reference)
    if abs(overlap) == 0:
        return psi
    return psi.scaled(overlap / abs(overlap))


# ---------------------------------------------------------------------------
# CSV serialization

def _fmt(v):
    return format(float(v), ".17g")


def signal_to_csv(psi):
    lines = ["x,re,im"]
    for x, v in zip(psi.x, psi.values):
        lines.append(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def intensity_to_csv(profile):
    lines = ["x,density"]
    for x, d in zip(profile.x, profile.density):
        lines.append(f"{_fmt(x)},{_fmt(d)}")
    return "\n".join(lines) + "\n"


def _read_table(text, header):
    stream = io.StringIO(text)
    first = stream.readline().strip().replace(" ", "")
    if first != header:
        raise FracPhaseError(f"expected CSV header {header!r}, got {first!r}")
    try:
        data = np.loadtxt(stream, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise FracPhaseError(f"malformed CSV: {exc}") from exc
    if data.shape[1] != header.count(",") + 1:
        raise FracPhaseError(f"expected {header.count(',') + 1} columns")
    return data


def signal_from_csv(text):
    data = _read_table(text, "x,re,im")
    return SampledSignal(Grid.from_points(data[:, 0]), data[:, 1] + 1j * data[:, 2])


def intensity_from_csv(text):
    data = _read_table(text, "x,density")
    return IntensityProfile(Grid.from_points(data[:, 0]), data[:, 1])
